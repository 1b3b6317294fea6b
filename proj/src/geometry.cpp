#include <algorithm>
#include <cmath>

#include "spintorsion/geometry.hpp"

namespace spt {

namespace {

QMat gamma_dense(const Bundle& b, int mu) { return b.gamma(mu).dense(); }

QMat zero_like(const Bundle& b) { return QMat::zero(b.dim(), b.dim()); }

// κ<μ<ν cyclic sum of f(κ,μ,ν)
template <class F>
QMat cyclic(F f, int k, int m, int n) {
    return f(k, m, n) + f(m, n, k) + f(n, k, m);
}

}  // namespace

SpinorConnection killing_connection(const ChargeConjugation& conj, const Cq& a) {
    SpinorConnection conn{Bundle(conj)};
    ConnectionTerm t;
    t.degree = 0;
    t.placement = Placement::wedge;
    t.form = KForm{0, conj.rep().D(), {{{}, a}}};
    conn.add(t);
    return conn;
}

EndArray flat_curvature(const SpinorConnection& conn) {
    const auto& a = conn.a();
    const int D = conn.bundle().D();
    EndArray R(D, std::vector<QMat>(D, zero_like(conn.bundle())));
    for (int m = 0; m < D; ++m)
        for (int n = m + 1; n < D; ++n) {
            R[m][n] = commutator(a[m], a[n]);
            R[n][m] = R[m][n] * Cq(-1);
        }
    return R;
}

CyclicSums flat_cyclic_sums(const SpinorConnection& conn) {
    const Bundle& b = conn.bundle();
    const auto& a = conn.a();
    const auto T = torsion(conn);
    const auto R = flat_curvature(conn);
    CyclicSums out;
    for (const auto& tr : subsets(b.D(), 3)) {
        out.triples.push_back(tr);
        out.dt.push_back(cyclic([&](int k, int m, int n) { return ad_c(b, a[k], T[m][n]); }, tr[0], tr[1], tr[2]));
        out.adr.push_back(
            cyclic([&](int k, int m, int n) { return ad_c(b, R[k][m], gamma_dense(b, n)); }, tr[0], tr[1], tr[2]));
    }
    return out;
}

FlatBianchi flat_bianchi(const SpinorConnection& conn) {
    const Bundle& b = conn.bundle();
    const auto& a = conn.a();
    const auto T = torsion(conn);
    const auto R = flat_curvature(conn);
    FlatBianchi out;
    auto cs = flat_cyclic_sums(conn);
    out.dt = true;
    out.dt_sides_zero = true;
    for (std::size_t k = 0; k < cs.dt.size(); ++k) {
        out.dt = out.dt && cs.dt[k] == cs.adr[k];
        out.dt_sides_zero = out.dt_sides_zero && cs.dt[k].is_zero() && cs.adr[k].is_zero();
    }
    out.dr = true;
    for (const auto& tr : subsets(b.D(), 3))
        out.dr = out.dr && cyclic([&](int k, int m, int n) { return commutator(a[k], R[m][n]); }, tr[0], tr[1], tr[2])
                               .is_zero();
    out.dadr = true;
    out.dadr_half = true;
    for (const auto& q : subsets(b.D(), 4)) {
        std::vector<int> s = q;
        QMat lhs = zero_like(b), rhs = zero_like(b);
        do {
            Cq sg(perm_sign(s));
            lhs = lhs + ad_c(b, a[s[0]], ad_c(b, R[s[1]][s[2]], gamma_dense(b, s[3]))) * sg;
            rhs = rhs + ad_c(b, R[s[0]][s[1]], T[s[2]][s[3]]) * sg;
        } while (std::next_permutation(s.begin(), s.end()));
        out.dadr = out.dadr && lhs == rhs;
        out.dadr_half = out.dadr_half && lhs == rhs * Cq(Rational(1, 2));
    }
    return out;
}

KillingExample killing_example(const ChargeConjugation& conj, const Cq& a) {
    auto conn = killing_connection(conj, a);
    const Bundle& b = conn.bundle();
    const int D = b.D();
    const auto& sig = conj.rep().signature();
    const auto& A = conn.a();
    const auto T = torsion(conn);
    const auto R = flat_curvature(conn);
    KillingExample out;
    out.torsion_4a = out.curvature_2a2 = out.hat_dt_printed = out.hat_dt_measured = out.adr_gamma = true;
    const Cq a2 = a * a;
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            QMat gmn = m == n ? zero_like(b) : QMat(gamma_dense(b, m) * gamma_dense(b, n));
            out.torsion_4a = out.torsion_4a && T[m][n] == gmn * (a * Cq(4));
            out.curvature_2a2 = out.curvature_2a2 && R[m][n] == gmn * (a2 * Cq(2));
            for (int k = 0; k < D; ++k) {
                // g_{κ[μ}γ_{ν]} = ½(g_{κμ}γ_ν - g_{κν}γ_μ)
                QMat skew = zero_like(b);
                if (k == m) skew = skew + gamma_dense(b, n) * Cq(sig.g(k));
                if (k == n) skew = skew - gamma_dense(b, m) * Cq(sig.g(k));
                skew = skew * Cq(Rational(1, 2));
                QMat hat = ad_c(b, A[k], T[m][n]);
                out.hat_dt_printed = out.hat_dt_printed && hat == skew * (a * Cq(-16));
                out.hat_dt_measured = out.hat_dt_measured && hat == skew * (a2 * Cq(-16));
                out.adr_gamma = out.adr_gamma && ad_c(b, R[m][n], gamma_dense(b, k)) == skew * (a2 * Cq(8));
            }
        }
    auto cs = flat_cyclic_sums(conn);
    out.both_sides_vanish = true;
    for (std::size_t k = 0; k < cs.dt.size(); ++k)
        out.both_sides_vanish = out.both_sides_vanish && cs.dt[k].is_zero() && cs.adr[k].is_zero();
    out.admissible = is_admissible(conn).admissible;
    return out;
}

// Holonomy ---------------------------------------------------------------

Holonomy lie_closure(const std::vector<CMat>& generators, double tol) {
    Holonomy H;
    if (generators.empty()) return H;
    const Eigen::Index n = generators[0].rows();
    const Eigen::Index cap = n * n;
    CMat Q(cap, 0);  // orthonormal columns, the vectorized basis
    auto add = [&](const CMat& m, double ref) {
        CVec v = Eigen::Map<const CVec>(m.data(), m.size());
        for (int pass = 0; pass < 2; ++pass) v -= Q * (Q.adjoint() * v);
        const double nv = v.norm();
        if (nv <= tol * ref) return false;
        Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
        Q.col(Q.cols() - 1) = v / nv;
        H.basis.push_back(Eigen::Map<const CMat>(Q.col(Q.cols() - 1).data(), n, n));
        return true;
    };
    double ref = 0;
    for (const auto& g : generators) ref = std::max(ref, g.norm());
    if (ref == 0) return H;
    std::vector<std::size_t> frontier;
    for (const auto& g : generators)
        if (add(g, ref)) frontier.push_back(H.basis.size() - 1);
    H.rounds.push_back(H.basis.size());
    // brackets of new elements with everything older, and among themselves once
    while (!frontier.empty() && Q.cols() < cap) {
        std::vector<std::size_t> next;
        const std::size_t size = H.basis.size();
        for (std::size_t i : frontier) {
            for (std::size_t j = 0; j < size && Q.cols() < cap; ++j) {
                if (j >= frontier.front() && j <= i) continue;
                CMat br = H.basis[i] * H.basis[j] - H.basis[j] * H.basis[i];
                if (add(br, 1.0)) next.push_back(H.basis.size() - 1);
            }
        }
        frontier = std::move(next);
        if (!frontier.empty()) H.rounds.push_back(H.basis.size());
    }
    H.saturated = Q.cols() >= cap;
    return H;
}

Holonomy holonomy_flat(const SpinorConnection& conn) {
    const auto R = flat_curvature(conn);
    std::vector<CMat> gens;
    for (std::size_t m = 0; m < R.size(); ++m)
        for (std::size_t n = m + 1; n < R.size(); ++n) gens.push_back(to_complex(R[m][n]));
    return lie_closure(gens);
}

// su(n) ------------------------------------------------------------------

QVec complex_structure_spinor(const GammaRep& rep, bool bar) {
    const int n = rep.D() / 2;
    const std::size_t N = rep.dim();
    QMat stack = QMat::zero(n * N, N);
    const Cq s = bar ? Cq::i() : -Cq::i();
    for (int a = 0; a < n; ++a) {
        QMat m = rep.gamma_up(a).dense() + rep.gamma_up(a + n).dense() * s;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) stack(a * N + r, c) = m(r, c);
    }
    auto ns = nullspace(stack);
    if (ns.size() != 1) throw std::logic_error("complex structure spinor is not unique");
    return ns.front();
}

namespace {

// Linear conditions on F ∈ Λ³ℂ^{2n}: ι_v F = 0 for v in the isotropic space (n̄ when bar is false),
// and, with su = true, ι_X F ∈ su(n) for every X.
std::vector<KForm> three_forms_with(int n, bool bar, bool su, bool both_isotropic) {
    const int D = 2 * n;
    const auto idx = subsets(D, 3);
    std::map<std::vector<int>, std::size_t> col;
    for (std::size_t k = 0; k < idx.size(); ++k) col[idx[k]] = k;
    std::vector<std::vector<Cq>> rows;
    // coefficient of F_{sorted} in F_{abc}
    auto entry = [&](std::vector<Cq>& row, int a, int b, int c, const Cq& w) {
        std::vector<int> t{a, b, c};
        int sg = perm_sign(t);
        if (sg == 0 || w.is_zero()) return;
        std::sort(t.begin(), t.end());
        row[col[t]] += w * Cq(sg);
    };
    // v = e_a ∓ i e_{a+n}; ι_v F = 0 in the first slot
    auto isotropic = [&](bool which) {
        const Cq s = which ? Cq::i() : -Cq::i();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < D; ++b)
                for (int c = b + 1; c < D; ++c) {
                    std::vector<Cq> row(idx.size());
                    entry(row, a, b, c, Cq(1));
                    entry(row, a + n, b, c, s);
                    rows.push_back(row);
                }
    };
    isotropic(bar);
    if (both_isotropic) isotropic(!bar);
    if (su) {
        // J e_a = e_{a+n}, J e_{a+n} = -e_a, as a matrix J(r, c)
        auto J = [&](int r, int c) -> int {
            if (c < n && r == c + n) return 1;
            if (c >= n && r == c - n) return -1;
            return 0;
        };
        for (int x = 0; x < D; ++x) {
            // ω_{rs} = F_{x r s}; [ω, J] = 0 and tr(Jω) = 0
            for (int r = 0; r < D; ++r)
                for (int s = 0; s < D; ++s) {
                    std::vector<Cq> row(idx.size());
                    for (int k = 0; k < D; ++k) {
                        if (J(k, s)) entry(row, x, r, k, Cq(J(k, s)));
                        if (J(r, k)) entry(row, x, k, s, Cq(-J(r, k)));
                    }
                    rows.push_back(row);
                }
            std::vector<Cq> row(idx.size());
            for (int r = 0; r < D; ++r)
                for (int k = 0; k < D; ++k)
                    if (J(r, k)) entry(row, x, k, r, Cq(J(r, k)));
            rows.push_back(row);
        }
    }
    QMat m = QMat::zero(rows.size(), idx.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) m(r, c) = rows[r][c];
    std::vector<KForm> out;
    for (const auto& v : nullspace(m)) {
        KForm f{3, D, {}};
        for (std::size_t c = 0; c < idx.size(); ++c)
            if (!v[c].is_zero()) f.comp[idx[c]] = v[c];
        out.push_back(f);
    }
    return out;
}

}  // namespace

std::vector<KForm> su_n_forms(int n, bool bar) { return three_forms_with(n, bar, true, false); }
std::vector<KForm> isotropic_forms(int n, bool bar) { return three_forms_with(n, bar, false, false); }

SpinorConnection three_form_connection(const ChargeConjugation& conj, const KForm& F) {
    SpinorConnection conn{Bundle(conj)};
    ConnectionTerm t;
    t.degree = 3;
    t.placement = Placement::contract;
    t.form = F;
    t.coeff = Cq(Rational(1, 2));
    conn.add(t);
    return conn;
}

SuNReport su_n_flat_example(int n) {
    auto rep = std::make_shared<const GammaRep>(Signature::make(0, 2 * n));
    auto conj = build_conjugation(rep, realizable_delta0(*rep).front());
    SuNReport out;
    out.n = n;
    out.dim_nbar = su_n_forms(n, false).size();
    out.dim_n = su_n_forms(n, true).size();
    out.dim_real = three_forms_with(n, false, false, true).size();
    const QVec eta = complex_structure_spinor(*rep, false), eta_bar = complex_structure_spinor(*rep, true);

    auto kills = [&](const std::vector<KForm>& forms, const QVec& s, bool& torsion_ok, bool& hol_ok, bool& adm) {
        for (const auto& F : forms) {
            auto conn = three_form_connection(conj, F);
            auto T = torsion(conn);
            for (const auto& row : T)
                for (const auto& t : row) torsion_ok = torsion_ok && is_zero(t.apply(s));
            for (const auto& a : conn.a()) hol_ok = hol_ok && is_zero(a.apply(s));
            for (const auto& row : flat_curvature(conn))
                for (const auto& r : row) hol_ok = hol_ok && is_zero(r.apply(s));
            adm = adm && is_admissible(conn).admissible;
        }
    };
    // Λ³ ∩ (n̄ ⊗ Λ²): the isotropic condition alone, which is what the torsion sees
    auto iso = three_forms_with(n, false, false, false);
    auto iso_bar = three_forms_with(n, true, false, false);
    out.eta_annihilated = out.eta_bar_annihilated = true;
    out.holonomy_in_su = true;
    out.admissible = true;
    bool hol_iso = true, hol_iso_bar = true;
    kills(su_n_forms(n, false), eta, out.eta_annihilated, out.holonomy_in_su, out.admissible);
    kills(su_n_forms(n, true), eta_bar, out.eta_bar_annihilated, out.holonomy_in_su, out.admissible);
    kills(iso, eta, out.eta_annihilated, hol_iso, out.admissible);
    kills(iso_bar, eta_bar, out.eta_bar_annihilated, hol_iso_bar, out.admissible);
    out.dim_isotropic = iso.size();
    out.isotropic_holonomy_in_su = hol_iso && hol_iso_bar && !iso.empty();

    KForm generic = ones_form(2 * n, 3);
    auto T = torsion(three_form_connection(conj, generic));
    bool any = false;
    for (const auto& row : T)
        for (const auto& t : row) any = any || !is_zero(t.apply(eta));
    out.generic_not_annihilating = any;
    return out;
}

// Skew torsion -----------------------------------------------------------

Tensor::Tensor(int D_, int rank_) : D(D_), rank(rank_) {
    std::size_t n = 1;
    for (int k = 0; k < rank; ++k) n *= static_cast<std::size_t>(D);
    v.assign(n, Cq());
}

Cq& Tensor::operator()(std::initializer_list<int> idx) {
    std::size_t k = 0;
    for (int i : idx) k = k * static_cast<std::size_t>(D) + static_cast<std::size_t>(i);
    return v[k];
}

const Cq& Tensor::operator()(std::initializer_list<int> idx) const {
    std::size_t k = 0;
    for (int i : idx) k = k * static_cast<std::size_t>(D) + static_cast<std::size_t>(i);
    return v[k];
}

Tensor sigma_t(const Signature& sig, const Tensor& T) {
    const int D = T.D;
    // T_{μν}^ρ with the last index raised
    auto Tu = [&](int a, int b, int r) { return T({a, b, r}) * Cq(sig.g(r)); };
    Tensor s(D, 4);
    const std::vector<std::vector<int>> perms{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    const int sgn[6] = {1, 1, 1, -1, -1, -1};
    for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n) {
                    const int x[3] = {k, l, m};
                    Cq acc;
                    for (int p = 0; p < 6; ++p)
                        for (int r = 0; r < D; ++r)
                            acc += Cq(sgn[p]) * T({r, x[perms[p][0]], x[perms[p][1]]}) * Tu(x[perms[p][2]], n, r);
                    // 3 · (1/6) Σ
                    s({k, l, m, n}) = acc * Cq(Rational(1, 2));
                }
    return s;
}

SkewTorsionReport r0_from_skew_torsion(const SpinorConnection& conn) {
    const Bundle& b = conn.bundle();
    const GammaRep& rep = b.rep();
    const auto& sig = rep.signature();
    const int D = b.D();
    const auto& A = conn.a();
    SkewTorsionReport out;

    // vector connection: [A_μ, γ_b] = K^a_{μb} γ_a
    Tensor K(D, 3);  // K(a, μ, b)
    for (int mu = 0; mu < D; ++mu)
        for (int bb = 0; bb < D; ++bb) {
            QMat c = commutator(A[mu], rep.dense(bb));
            for (const auto& [I, v] : gamma_coefficients(rep, c, 1)) K({I[0], mu, bb}) = v;
        }
    // spinor torsion T_{μν} = T_{μν}^κ γ_κ, lowered
    const auto Ts = torsion(conn);
    out.T = Tensor(D, 3);
    out.torsion_matches_vector = true;
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            for (const auto& [I, v] : gamma_coefficients(rep, Ts[m][n], 1)) out.T({m, n, I[0]}) = v * Cq(sig.g(I[0]));
            for (int k = 0; k < D; ++k)
                out.torsion_matches_vector = out.torsion_matches_vector &&
                                             out.T({m, n, k}) == (K({k, m, n}) - K({k, n, m})) * Cq(sig.g(k));
        }
    out.totally_skew = true;
    for (int a = 0; a < D; ++a)
        for (int c = 0; c < D; ++c)
            for (int e = 0; e < D; ++e)
                out.totally_skew = out.totally_skew && out.T({a, c, e}) == -out.T({c, a, e}) &&
                                   out.T({a, c, e}) == -out.T({a, e, c});

    // R_{κλμν} = g(R(e_κ,e_λ)e_μ, e_ν) with R(e_κ,e_λ) = [K_κ, K_λ]
    out.R = Tensor(D, 4);
    for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n) {
                    Cq r;
                    for (int e = 0; e < D; ++e) r += K({n, k, e}) * K({e, l, m}) - K({n, l, e}) * K({e, k, m});
                    out.R({k, l, m, n}) = r * Cq(sig.g(n));
                }
    // D_μ T_{κλν} for constant components
    out.DT = Tensor(D, 4);
    for (int mu = 0; mu < D; ++mu)
        for (int k = 0; k < D; ++k)
            for (int l = 0; l < D; ++l)
                for (int n = 0; n < D; ++n) {
                    Cq s;
                    for (int r = 0; r < D; ++r)
                        s -= K({r, mu, k}) * out.T({r, l, n}) + K({r, mu, l}) * out.T({k, r, n}) +
                             K({r, mu, n}) * out.T({k, l, r});
                    out.DT({mu, k, l, n}) = s;
                }
    auto Tu = [&](int a, int c, int r) { return out.T({a, c, r}) * Cq(sig.g(r)); };
    // D^T_μT_{κλν} = D_μT_{κλν} - T_{ρν[λ}T_{κ]μ}^ρ
    auto dtt = [&](int mu, int k, int l, int n) {
        Cq s;
        for (int r = 0; r < D; ++r) s += out.T({r, n, l}) * Tu(k, mu, r) - out.T({r, n, k}) * Tu(l, mu, r);
        return out.DT({mu, k, l, n}) - s * Cq(Rational(1, 2));
    };
    out.sigma = sigma_t(sig, out.T);
    out.R0 = Tensor(D, 4);
    out.dt_t_zero = true;
    out.r0_zero = true;
    out.flat_identity = true;
    for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n) {
                    Cq tt;
                    for (int r = 0; r < D; ++r) tt += out.T({k, l, r}) * Tu(m, n, r);
                    Cq dpart = (dtt(k, l, m, n) - dtt(l, k, m, n)) * Cq(Rational(1, 2));
                    out.dt_t_zero = out.dt_t_zero && dtt(k, l, m, n).is_zero();
                    Cq r0 = out.R({k, l, m, n}) - dpart - tt * Cq(Rational(1, 4)) - out.sigma({k, l, m, n});
                    out.R0({k, l, m, n}) = r0;
                    out.r0_zero = out.r0_zero && r0.is_zero();
                    out.flat_identity = out.flat_identity &&
                                        out.R({k, l, m, n}) == (tt - out.sigma({k, l, m, n})) * Cq(Rational(1, 4));
                }
    out.sigma_is_form = true;
    for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n) {
                    Cq s = out.sigma({k, l, m, n});
                    out.sigma_is_form = out.sigma_is_form && s == -out.sigma({l, k, m, n}) &&
                                        s == -out.sigma({k, m, l, n}) && s == -out.sigma({k, l, n, m});
                }
    return out;
}

}  // namespace spt
