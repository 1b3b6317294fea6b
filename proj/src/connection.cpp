#include "spintorsion/connection.hpp"

#include <algorithm>
#include <stdexcept>

namespace spt {

namespace {

Mono require_mono(const QMat& m, const char* what) {
    auto r = as_mono(m);
    if (!r) throw std::logic_error(std::string(what) + " is not monomial");
    return *r;
}

int transpose_symmetry(const Mono& m) {
    Mono t = m.transpose();
    if (t == m) return 1;
    if (t == m.times_phase(2)) return -1;
    return 0;
}

Mono inverse(const Mono& m) {
    Mono r;
    r.col.resize(m.dim());
    r.ph.resize(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        r.col[m.col[i]] = static_cast<int>(i);
        r.ph[m.col[i]] = static_cast<unsigned char>((4 - m.ph[i]) % 4);
    }
    return r;
}

int mod4(int x) { return ((x % 4) + 4) % 4; }

int raise_sign(const Signature& sig, const std::vector<int>& idx) {
    int s = 1;
    for (int a : idx) s *= sig.g(a);
    return s;
}

}  // namespace

// Bundle -----------------------------------------------------------------

Bundle::Bundle(const ChargeConjugation& conj) : conj_(conj) {
    c_ = require_mono(conj.c(), "charge conjugation");
    cinv_ = inverse(c_);
    for (int mu = 0; mu < conj.rep().D(); ++mu) gam_.push_back(conj.rep().gamma(mu));
    measure();
}

Bundle::Bundle(const ChargeConjugation& conj, int twist_i) : conj_(conj), doubled_(true), twist_(twist_i) {
    if (twist_i < 0 || twist_i > 3) throw std::invalid_argument("twist label must be 0..3");
    Mono tau = require_mono(pauli_set().tau[twist_i], "τ");
    c_ = kron(require_mono(conj.c(), "charge conjugation"), tau);
    cinv_ = inverse(c_);
    for (int mu = 0; mu < conj.rep().D(); ++mu) gam_.push_back(lift(conj.rep().gamma(mu)));
    measure();
}

void Bundle::measure() {
    delta0_ = transpose_symmetry(c_);
    delta1_ = gam_.empty() ? 0 : transpose_symmetry(c_ * gam_[0]);
}

Mono Bundle::lift(const Mono& m) const { return doubled_ ? kron(m, Mono::identity(2)) : m; }

QMat Bundle::lift(const QMat& m) const { return doubled_ ? kron(m, QMat::identity(2)) : m; }

Mono Bundle::tau(int j) const {
    if (!doubled_) {
        if (j != 0) throw std::invalid_argument("τ_j twist needs the doubled bundle");
        return Mono::identity(dim());
    }
    return kron(Mono::identity(rep().dim()), require_mono(pauli_set().tau[j], "τ"));
}

Mono Bundle::star() const { return lift(rep().star()); }

QMat Bundle::adjoint(const QMat& phi) const {
    if (phi.rows() != dim() || phi.cols() != dim()) throw std::invalid_argument("adjoint: dimension mismatch");
    return mul(cinv_, mul(phi.transpose(), c_));
}

Cq Bundle::pair(const QVec& a, const QVec& b) const {
    QVec cb = c_.apply(b);
    Cq s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !cb[i].is_zero()) s += a[i] * cb[i];
    return s;
}

// Terms --------------------------------------------------------------------

std::string to_string(Placement p) {
    switch (p) {
        case Placement::contract: return "contract";
        case Placement::wedge: return "wedge";
        case Placement::clifford_left: return "clifford-left";
        case Placement::clifford_right: return "clifford-right";
        case Placement::generic: return "generic";
    }
    return "?";
}

QMat eval_term(const Bundle& b, const ConnectionTerm& t, int mu) {
    const GammaRep& rep = b.rep();
    const int D = rep.D();
    const std::size_t N = rep.dim();
    QMat g = QMat::zero(N, N);
    switch (t.placement) {
        case Placement::contract:
            if (t.degree >= 1)
                for (const auto& K : subsets(D, t.degree - 1)) {
                    if (std::binary_search(K.begin(), K.end(), mu)) continue;
                    std::vector<int> full{mu};
                    full.insert(full.end(), K.begin(), K.end());
                    add_scaled(g, t.form.at(full), rep.product_up(K));
                }
            break;
        case Placement::wedge:
            for (const auto& K : subsets(D, t.degree)) {
                if (std::binary_search(K.begin(), K.end(), mu)) continue;
                std::vector<int> full{mu};
                full.insert(full.end(), K.begin(), K.end());
                add_scaled(g, t.form.at(K) * Cq(raise_sign(rep.signature(), K)), rep.product(full));
            }
            break;
        case Placement::clifford_left:
        case Placement::clifford_right: {
            for (const auto& K : subsets(D, t.degree)) add_scaled(g, t.form.at(K), rep.product_up(K));
            g = t.placement == Placement::clifford_left ? mul(g, rep.gamma(mu)) : mul(rep.gamma(mu), g);
            break;
        }
        case Placement::generic:
            for (const auto& [key, v] : t.tensor)
                if (key.first == mu) add_scaled(g, v, rep.product_up(key.second));
            break;
    }
    QMat a = b.lift(g);
    if (!(t.coeff == Cq(1))) a *= t.coeff;
    if (t.twist) a = mul(a, b.tau(*t.twist));
    switch (t.proj.kind) {
        case ProjKind::none: break;
        case ProjKind::gamma_star: a = mul(a, b.star()); break;
        case ProjKind::plus:
        case ProjKind::minus: {
            QMat s = mul(a, b.star());
            a = (t.proj.kind == ProjKind::plus ? a + s : a - s) * Cq(Rational(1, 2));
            break;
        }
        case ProjKind::pi:
            if (!b.doubled()) throw std::invalid_argument("Π_{ij,w} needs the doubled bundle");
            a = a * pi_projector(rep, t.proj.i, t.proj.j, t.proj.w).m;
            break;
    }
    return a;
}

SpinorConnection::SpinorConnection(Bundle b, std::vector<QMat> a) : bundle_(std::move(b)), base_(std::move(a)) {
    if (static_cast<int>(base_.size()) != bundle_.D()) throw std::invalid_argument("need one A_μ per direction");
    for (const auto& m : base_)
        if (m.rows() != bundle_.dim() || m.cols() != bundle_.dim())
            throw std::invalid_argument("A_μ has the wrong dimension");
}

void SpinorConnection::add(ConnectionTerm t) {
    if (t.placement != Placement::generic && (t.form.D != bundle_.D() || t.form.degree != t.degree))
        throw std::invalid_argument("form does not match the term degree or dimension");
    terms_.push_back(std::move(t));
    cache_.reset();
}

const std::vector<QMat>& SpinorConnection::a() const {
    if (!cache_) {
        std::vector<QMat> a = base_;
        if (a.empty()) a.assign(bundle_.D(), QMat::zero(bundle_.dim(), bundle_.dim()));
        for (const auto& t : terms_)
            for (int mu = 0; mu < bundle_.D(); ++mu) a[mu] += eval_term(bundle_, t, mu);
        cache_ = std::move(a);
    }
    return *cache_;
}

std::vector<QMat> SpinorConnection::a_c() const {
    std::vector<QMat> out;
    for (const auto& m : a()) out.push_back(bundle_.adjoint(m));
    return out;
}

SpinorConnection SpinorConnection::conjugate() const {
    std::vector<QMat> ac = a_c();
    for (auto& m : ac) m = -m;
    return SpinorConnection(bundle_, std::move(ac));
}

// Torsion and admissibility ------------------------------------------------

QMat ad_c(const Bundle& b, const QMat& omega, const QMat& phi) {
    if (omega.rows() != phi.rows() || omega.cols() != phi.cols()) throw std::invalid_argument("ad_c: dimension mismatch");
    return omega * phi + phi * b.adjoint(omega);
}

EndArray hat_d_gamma(const SpinorConnection& conn) {
    const Bundle& b = conn.bundle();
    const auto& a = conn.a();
    auto ac = conn.a_c();
    EndArray h(b.D());
    for (int k = 0; k < b.D(); ++k)
        for (int nu = 0; nu < b.D(); ++nu) h[k].push_back(mul(a[k], b.gamma(nu)) + mul(b.gamma(nu), ac[k]));
    return h;
}

EndArray torsion(const SpinorConnection& conn) {
    auto h = hat_d_gamma(conn);
    EndArray t(h.size());
    for (std::size_t mu = 0; mu < h.size(); ++mu)
        for (std::size_t nu = 0; nu < h.size(); ++nu) t[mu].push_back(h[mu][nu] - h[nu][mu]);
    return t;
}

EndArray symmetric_part(const SpinorConnection& conn) {
    auto h = hat_d_gamma(conn);
    EndArray s(h.size());
    for (std::size_t mu = 0; mu < h.size(); ++mu)
        for (std::size_t nu = 0; nu < h.size(); ++nu) s[mu].push_back(h[mu][nu] + h[nu][mu]);
    return s;
}

Admissibility is_admissible(const SpinorConnection& conn) {
    auto s = symmetric_part(conn);
    Admissibility r;
    for (std::size_t mu = 0; mu < s.size(); ++mu)
        for (std::size_t nu = mu; nu < s.size(); ++nu)
            if (!s[mu][nu].is_zero()) {
                r.admissible = false;
                r.mu = static_cast<int>(mu);
                r.nu = static_cast<int>(nu);
                r.witness = s[mu][nu];
                return r;
            }
    return r;
}

bool is_admissible_on(const SpinorConnection& conn, const std::vector<QVec>& K) {
    auto s = symmetric_part(conn);
    for (const auto& row : s)
        for (const auto& m : row)
            for (const auto& eta : K)
                if (!is_zero(m.apply(eta))) return false;
    return true;
}

bool strongly_torsion_free(const SpinorConnection& conn, const std::vector<QVec>& K) {
    auto t = torsion(conn);
    for (const auto& row : t)
        for (const auto& m : row)
            for (const auto& eta : K)
                if (!is_zero(m.apply(eta))) return false;
    return true;
}

bool torsion_antisymmetric(const EndArray& t) {
    for (std::size_t mu = 0; mu < t.size(); ++mu)
        for (std::size_t nu = 0; nu < t.size(); ++nu)
            if (!(t[mu][nu] == -t[nu][mu])) return false;
    return true;
}

bool torsion_has_delta1_symmetry(const Bundle& b, const EndArray& t) {
    // C(η,Tξ) = Δ1 C(ξ,Tη)  ⇔  (CT)ᵀ = Δ1 CT
    const QMat c = b.c_mono().dense();
    for (const auto& row : t)
        for (const auto& m : row) {
            QMat ct = c * m;
            if (!(ct.transpose() == ct * Cq(b.delta1()))) return false;
        }
    return true;
}

bool compatibility_check(const SpinorConnection& conn, const QMat& omega, const QMat& psi) {
    const Bundle& b = conn.bundle();
    for (const auto& a : conn.a()) {
        QMat lhs = ad_c(b, a, ad_c(b, omega, psi));
        QMat d_omega = commutator(a, omega);
        QMat rhs = ad_c(b, d_omega, psi) + ad_c(b, omega, ad_c(b, a, psi));
        if (!(lhs == rhs)) return false;
    }
    return true;
}

std::map<std::vector<int>, Cq> gamma_coefficients(const GammaRep& rep, const QMat& m, int k) {
    const Rational inv_n(1, static_cast<std::int64_t>(rep.dim()));
    std::map<std::vector<int>, Cq> out;
    for (const auto& I : subsets(rep.D(), k)) {
        Mono inv = inverse(rep.product(I));
        Cq tr;
        for (std::size_t i = 0; i < inv.dim(); ++i) {
            const Cq& x = m(inv.col[i], i);
            if (!x.is_zero()) tr += ipow(inv.ph[i]) * x;
        }
        if (!tr.is_zero()) out[I] = tr * Cq(inv_n);
    }
    return out;
}

QMat gamma_component(const GammaRep& rep, const QMat& m, int k) {
    QMat out = QMat::zero(rep.dim(), rep.dim());
    for (const auto& [I, c] : gamma_coefficients(rep, m, k)) add_scaled(out, c, rep.product(I));
    return out;
}

// Closed-form rules ----------------------------------------------------------

bool classify_form_term(int degree, int delta0, int delta1) {
    int r = mod4(degree);
    return r == 3 || r == mod4(1 + delta0 * delta1);
}

bool classify_form_term_delta(const ChargeConjugation& conj, int degree) {
    return conj.delta1() * delta_formula(conj.delta0(), conj.delta1(), degree) == -1;
}

bool gamma_star_term_rule(int ell, int n, int delta0, int delta1) {
    int r = mod4(ell), x = delta0 * delta1;
    if (n % 2 == 0) return r == 1 || r == mod4(1 + x);
    return r == 3 || r == mod4(1 - x);
}

bool projected_term_rule(int ell, int n, int delta0, int delta1) {
    int r = mod4(ell);
    return n % 2 ? r == 3 : r == mod4(1 + delta0 * delta1);
}

bool twisted_rule(const ChargeConjugation& conj, int ell, int i, int j) {
    const PauliSet& p = pauli_set();
    int d = delta_formula(conj.delta0(), conj.delta1(), ell);
    return d * conj.delta1() * p.eps_k[j] * p.eps_ik[i][j] == -1;
}

KForm random_form(std::mt19937_64& rng, int D, int degree, int range) {
    std::uniform_int_distribution<int> mag(1, range), sgn(0, 1);
    KForm f{degree, D, {}};
    for (const auto& I : subsets(D, degree)) f.comp[I] = Cq(sgn(rng) ? mag(rng) : -mag(rng));
    return f;
}

KForm ones_form(int D, int degree) {
    KForm f{degree, D, {}};
    for (const auto& I : subsets(D, degree)) f.comp[I] = Cq(1);
    return f;
}

bool brute_force_admissible(const Bundle& b, ConnectionTerm t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int w = 0; w < 2; ++w) {
        if (t.placement != Placement::generic)
            t.form = w == 0 ? random_form(rng, b.D(), t.degree) : ones_form(b.D(), t.degree);
        SpinorConnection conn(b);
        conn.add(t);
        if (!is_admissible(conn).admissible) return false;
        if (t.placement == Placement::generic) break;
    }
    return true;
}

// Table 1 ------------------------------------------------------------------

std::vector<TwistRow> twisted_table(const ChargeConjugation& conj, int i) {
    std::vector<TwistRow> rows;
    for (int r = 0; r < 4; ++r) {
        TwistRow row{i, r, {}};
        for (int j = 0; j < 4; ++j)
            if (twisted_rule(conj, r, i, j)) row.j.push_back(j);
        rows.push_back(row);
    }
    return rows;
}

std::vector<TwistRow> twisted_table(const ChargeConjugation& conj) {
    std::vector<TwistRow> rows;
    for (int i = 0; i < 4; ++i) {
        auto r = twisted_table(conj, i);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
}

// Π_{ij,w} -----------------------------------------------------------------

PiProjector pi_projector(const GammaRep& rep, int i, int j, int w) {
    if (!rep.has_star()) throw std::invalid_argument("Π_{ij,w} needs even dimension");
    if (i < 0 || i > 3 || j < 0 || j > 3 || (w != 1 && w != -1)) throw std::invalid_argument("bad Π labels");
    const auto& tau = pauli_set().tau;
    QMat m = kron(QMat::identity(rep.dim()), tau[i]) + kron(rep.star().dense(), tau[j]) * Cq(w);
    return PiProjector{i, j, w, m * Cq(Rational(1, 2))};
}

bool pi_has_zero_eigenvalue(int i, int j) {
    auto bad = [&](int a, int b) { return (i == a && j == b) || (i == b && j == a); };
    return !bad(0, 2) && !bad(1, 3);
}

std::vector<QVec> kernel(const QMat& m) { return nullspace(m); }

std::vector<QVec> image(const QMat& m) {
    // independent columns
    std::vector<QVec> cols;
    QMat acc(m.rows(), 0);
    std::size_t r = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        QVec c(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) c[i] = m(i, j);
        if (is_zero(c)) continue;
        std::vector<QVec> trial = cols;
        trial.push_back(c);
        QMat t(m.rows(), trial.size());
        for (std::size_t q = 0; q < trial.size(); ++q)
            for (std::size_t i = 0; i < m.rows(); ++i) t(i, q) = trial[q][i];
        std::size_t rk = rank(t);
        if (rk > r) {
            cols.push_back(c);
            r = rk;
        }
    }
    return cols;
}

bool same_span(const std::vector<QVec>& a, const std::vector<QVec>& b) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    const std::size_t n = a.front().size();
    auto stack = [n](const std::vector<QVec>& v) {
        QMat m(n, v.size());
        for (std::size_t q = 0; q < v.size(); ++q)
            for (std::size_t i = 0; i < n; ++i) m(i, q) = v[q][i];
        return m;
    };
    std::vector<QVec> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    std::size_t ra = rank(stack(a)), rb = rank(stack(b)), rab = rank(stack(ab));
    return ra == rb && ra == rab;
}

PiLemmaReport pi_lemma_check(const GammaRep& rep) {
    const PauliSet& p = pauli_set();
    const std::size_t N = rep.dim();
    const QMat id = QMat::identity(2 * N);
    const QMat st = rep.star().dense();
    PiLemmaReport r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int w : {1, -1}) {
                QMat pw = pi_projector(rep, i, j, w).m, pm = pi_projector(rep, i, j, -w).m;
                QMat tt = kron(st, p.tau[i] * p.tau[j]) * Cq(w);
                QMat sq = id * Cq(Rational(p.eps_k[i] + p.eps_k[j], 4)) + tt * Cq(Rational(1 + p.eps_ik[i][j], 4));
                QMat pr = id * Cq(Rational(p.eps_k[i] - p.eps_k[j], 4)) + tt * Cq(Rational(p.eps_ik[i][j] - 1, 4));
                r.squared_formula_ok = r.squared_formula_ok && pw * pw == sq && pw * pm == pr;

                if (i == 0 && j == 2) r.squares_ok = r.squares_ok && pw * pw == kron(st, p.tau[2]) * Cq(Rational(w, 2));
                if (i == 1 && j == 3) r.squares_ok = r.squares_ok && pw * pw == id * Cq(Rational(1, 2));

                auto ker = kernel(pw);
                bool zero_ev = pi_has_zero_eigenvalue(i, j);
                r.kernel_dims_ok = r.kernel_dims_ok && ker.size() == (zero_ev ? N : 0);
                if (!zero_ev) continue;
                QMat prod = pw * pm;
                if (i == 1 && j == 2) r.product12_ok = r.product12_ok && prod == pi_projector(rep, 0, 3, w).m;
                if (i == 2 && j == 3) {
                    r.product23_ok = r.product23_ok && prod == pi_projector(rep, 0, 1, w).m;
                    r.product23_measured = r.product23_measured && prod == -pi_projector(rep, 0, 1, -w).m;
                }
                if (i == j || i * j == 0) r.zero_products_ok = r.zero_products_ok && prod.is_zero();
                bool ki = same_span(ker, image(pm));
                r.kernel_image_ok = r.kernel_image_ok && ki;
                bool nil = (pw * pw).is_zero();
                if (nil) r.nilpotent_self_image = r.nilpotent_self_image && same_span(ker, image(pw));
                else r.kernel_image_regular = r.kernel_image_regular && ki;
                bool want_nil = (i == 1 && j == 2) || (i == 2 && j == 1) || (i == 2 && j == 3) || (i == 3 && j == 2);
                r.nilpotent_self_image = r.nilpotent_self_image && nil == want_nil;
            }
    return r;
}

// Opposite projection ----------------------------------------------------------

OppositeProjection opposite_projection_check(const SpinorConnection& conn) {
    const Bundle& b = conn.bundle();
    const GammaRep& rep = b.rep();
    if (conn.terms().empty()) throw std::invalid_argument("connection has no projected terms");
    int sign = 0;
    for (const auto& t : conn.terms()) {
        if (t.placement != Placement::clifford_left || (t.proj.kind != ProjKind::plus && t.proj.kind != ProjKind::minus) ||
            t.twist)
            throw std::invalid_argument("opposite_projection_check: terms must be F γ^{(ℓ)} γ_μ Π^±");
        int s = t.proj.kind == ProjKind::plus ? 1 : -1;
        if (sign != 0 && s != sign) throw std::invalid_argument("opposite_projection_check: mixed projectors");
        sign = s;
    }
    const std::size_t N = b.dim();
    const QMat id = QMat::identity(N);
    const QMat st = b.star().dense();
    const QMat same = (id + st * Cq(sign)) * Cq(Rational(1, 2));
    const QMat opp = (id - st * Cq(sign)) * Cq(Rational(1, 2));

    OppositeProjection r;
    r.adjoint_opposite = r.adjoint_formula = r.torsion_opposite = r.hat_d_formula = true;
    auto ac = conn.a_c();
    auto h = hat_d_gamma(conn);
    auto t = torsion(conn);
    for (int mu = 0; mu < b.D(); ++mu) {
        // F γ^{(ℓ)} summed over the terms, as an End(S) matrix
        QMat fg = QMat::zero(N, N);
        for (const auto& term : conn.terms()) {
            QMat g = QMat::zero(rep.dim(), rep.dim());
            for (const auto& K : subsets(rep.D(), term.degree)) add_scaled(g, term.form.at(K), rep.product_up(K));
            fg += b.lift(g) * term.coeff;
        }
        r.adjoint_opposite = r.adjoint_opposite && (ac[mu] * same).is_zero();
        r.adjoint_formula = r.adjoint_formula && ac[mu] == -(mul(b.gamma(mu), fg) * opp);
        for (int nu = 0; nu < b.D(); ++nu) {
            r.torsion_opposite = r.torsion_opposite && (t[mu][nu] * same).is_zero();
            if (mu == nu) continue;
            Mono gmn = b.gamma(mu) * b.gamma(nu);  // γ_{μν} for μ ≠ ν
            QMat want = (mul(fg, gmn) + mul(gmn, fg)) * opp;
            r.hat_d_formula = r.hat_d_formula && h[mu][nu] == want;
        }
    }
    return r;
}

// Supergravity -------------------------------------------------------------------

SpinorConnection sugra_connection(const ChargeConjugation& conj, const KForm& F) {
    if (F.degree != 4) throw std::invalid_argument("sugra connection needs a 4-form");
    SpinorConnection conn{Bundle(conj)};
    // -1/36 over all orderings of three indices = -1/6 over sorted sets
    conn.add(ConnectionTerm{4, Placement::contract, F, {}, std::nullopt, {}, Cq(Rational(-1, 6))});
    // 1/288 over all orderings of four indices = 1/12 over sorted sets
    conn.add(ConnectionTerm{4, Placement::wedge, F, {}, std::nullopt, {}, Cq(Rational(1, 12))});
    return conn;
}

SugraCoefficients sugra_ad_coefficients(const SpinorConnection& conn, const KForm& F) {
    const Bundle& b = conn.bundle();
    const GammaRep& rep = b.rep();
    const int D = rep.D();
    const std::size_t N = rep.dim();
    SugraCoefficients out;
    std::optional<Cq> c6, c2;
    bool exact = true;
    auto fit = [](const QMat& m, const QMat& basis, std::optional<Cq>& c) {
        if (basis.is_zero()) return m.is_zero();
        for (std::size_t i = 0; i < basis.rows(); ++i)
            for (std::size_t j = 0; j < basis.cols(); ++j)
                if (!basis(i, j).is_zero()) {
                    Cq ratio = m(i, j) / basis(i, j);
                    if (c && !(*c == ratio)) return false;
                    c = ratio;
                    return m == basis * ratio;
                }
        return false;
    };
    const auto& a = conn.a();
    for (int mu = 0; mu < D; ++mu)
        for (int nu = mu + 1; nu < D; ++nu) {
            QMat m = ad_c(b, a[mu], b.gamma(nu).dense());
            // F^{κρστ} γ_{μνκρστ} and F_{μνκρ} γ^{κρ}, both over all orderings
            QMat b6 = QMat::zero(N, N), b2 = QMat::zero(N, N);
            for (const auto& K : subsets(D, 4)) {
                if (std::binary_search(K.begin(), K.end(), mu) || std::binary_search(K.begin(), K.end(), nu)) continue;
                std::vector<int> full{mu, nu};
                full.insert(full.end(), K.begin(), K.end());
                add_scaled(b6, F.at(K) * Cq(24 * raise_sign(rep.signature(), K)), rep.product(full));
            }
            for (const auto& K : subsets(D, 2)) {
                std::vector<int> full{mu, nu, K[0], K[1]};
                add_scaled(b2, F.at(full) * Cq(2), rep.product_up(K));
            }
            QMat m6 = gamma_component(rep, m, 6), m2 = gamma_component(rep, m, 2);
            exact = exact && m == m6 + m2 && fit(m6, b6, c6) && fit(m2, b2, c2);
        }
    out.exact = exact && c6 && c2 && c6->im.is_zero() && c2->im.is_zero();
    if (c6) out.six = c6->re;
    if (c2) out.two = c2->re;
    return out;
}

// Twisted examples ------------------------------------------------------------

std::vector<TwistedField> iib_fields() {
    std::vector<TwistedField> f;
    for (int l : {1, 3, 5, 7, 9}) f.push_back({"F" + std::to_string(l), l, Placement::clifford_left, l % 4 == 1 ? 2 : 1});
    f.push_back({"H3", 3, Placement::contract, 3});
    return f;
}

std::vector<TwistedField> iia_fields() {
    return {{"F3", 3, Placement::clifford_left, 3}, {"F4", 4, Placement::clifford_left, 1}};
}

std::vector<TruncationRow> field_truncations(const ChargeConjugation& conj, const std::vector<TwistedField>& fields,
                                             bool brute_force) {
    std::vector<TruncationRow> rows;
    for (int i = 0; i < 4; ++i) {
        TruncationRow row{i, {}, {}};
        std::optional<Bundle> b;
        if (brute_force) b.emplace(conj, i);
        for (const auto& f : fields) {
            bool ok;
            if (brute_force) {
                ConnectionTerm t;
                t.degree = f.degree;
                t.placement = f.placement;
                t.form = KForm{f.degree, conj.rep().D(), {}};
                t.twist = f.twist;
                ok = brute_force_admissible(*b, t, 11);
            } else {
                ok = twisted_rule(conj, f.degree, i, f.twist);
            }
            (ok ? row.kept : row.killed).push_back(f.name);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spt
