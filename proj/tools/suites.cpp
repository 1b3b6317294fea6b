#include "suites.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <random>

#include "spintorsion/superjacobi.hpp"

namespace spt::tool {

namespace {

using RepPtr = std::shared_ptr<const GammaRep>;

RepPtr rep_of(int t, int s) { return std::make_shared<const GammaRep>(Signature::make(t, s)); }

std::vector<ChargeConjugation> conjugations(const RunConfig& cfg, const RepPtr& rep) {
    if (cfg.delta0) {
        try {
            return {build_conjugation(rep, *cfg.delta0)};
        } catch (const UnavailableError& e) {
            throw ConfigError(e.what());
        }
    }
    std::vector<ChargeConjugation> out;
    for (int d0 : realizable_delta0(*rep)) out.push_back(build_conjugation(rep, d0));
    return out;
}

std::string tag(const ChargeConjugation& c) { return c.delta0() > 0 ? "[d0=+]" : "[d0=-]"; }

std::string sig_str(const Signature& s) { return "(" + std::to_string(s.t) + "," + std::to_string(s.s) + ")"; }

QVec random_spinor(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> v(-3, 3);
    QVec out(n);
    for (auto& x : out) {
        int re = v(rng), im = v(rng);
        x = Cq(re) + Cq::i() * Cq(im);
    }
    return out;
}

QMat random_mat(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> keep(0, 3), v(-2, 2);
    QMat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (keep(rng) == 0) m(i, j) = Cq(v(rng)) + Cq::i() * Cq(v(rng));
    return m;
}

std::vector<int> random_subset(std::mt19937_64& rng, int D) {
    std::vector<int> all(D);
    for (int a = 0; a < D; ++a) all[a] = a;
    std::shuffle(all.begin(), all.end(), rng);
    int k = std::uniform_int_distribution<int>(0, D)(rng);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<int> first_labels(int k) {
    std::vector<int> v(k);
    for (int a = 0; a < k; ++a) v[a] = a;
    return v;
}

QVec unit(std::size_t n, std::size_t i) {
    QVec e(n);
    e[i] = Cq(1);
    return e;
}

// Small bookkeeping helper: count failures and keep the first few witnesses.
struct Tally {
    std::size_t bad = 0;
    std::vector<std::string> why;
    void fail(std::string w) {
        ++bad;
        if (why.size() < 3) why.push_back(std::move(w));
    }
    void expect(bool ok, const std::function<std::string()>& w) {
        if (!ok) fail(w());
    }
    std::string witness() const { return join(why); }
};

// Spans of S^a ⊕ S^b and of {(η, sγ*η)} in the interleaved S ⊗ ℂ² ordering.
std::vector<QVec> chiral_basis(const GammaRep& rep, int w) {
    const std::size_t n = rep.dim();
    return nullspace(rep.star().dense() - QMat::identity(n) * Cq(w));
}

QVec pair_vec(const QVec& eta, const QVec& xi) {
    QVec v(2 * eta.size());
    for (std::size_t a = 0; a < eta.size(); ++a) {
        v[2 * a] = eta[a];
        v[2 * a + 1] = xi[a];
    }
    return v;
}

std::vector<QVec> chiral_sum(const GammaRep& rep, int a, int b) {
    std::vector<QVec> out;
    QVec zero(rep.dim());
    for (const auto& e : chiral_basis(rep, a)) out.push_back(pair_vec(e, zero));
    for (const auto& e : chiral_basis(rep, b)) out.push_back(pair_vec(zero, e));
    return out;
}

std::vector<QVec> graph_of_star(const GammaRep& rep, int s) {
    std::vector<QVec> out;
    for (std::size_t i = 0; i < rep.dim(); ++i) {
        QVec e = unit(rep.dim(), i);
        QVec se = rep.star().apply(e);
        for (auto& x : se) x *= Cq(s);
        out.push_back(pair_vec(e, se));
    }
    return out;
}

ConnectionTerm form_term(int degree, Placement p, int D) {
    ConnectionTerm t;
    t.degree = degree;
    t.placement = p;
    t.form = KForm{degree, D, {}};
    return t;
}

constexpr Placement kPlacements[] = {Placement::contract, Placement::wedge, Placement::clifford_left,
                                     Placement::clifford_right};

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"admissibility", "bianchi", "brane", "clifford",
                                                   "conjugation",   "fierz",   "jacobi"};
    return names;
}

// Clifford -----------------------------------------------------------------

Report suite_clifford(const RunConfig& cfg) {
    Report r;
    const Signature sig = Signature::make(cfg.t, cfg.s);
    GammaRep rep(sig);
    const int D = sig.D();
    const std::size_t n = rep.dim();

    Tally rel;
    for (int a = 0; a < D; ++a)
        for (int b = a; b < D; ++b) {
            QMat want = QMat::identity(n) * Cq(a == b ? -2 * sig.g(a) : 0);
            rel.expect(anticommutator(rep.dense(a), rep.dense(b)) == want,
                       [&] { return "a=" + std::to_string(a) + " b=" + std::to_string(b); });
        }
    r.exact("clifford.anticommutator", "clifford: γ_aγ_b + γ_bγ_a = -2g_ab", rel.bad, rel.witness());

    // the product of distinct labels is already antisymmetric
    Tally dist;
    for (int k = 0; k <= D; ++k)
        for (const auto& I : subsets(D, k))
            dist.expect(antisym_gamma(rep, I) == rep.product(I).dense(), [&] { return "I=" + ints(I); });
    r.exact("clifford.antisym_distinct", "clifford: γ_{[I]} equals the ordered product for distinct labels", dist.bad,
            dist.witness());

    Tally exp;
    auto check_pair = [&](const std::vector<int>& I, const std::vector<int>& J) {
        QMat direct = antisym_gamma(rep, I) * antisym_gamma_up(rep, J);
        exp.expect(product_expand(rep, I, J) == direct, [&] { return "I=" + ints(I) + " J=" + ints(J); });
    };
    std::string mode;
    if (D <= 6) {
        for (int k = 0; k <= D; ++k)
            for (const auto& I : subsets(D, k))
                for (int l = 0; l <= D; ++l)
                    for (const auto& J : subsets(D, l)) check_pair(I, J);
        mode = "exhaustive";
    } else {
        std::mt19937_64 rng(cfg.seed);
        for (int trial = 0; trial < 200; ++trial) {
            auto I = random_subset(rng, D), J = random_subset(rng, D);
            check_pair(I, J);
        }
        mode = "200 random pairs";
    }
    r.exact("clifford.expansion", "clifford: contraction expansion of γ_Iγ^J vs direct product (" + mode + ")",
            exp.bad, exp.witness());

    Tally dual;
    for (int k = 0; k <= D; ++k)
        for (const auto& I : subsets(D, k))
            dual.expect(duality_map(rep, I) == antisym_gamma(rep, I), [&] { return "I=" + ints(I); });
    r.exact("clifford.duality", "clifford: Hodge duality of antisymmetrized products", dual.bad, dual.witness());

    if (rep.has_star()) {
        Tally st;
        QMat s = rep.star().dense();
        st.expect(s * s == QMat::identity(n), [] { return std::string("γ*² != 1"); });
        for (int a = 0; a < D; ++a)
            st.expect(anticommutator(s, rep.dense(a)).is_zero(), [&] { return "a=" + std::to_string(a); });
        r.exact("clifford.gamma_star", "clifford: γ*² = 1 and γ* anticommutes with γ_a", st.bad, st.witness());
    }
    return r;
}

// Conjugation ----------------------------------------------------------------

std::vector<std::string> symmetry_table_diff(const ChargeConjugation& conj) {
    const int D = conj.rep().D();
    if (conj.rep().signature().t != 0 || D % 2) throw std::invalid_argument("symmetry table: Riemannian even D only");
    // Δ_{2m} = a σ^p (-)^m, Δ_{2m+1} = b σ^q (-)^m, σ the choice of C; columns 2n mod 8 = 0, 2, 4, 6
    struct Row {
        int a, p, b, q;
        bool chiral;
    };
    static const Row rows[4] = {{1, 0, 1, 1, false}, {1, 1, 1, 0, true}, {-1, 0, -1, 1, false}, {-1, 1, -1, 0, true}};
    const Row& row = rows[(D % 8) / 2];
    std::vector<std::string> diff;
    bool some = false;
    for (int sigma : {1, -1}) {
        bool ok = true;
        for (int k = 0; k <= D; ++k) {
            const int m = k / 2, alt = m % 2 ? -1 : 1;
            const int want = k % 2 ? row.b * (row.q ? sigma : 1) * alt : row.a * (row.p ? sigma : 1) * alt;
            ok = ok && conj.delta(k) == want;
        }
        some = some || ok;
    }
    if (!some) diff.push_back("D=" + std::to_string(D) + " Δ row does not match either sign choice");
    auto table = symmetry_chirality_table(conj);
    if (table.chiral != row.chiral)
        diff.push_back("D=" + std::to_string(D) + " chirality measured " + (table.chiral ? "chiral" : "non chiral"));
    return diff;
}

Report suite_conjugation(const RunConfig& cfg) {
    Report r;
    auto rep = rep_of(cfg.t, cfg.s);
    const int D = rep->D();
    std::mt19937_64 rng(cfg.seed);
    auto conjs = conjugations(cfg, rep);
    for (const auto& conj : conjs) {
        const std::string tg = tag(conj);
        Tally sym;
        sym.expect(conj.c().transpose() == conj.c() * Cq(conj.delta0()), [] { return std::string("Cᵀ != Δ0 C"); });
        for (int mu = 0; mu < D; ++mu) {
            QMat cg = conj.c() * rep->dense(mu);
            sym.expect(cg.transpose() == cg * Cq(conj.delta1()), [&] { return "μ=" + std::to_string(mu); });
        }
        r.exact("conjugation.symmetry" + tg, "conjugation: C and Cγ_μ have symmetries Δ0 and Δ1", sym.bad,
                sym.witness());

        Tally rec, formula;
        for (int k = 0; k <= D; ++k) {
            if (k >= 2)
                rec.expect(conj.delta(k) == -conj.delta(k - 2), [&] { return "k=" + std::to_string(k); });
            formula.expect(conj.delta(k) == delta_formula(conj.delta0(), conj.delta1(), k),
                           [&] { return "k=" + std::to_string(k) + " measured " + std::to_string(conj.delta(k)); });
        }
        r.exact("conjugation.delta_recursion" + tg, "conjugation: Δ_k = -Δ_{k-2}", rec.bad, rec.witness());
        r.exact("conjugation.delta_formula" + tg, "conjugation: closed formula for Δ_k", formula.bad,
                formula.witness());

        Tally eig;
        auto split = adjoint_split(conj);
        for (int k = 0; k <= D; ++k) {
            QMat g = antisym_gamma(*rep, first_labels(k));
            const int lam = conj.delta0() * conj.delta(k);
            eig.expect(adjoint(conj, g) == g * Cq(lam), [&] { return "k=" + std::to_string(k); });
            const auto& side = lam > 0 ? split.plus : split.minus;
            eig.expect(std::find(side.begin(), side.end(), k) != side.end(),
                       [&] { return "split misplaces k=" + std::to_string(k); });
        }
        r.exact("conjugation.adjoint_eigenvalue" + tg, "conjugation: (γ^{(k)})^C = Δ0Δ_k γ^{(k)}", eig.bad,
                eig.witness());

        Tally pres;
        Bundle b(conj);
        for (int trial = 0; trial < 2; ++trial) {
            QMat omega = random_mat(rng, rep->dim());
            for (int k = 0; k <= D; ++k) {
                QMat x = ad_c(b, omega, antisym_gamma(*rep, first_labels(k)));
                const int lam = conj.delta0() * conj.delta(k);
                pres.expect(b.adjoint(x) == x * Cq(lam), [&] { return "k=" + std::to_string(k); });
            }
        }
        r.exact("conjugation.eigenspaces_preserved" + tg, "conjugation: ad^C_Ω preserves the adjoint eigenspaces",
                pres.bad, pres.witness());

        std::vector<int> want;
        const int rmod = (((-conj.delta0() * conj.delta1()) % 4) + 4) % 4;
        for (int k = 0; k <= D; ++k)
            if (k % 4 == 2 || k % 4 == rmod) want.push_back(k);
        auto span = parallel_span_check(conj);
        r.exact("conjugation.parallel_span" + tg, "conjugation: degrees with Δ_kΔ_0 = -1", span == want ? 0 : 1,
                "measured " + ints(span) + " expected " + ints(want));

        if (cfg.t == 1 && D == 11) {
            const std::vector<int> minus{1, 2, 5, 6, 9, 10}, plus{0, 3, 4, 7, 8, 11};
            std::size_t bad = (split.minus == minus ? 0 : 1) + (split.plus == plus ? 0 : 1);
            r.exact("conjugation.eleven_split" + tg, "conjugation: D = 11 adjoint eigenspaces by degree mod 4", bad,
                    "minus " + ints(split.minus) + " plus " + ints(split.plus));
            const bool three_out = std::find(span.begin(), span.end(), 3) == span.end();
            r.exact("conjugation.eleven_not_parallel" + tg,
                    "conjugation: a 3-form + 5-form connection leaves C non-parallel", three_out ? 0 : 1,
                    "span " + ints(span));
        }
        if (cfg.t == 0 && D % 2 == 0) {
            auto diff = symmetry_table_diff(conj);
            r.exact("conjugation.symmetry_table" + tg, "conjugation: Δ_k and chirality row for D mod 8", diff.size(),
                    join(diff));
        }
    }
    if (!cfg.delta0 && D % 2 == 1) {
        const int missing = -realizable_delta0(*rep).front();
        bool threw = false;
        try {
            build_conjugation(rep, missing);
        } catch (const UnavailableError&) {
            threw = true;
        }
        r.exact("conjugation.odd_unavailable", "conjugation: odd D realizes a single Δ0", threw ? 0 : 1,
                "Δ0=" + std::to_string(missing) + " was built");
    }
    return r;
}

// Fierz --------------------------------------------------------------------

Report suite_fierz(const RunConfig& cfg) {
    Report r;
    auto rep = rep_of(cfg.t, cfg.s);
    const int D = rep->D();
    const std::size_t n = rep->dim();
    std::mt19937_64 rng(cfg.seed);
    for (const auto& conj : conjugations(cfg, rep)) {
        const std::string tg = tag(conj);
        Tally rec;
        for (int trial = 0; trial < 50; ++trial) {
            QVec phi = random_spinor(rng, n), psi = random_spinor(rng, n);
            rec.expect(fierz_expand(conj, phi, psi) == rank_one(conj, phi, psi),
                       [&] { return "pair " + std::to_string(trial); });
        }
        r.exact("fierz.reconstruction" + tg, "fierz: Σ C(φ,γ^Iψ)γ_I equals ξ ↦ C(ψ,ξ)φ (50 pairs)", rec.bad,
                rec.witness());

        Tally sym;
        for (int trial = 0; trial < 3; ++trial) {
            QVec phi = random_spinor(rng, n), psi = random_spinor(rng, n);
            for (int k = 0; k <= D; ++k)
                sym.expect(project_ck(conj, psi, phi, k) == project_ck(conj, phi, psi, k).scaled(Cq(conj.delta(k))),
                           [&] { return "k=" + std::to_string(k); });
        }
        r.exact("fierz.projection_symmetry" + tg, "fierz: C_k(ψ,φ) = Δ_k C_k(φ,ψ)", sym.bad, sym.witness());

        if (cfg.t == 0 && D % 2 == 0) {
            Tally pure;
            for (int w : {1, -1}) {
                PureSpinor p = make_pure_spinor(*rep, w);
                pure.expect(annihilator_dim(*rep, p.spinor) == std::size_t(D / 2),
                            [&] { return "annihilator w=" + std::to_string(w); });
                for (int k = 0; k <= D; ++k)
                    pure.expect(project_ck(conj, p.spinor, p.spinor, k).is_zero() == (k != D / 2),
                                [&] { return "C_" + std::to_string(k) + " w=" + std::to_string(w); });
                if (D == 4) {
                    auto wr = wedge_selfdual_check(conj, p);
                    pure.expect(wr.duality_ok && wr.direct_matches_first && wr.direct_matches_second,
                                [&] { return "wedge duality w=" + std::to_string(w); });
                }
            }
            r.exact("fierz.pure_spinor" + tg, "fierz: pure spinors have maximal annihilator and only C_n", pure.bad,
                    pure.witness());
        }
    }
    return r;
}

// Admissibility --------------------------------------------------------------

std::vector<std::string> twisted_table_diff(const ChargeConjugation& conj) {
    static const std::vector<int> row1[4] = {{2}, {3}, {1, 2, 3}, {1}};
    static const std::vector<int> row3[4] = {{0, 1, 3}, {0, 1, 2}, {0}, {0, 2, 3}};
    const int x = conj.delta0() * conj.delta1();
    auto rows = twisted_table(conj);
    std::vector<std::string> diff;
    if (rows.size() != 16) diff.push_back("row count " + std::to_string(rows.size()));
    for (const auto& row : rows) {
        const std::vector<int>* want = nullptr;
        if (row.ell_mod4 == 1 || row.ell_mod4 == ((1 - x) % 4 + 4) % 4) want = &row1[row.i];
        if (row.ell_mod4 == 3 || row.ell_mod4 == (1 + x) % 4) want = &row3[row.i];
        if (!want || row.j != *want)
            diff.push_back("i=" + std::to_string(row.i) + " l=" + std::to_string(row.ell_mod4) + " measured " +
                           ints(row.j));
    }
    return diff;
}

Report suite_admissibility(const RunConfig& cfg) {
    Report r;
    auto rep = rep_of(cfg.t, cfg.s);
    const int D = rep->D();
    for (const auto& conj : conjugations(cfg, rep)) {
        const std::string tg = tag(conj);
        Bundle b(conj);
        Tally cls;
        for (int deg = 0; deg <= D; ++deg) {
            cls.expect(classify_form_term(deg, conj.delta0(), conj.delta1()) == classify_form_term_delta(conj, deg),
                       [&] { return "rule forms disagree at l=" + std::to_string(deg); });
            for (Placement p : kPlacements) {
                const bool vanishes = (p == Placement::contract && deg == 0) || (p == Placement::wedge && deg == D);
                const bool want = vanishes || classify_form_term(deg, conj.delta0(), conj.delta1());
                cls.expect(brute_force_admissible(b, form_term(deg, p, D), cfg.seed) == want,
                           [&] { return "l=" + std::to_string(deg) + " " + to_string(p); });
            }
        }
        r.exact("admissibility.form_terms" + tg, "connection: closed-form rule vs brute force, all degrees and placements",
                cls.bad, cls.witness());

        if (D % 2 == 0) {
            Tally gs;
            const int half = D / 2;
            for (int ell = 0; ell <= D; ++ell) {
                ConnectionTerm tm = form_term(ell, Placement::clifford_left, D);
                tm.proj.kind = ProjKind::gamma_star;
                gs.expect(brute_force_admissible(b, tm, cfg.seed) ==
                              gamma_star_term_rule(ell, half, conj.delta0(), conj.delta1()),
                          [&] { return "γ* l=" + std::to_string(ell); });
                for (ProjKind k : {ProjKind::plus, ProjKind::minus}) {
                    tm.proj.kind = k;
                    gs.expect(brute_force_admissible(b, tm, cfg.seed) ==
                                  projected_term_rule(ell, half, conj.delta0(), conj.delta1()),
                              [&] { return "Π l=" + std::to_string(ell); });
                }
            }
            r.exact("admissibility.gamma_star" + tg, "connection: γ* and chiral-projector rules vs brute force", gs.bad,
                    gs.witness());
        }

        if (cfg.twist) {
            const int i = *cfg.twist;
            Bundle db(conj, i);
            Tally tw;
            for (int j = 0; j < 4; ++j)
                for (int ell = 0; ell <= D; ++ell) {
                    ConnectionTerm tm = form_term(ell, Placement::clifford_left, D);
                    tm.twist = j;
                    tw.expect(brute_force_admissible(db, tm, cfg.seed) == twisted_rule(conj, ell, i, j),
                              [&] { return "j=" + std::to_string(j) + " l=" + std::to_string(ell); });
                }
            r.exact("admissibility.twisted[i=" + std::to_string(i) + "]" + tg,
                    "connection: twisted rule vs doubled-bundle brute force", tw.bad, tw.witness());
            auto diff = twisted_table_diff(conj);
            r.exact("admissibility.twisted_table" + tg, "connection: twisted table rows", diff.size(), join(diff));
        }

        if (cfg.t == 1 && D == 11) {
            std::mt19937_64 rng(cfg.seed);
            std::size_t bad_adm = 0, bad_coeff = 0;
            std::string measured;
            for (int trial = 0; trial < 2; ++trial) {
                KForm f = random_form(rng, 11, 4);
                auto conn = sugra_connection(conj, f);
                if (!is_admissible(conn).admissible) ++bad_adm;
                auto c = sugra_ad_coefficients(conn, f);
                measured = c.six.str() + ", " + c.two.str();
                if (!c.exact || c.six != Rational(1, 144) || c.two != Rational(1, 6)) ++bad_coeff;
            }
            r.exact("admissibility.sugra_admissible" + tg, "connection: eleven-dimensional supergravity connection",
                    bad_adm, "symmetric part nonzero");
            r.exact("admissibility.sugra_coefficients" + tg,
                    "connection: ad^C(A_μ)γ_ν coefficients (1/144, 1/6 measured)", bad_coeff, "measured " + measured);
        }
    }
    return r;
}

// Bianchi ----------------------------------------------------------------------

Report suite_bianchi(const RunConfig& cfg) {
    Report r;
    auto rep = rep_of(cfg.t, cfg.s);
    const int D = rep->D();
    std::mt19937_64 rng(cfg.seed);
    for (const auto& conj : conjugations(cfg, rep)) {
        const std::string tg = tag(conj);
        auto z = flat_bianchi(SpinorConnection(Bundle(conj)));
        r.exact("bianchi.zero" + tg, "geometry: flat Bianchi identities for A = 0",
                !z.dt + !z.dr + !z.dadr + !z.dt_sides_zero);

        if (D >= 3) {
            Tally tf, sk;
            for (int trial = 0; trial < 2; ++trial) {
                auto conn = three_form_connection(conj, random_form(rng, D, 3));
                auto bb = flat_bianchi(conn);
                tf.expect(bb.dt && bb.dr && bb.dadr_half, [&] { return "trial " + std::to_string(trial); });
                auto s = r0_from_skew_torsion(conn);
                sk.expect(s.totally_skew && s.sigma_is_form && s.torsion_matches_vector && s.flat_identity,
                          [&] { return "trial " + std::to_string(trial); });
            }
            r.exact("bianchi.three_form" + tg, "geometry: cyclic D̂T, DR and ½ad^C(R)T identities for 3-form torsion",
                    tf.bad, tf.witness());
            r.exact("bianchi.skew_torsion" + tg, "geometry: σ^T is a 4-form and the constant-T curvature expansion",
                    sk.bad, sk.witness());
        }

        if (conj.delta0() * conj.delta1() == -1) {
            Tally k;
            for (Cq a : {Cq(1), Cq(-2), Cq(Rational(3, 2))}) {
                auto e = killing_example(conj, a);
                k.expect(e.torsion_4a && e.curvature_2a2 && e.hat_dt_measured && e.adr_gamma && e.both_sides_vanish &&
                             e.admissible,
                         [&] { return "a=" + a.str(); });
            }
            r.exact("bianchi.killing" + tg,
                    "geometry: A = aγ_μ gives T = 4aγ_{μν}, R = 2a²γ_{μν}, D̂T = -16a²g_{κ[μ}γ_{ν]}", k.bad,
                    k.witness());
        }
    }
    return r;
}

// Brane --------------------------------------------------------------------------

BraneSpec custom_brane(int p, int d, int delta) {
    using cd = std::complex<double>;
    BraneSpec s;
    s.p = p;
    s.d = d;
    s.delta1 = s.delta2 = delta;
    const int sq = ((d * (d - 1) / 2) % 2 ? -1 : 1) * (d % 2 ? -1 : 1);
    s.eps = sq == 1 ? cd(1, 0) : cd(0, 1);
    if (d < 3) return s;  // the constraint check names the problem
    s.alpha3 = 1.0;
    s.alpha2 = 1.0 / (d - 2);
    s.alpha1 = -1.0 / (p + 1);  // (p+1)α1 + (d-2)α2 = 0
    const double sd = d % 2 ? -1.0 : 1.0;
    const double f1 = static_cast<double>(factorial(d - 1)), f2 = static_cast<double>(factorial(d - 2));
    s.alpha = s.alpha2 / (-sd * delta * (2.0 / s.eps) * f2 * s.alpha3);
    s.beta = s.alpha1 / (sd * delta * (2.0 / s.eps) * f1 * s.alpha3);
    return s;
}

BraneSpec brane_spec(const RunConfig& cfg) {
    BraneSpec s;
    if (cfg.preset == "m5") {
        s = BraneSpec::m5();
    } else if (cfg.preset == "printed") {
        s = BraneSpec::m5_printed();
    } else {
        if (!cfg.p || !cfg.d) throw ConfigError("brane: custom preset needs --p and --d");
        s = custom_brane(*cfg.p, *cfg.d, cfg.delta.value_or(-1));
    }
    const std::string why = brane_constraint_violation(s);
    if (!why.empty()) throw ConfigError("brane preset '" + cfg.preset + "' violates the constraints: " + why);
    if (s.D() > kMaxDim) throw ConfigError("brane: D = p + 1 + d must be at most 12");
    return s;
}

Report suite_brane(const RunConfig& cfg) {
    Report r;
    const BraneSpec spec = brane_spec(cfg);
    auto rep = rep_of(1, spec.D() - 1);
    int d0 = -1;
    auto real = realizable_delta0(*rep);
    if (cfg.delta0) d0 = *cfg.delta0;
    else if (std::find(real.begin(), real.end(), -1) == real.end()) d0 = real.front();
    ChargeConjugation conj = [&] {
        try {
            return build_conjugation(rep, d0);
        } catch (const UnavailableError& e) {
            throw ConfigError(e.what());
        }
    }();
    BraneGeometry g(conj, spec);
    const int D = spec.D();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    std::vector<std::vector<double>> pts(10, std::vector<double>(spec.d));
    for (auto& y : pts)
        for (auto& c : y) c = u(rng);

    double twice = 0, scale = 0;
    for (const auto& y : pts) {
        auto pt = g.at(y);
        auto T = torsion(g, pt);
        for (int A = 0; A < D; ++A)
            for (int B = 0; B < D; ++B) {
                CMat P = g.torsion_printed(pt, A, B);
                twice = std::max(twice, (T.v[A][B] - 2.0 * P).norm());
                scale = std::max(scale, P.norm());
            }
    }
    r.within("brane.torsion_closed_form", "geometry: generic torsion equals twice the closed-form brane torsion",
             twice / std::max(1.0, scale), 1e-12);

    double dt = 0, dr = 0, dadr = 0;
    for (int k = 0; k < 2; ++k) {
        auto b = bianchi_check(g, g.at(pts[k]));
        dt = std::max(dt, b.dt);
        dr = std::max(dr, b.dr);
        dadr = std::max(dadr, b.dadr_half);
    }
    r.within("brane.bianchi_dt", "geometry: cyclic D̂T = cyclic ad^C(R)γ on the brane", dt, 1e-9);
    r.within("brane.bianchi_dr", "geometry: cyclic DR = 0 on the brane", dr, 1e-9);
    r.within("brane.bianchi_dadr", "geometry: Alt D̂(ad^C_Rγ) = ½ Alt ad^C(R)T on the brane", dadr, 1e-9);

    auto fam = parallel_spinors_brane(g, {pts[0], pts[1], pts[2]});
    const std::size_t half = conj.rep().dim() / 2;
    r.exact("brane.parallel_dimension", "geometry: parallel spinor family has dimension dim S/2",
            std::size_t(fam.basis.cols()) == half ? 0 : 1, "dimension " + std::to_string(fam.basis.cols()));
    r.within("brane.parallel_residual", "geometry: D^C(fη0) = 0 on the sample points", fam.max_residual, 1e-10);

    double sym = 0, tor = 0;
    for (int k = 0; k < 2; ++k) {
        auto kr = killing_check(g, fam, pts[k]);
        sym = std::max(sym, kr.symmetric);
        tor = std::max(tor, kr.torsion);
    }
    r.within("brane.killing_symmetric", "geometry: ∇_(μV_ν) = 0 for V from parallel pairs (finite differences)", sym,
             1e-7);
    r.within("brane.killing_torsion", "geometry: ∇_μV_ν = C(η, T_{μν}ξ) (finite differences)", tor, 1e-7);

    if (cfg.preset == "m5") {
        auto h = holonomy_algebra(g, g.at(pts[0]));
        r.exact("brane.holonomy_dimension", "geometry: holonomy closure of D^C for the M5 preset",
                h.dim() == 106 ? 0 : 1, "dimension " + std::to_string(h.dim()));
    }

    auto tf = torsion_free_subset_brane(g, fam, pts[0]);
    r.within("brane.torsion_free_subset", "geometry: 𝔇 vanishes on the torsion-free subset K", tf.d_term_on_k, 1e-12,
             "dim K = " + std::to_string(tf.dim_k));
    return r;
}

Report cmd_brane(const RunConfig& cfg) { return suite_brane(cfg); }

// Jacobi -------------------------------------------------------------------------

namespace {

void jacobi_config(Report& r, const std::string& id, const FiberConfig& f, std::uint64_t seed, bool expect_flat) {
    auto k = f.parallel_candidates();
    if (k.empty()) {
        r.exact(id + ".parallel_kernel", "superjacobi: ker R^C is nonempty", 1, "K = {0}");
        return;
    }
    const std::size_t m = k.size();
    QVec mix = axpy(Cq(1), k[1 % m], k[m - 1]);
    std::vector<QVec> pick = {k[0], k[std::min<std::size_t>(3, m - 1)], mix};

    auto c = commutation_check(f, pick, seed, 2);
    const std::pair<const char*, bool> rel[] = {{"covariant_covariant", c.covariant_covariant},
                                                {"covariant_endo", c.covariant_endo},
                                                {"covariant_contraction", c.covariant_contraction},
                                                {"contraction_contraction", c.contraction_contraction},
                                                {"endo_contraction", c.endo_contraction},
                                                {"bracket_identity", c.bracket_identity}};
    for (const auto& [name, ok] : rel)
        r.exact(id + ".commutation." + name, "superjacobi: operator relation on jets", ok ? 0 : 1);

    Tally cyc;
    auto j = cyclic_jacobi(f, pick[0], pick[1], pick[2]);
    cyc.expect(is_zero(j.d_first), [] { return std::string("(4,1) first"); });
    cyc.expect(is_zero(j.d_second), [] { return std::string("(4,1) second"); });
    cyc.expect(is_zero(j.b_first), [] { return std::string("(3,0) first"); });
    cyc.expect(is_zero(j.b_second), [] { return std::string("(3,0) second"); });
    cyc.expect(bianchi_corollary_holds(f, pick[0], pick[1], pick[2]), [] { return std::string("corollary"); });
    r.exact(id + ".cyclic_sums", "superjacobi: graded cyclic sums of the Jacobi components", cyc.bad, cyc.witness());

    Tally lem;
    for (std::size_t a = 0; a < m; ++a)
        lem.expect(bianchi_lemma_holds(f, k[a]), [&] { return "spinor " + std::to_string(a); });
    r.exact(id + ".lemma", "superjacobi: D̂_{[κ}T_{μ]ν} = ad^C_{R_{κμ}}γ_ν + R⁰_{κμνλ}γ^λ on K", lem.bad, lem.witness());

    if (expect_flat) {
        auto fl = flatness_check(f, k[0], seed);
        r.exact(id + ".flat_differential", "superjacobi: flat ⇒ ı(η)² = 0",
                (fl.flat() && fl.iota_squared_zero) ? 0 : 1,
                std::string("b_zero=") + (fl.b_zero ? "1" : "0") + " d_zero=" + (fl.d_zero ? "1" : "0"));
    }
}

}  // namespace

Report suite_jacobi(const RunConfig& cfg) {
    Report r;
    auto rep = rep_of(cfg.t, cfg.s);
    if (rep->dim() > std::size_t(kExteriorCap))
        throw ConfigError("jacobi: exterior fiber is capped at dim S = " + std::to_string(kExteriorCap) +
                          ", signature " + sig_str(rep->signature()) + " has dim S = " + std::to_string(rep->dim()));
    const int D = rep->D();
    std::mt19937_64 rng(cfg.seed);
    for (const auto& conj : conjugations(cfg, rep)) {
        const std::string tg = tag(conj);
        jacobi_config(r, "jacobi.zero" + tg, FiberConfig::flat(SpinorConnection(Bundle(conj))), cfg.seed, true);
        if (conj.delta0() * conj.delta1() == -1)
            jacobi_config(r, "jacobi.killing" + tg, FiberConfig::killing_sphere(conj, Cq(Rational(3, 2))), cfg.seed,
                          false);
        if (cfg.t == 0 && D == 6) {
            KForm F{3, 6, {}};
            for (const auto& x : isotropic_forms(3, false))
                for (const auto& [idx, v] : x.comp) F.comp[idx] += v;
            auto f = FiberConfig::flat(three_form_connection(conj, F));
            jacobi_config(r, "jacobi.su3" + tg, f, cfg.seed, false);
            // the complex-structure spinor is the one annihilated by the torsion
            auto fl = flatness_check(f, complex_structure_spinor(*rep, false), cfg.seed);
            r.exact("jacobi.su3" + tg + ".flat_differential", "superjacobi: flat ⇒ ı(η)² = 0",
                    (fl.strongly_torsion_free && fl.flat() && fl.iota_squared_zero) ? 0 : 1);
        }

        Bundle b(conj);
        Tally first;
        for (int trial = 0; trial < 2; ++trial) {
            auto T = random_delta1_torsion(rng, b);
            auto R = random_curvature(rng, b);
            QVec x = random_spinor(rng, b.dim()), y = random_spinor(rng, b.dim()), z = random_spinor(rng, b.dim());
            auto j = cyclic_first_summands(b, T, R, x, y, z);
            first.expect(is_zero(j.d_first) && is_zero(j.b_first), [&] { return "trial " + std::to_string(trial); });
        }
        r.exact("jacobi.first_summands" + tg, "superjacobi: first summands cancel for Δ1-symmetric torsion", first.bad,
                first.witness());
    }
    return r;
}

// Dispatch ---------------------------------------------------------------------

Report run_suite(const RunConfig& cfg, const std::string& name) {
    using Fn = Report (*)(const RunConfig&);
    static const std::map<std::string, Fn> table = {
        {"admissibility", suite_admissibility}, {"bianchi", suite_bianchi}, {"brane", suite_brane},
        {"clifford", suite_clifford},           {"conjugation", suite_conjugation}, {"fierz", suite_fierz},
        {"jacobi", suite_jacobi}};
    if (name != "all") {
        auto it = table.find(name);
        if (it == table.end()) throw ConfigError("unknown suite '" + name + "'");
        return it->second(cfg);
    }
    std::vector<std::future<Report>> jobs;
    for (const auto& [n, fn] : table) jobs.push_back(std::async(std::launch::async, fn, cfg));
    Report all;
    for (auto& j : jobs) all.merge(j.get());  // rethrows the first error
    return all;
}

// Tables -----------------------------------------------------------------------

std::string describe_kernel(const GammaRep& rep, int w, const std::vector<QVec>& span) {
    if (span.empty()) return "0";
    if (span.size() == 2 * rep.dim()) return "S+S";
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            if (same_span(span, chiral_sum(rep, a * w, b * w)))
                return std::string("S^") + (a < 0 ? "-" : "") + "w+S^" + (b < 0 ? "-" : "") + "w";
    for (int s : {-1, 1})
        if (same_span(span, graph_of_star(rep, s * w))) return s < 0 ? "graph(-w)" : "graph(+w)";
    return "other";
}

std::vector<KernelRow> kernel_table(const GammaRep& rep) {
    static const std::map<std::pair<int, int>, std::string> printed = {
        {{0, 0}, "S^-w+S^-w"}, {{0, 1}, "graph(-w)"}, {{0, 3}, "S^-w+S^w"}, {{1, 1}, "S^-w+S^-w"},
        {{1, 2}, "S^-w+S^w"},  {{2, 2}, "S^-w+S^-w"}, {{2, 3}, "graph(+w)"}, {{3, 3}, "S^-w+S^-w"}};
    std::vector<KernelRow> out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int w : {1, -1}) {
                KernelRow row{i, j, w, {}, {}, 0};
                if (auto it = printed.find({i, j}); it != printed.end()) row.printed = it->second;
                auto ker = kernel(pi_projector(rep, i, j, w).m);
                row.dim = ker.size();
                row.measured = describe_kernel(rep, w, ker);
                out.push_back(row);
            }
    return out;
}

Report cmd_tables(const RunConfig& cfg) {
    Report r;
    nlohmann::json t1 = nlohmann::json::array(), t2 = nlohmann::json::array(), t3 = nlohmann::json::array();

    for (auto [t, s] : {std::pair{0, 4}, std::pair{0, 6}, std::pair{1, 3}, std::pair{1, 9}}) {
        auto rep = rep_of(t, s);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            const int x = conj.delta0() * conj.delta1();
            for (const auto& row : twisted_table(conj))
                t1.push_back({{"signature", {t, s}}, {"delta0", d0}, {"delta0delta1", x}, {"i", row.i},
                              {"l_mod4", row.ell_mod4}, {"j", row.j}});
            auto diff = twisted_table_diff(conj);
            r.exact("tables.twisted" + sig_str(rep->signature()) + tag(conj), "connection: twisted table",
                    diff.size(), join(diff));
        }
    }

    auto rep4 = rep_of(0, 4);
    std::size_t bad = 0;
    std::vector<std::string> why;
    for (const auto& row : kernel_table(*rep4)) {
        t2.push_back({{"i", row.i}, {"j", row.j}, {"w", row.w}, {"kernel", row.measured}, {"dim", row.dim},
                      {"printed", row.printed}});
        if (!row.printed.empty() && row.printed != row.measured) {
            ++bad;
            why.push_back("Π" + std::to_string(row.i) + std::to_string(row.j) + (row.w > 0 ? "+" : "-") +
                          " measured " + row.measured + " printed " + row.printed);
        }
    }
    r.exact("tables.kernels", "connection: kernels of Π_{ij,w} on S ⊕ S (D = 4)", bad, join(why, 4));

    for (int D : {2, 4, 6, 8}) {
        auto rep = rep_of(0, D);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            auto table = symmetry_chirality_table(conj);
            for (const auto& row : table.rows)
                t3.push_back({{"D", D}, {"delta0", d0}, {"k", row.k}, {"delta", row.delta}, {"chiral", row.chiral}});
            auto diff = symmetry_table_diff(conj);
            r.exact("tables.symmetry(D=" + std::to_string(D) + ")" + tag(conj), "conjugation: symmetry/chirality row",
                    diff.size(), join(diff));
        }
    }
    r.extra = {{"twisted_table", t1}, {"kernels", t2}, {"symmetry_chirality", t3}};
    (void)cfg;
    return r;
}

// IIB truncations -----------------------------------------------------------

const std::map<int, std::vector<std::string>>& iib_printed_killed() {
    static const std::map<int, std::vector<std::string>> m = {
        {0, {}}, {1, {"F1", "F3", "F5", "F7", "F9"}}, {3, {"F1", "F5", "F9", "H3"}}};
    return m;
}

namespace {

std::string names(const std::vector<std::string>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s + "}";
}

}  // namespace

Report cmd_iib_truncations(const RunConfig& cfg) {
    if (cfg.D() != 10) throw ConfigError("iib-truncations: needs D = 10");
    Report r;
    auto rep = rep_of(cfg.t, cfg.s);
    nlohmann::json rows = nlohmann::json::array();
    auto conjs = conjugations(cfg, rep);
    for (const auto& conj : conjs) {
        const std::string tg = tag(conj);
        auto cf = field_truncations(conj, iib_fields(), false);
        for (const auto& row : cf)
            rows.push_back({{"delta0", conj.delta0()}, {"i", row.i}, {"kept", row.kept}, {"killed", row.killed}});
        for (const auto& [j, want] : iib_printed_killed()) {
            const auto& got = cf[j].killed;
            r.exact("iib.killed[j=" + std::to_string(j) + "]" + tg, "connection: fields excluded for C ⊗ τ_j",
                    got == want ? 0 : 1, "measured " + names(got) + " printed " + names(want));
        }
    }
    // brute force on the doubled bundle for the first choice
    auto bf = field_truncations(conjs.front(), iib_fields(), true);
    auto cf = field_truncations(conjs.front(), iib_fields(), false);
    std::size_t bad = 0;
    for (int i = 0; i < 4; ++i) bad += bf[i].killed != cf[i].killed;
    r.exact("iib.brute_force" + tag(conjs.front()), "connection: twisted rule vs doubled-bundle brute force", bad);
    r.extra = {{"iib_truncations", rows}};
    return r;
}

}  // namespace spt::tool
