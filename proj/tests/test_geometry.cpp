#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spintorsion/geometry.hpp"

using namespace spt;

namespace {

std::shared_ptr<const GammaRep> rep_of(int t, int s) {
    return std::make_shared<const GammaRep>(Signature::make(t, s));
}

const ChargeConjugation& conj11() {
    static const ChargeConjugation c = build_conjugation(rep_of(1, 10), -1);
    return c;
}

const BraneGeometry& m5() {
    static const BraneGeometry g(conj11(), BraneSpec::m5());
    return g;
}

std::vector<std::vector<double>> sample_points(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    std::vector<std::vector<double>> out(n, std::vector<double>(5));
    for (auto& y : out)
        for (auto& c : y) c = u(rng);
    return out;
}

// ∂_E g_{MM} by central differences, [E][M]
std::vector<std::vector<double>> metric_derivatives_fd(const BraneGeometry& g, const std::vector<double>& y) {
    const int D = g.D(), P1 = g.p1();
    const double h = 1e-5;
    std::vector<std::vector<double>> dg(D, std::vector<double>(D, 0.0));
    for (int E = P1; E < D; ++E) {
        auto yp = y, ym = y;
        yp[E - P1] += h;
        ym[E - P1] -= h;
        auto gp = g.at(yp), gm = g.at(ym);
        for (int M = 0; M < D; ++M) dg[E][M] = (jet_value(gp.g[M]) - jet_value(gm.g[M])) / (2 * h);
    }
    return dg;
}

// Γ_{ABC} = ½(∂_A g_BC + ∂_C g_BA - ∂_B g_AC) for a diagonal metric
double christoffel_fd(const std::vector<std::vector<double>>& dg, int A, int B, int C) {
    auto d = [&](int E, int M, int N) { return M == N ? dg[E][M] : 0.0; };
    return 0.5 * (d(A, B, C) + d(C, B, A) - d(B, A, C));
}

// Φ^C = C⁻¹ΦᵀC with the oracle's dense algebra
QMat adjoint_oracle(const ChargeConjugation& conj, const QMat& m) { return conj.c_inv() * m.transpose() * conj.c(); }

}  // namespace

TEST_CASE("nested jets reproduce analytic first and second derivatives") {
    auto v = jet_variables({0.3, -0.7});
    Jet2 f = exp(v[0] * v[1]) + v[0] * v[0] * v[1];
    const double x = 0.3, y = -0.7, e = std::exp(x * y);
    CHECK(jet_value(f) == doctest::Approx(e + x * x * y).epsilon(1e-15));
    CHECK(jet_grad(f, 0) == doctest::Approx(y * e + 2 * x * y).epsilon(1e-14));
    CHECK(jet_grad(f, 1) == doctest::Approx(x * e + x * x).epsilon(1e-14));
    CHECK(jet_hess(f, 0, 0) == doctest::Approx(y * y * e + 2 * y).epsilon(1e-14));
    CHECK(jet_hess(f, 0, 1) == doctest::Approx(e + x * y * e + 2 * x).epsilon(1e-14));
    CHECK(jet_hess(f, 1, 0) == doctest::Approx(jet_hess(f, 0, 1)).epsilon(1e-15));
    CHECK(jet_hess(f, 1, 1) == doctest::Approx(x * x * e).epsilon(1e-14));
}

TEST_CASE("brane profile derivatives match the closed form gradient") {
    const auto& g = m5();
    for (const auto& y : sample_points(4, 11)) {
        auto pt = g.at(y);
        auto du = g.du(y);
        CHECK(jet_value(pt.u) == doctest::Approx(g.u(y)).epsilon(1e-14));
        for (int i = 0; i < 5; ++i) {
            CHECK(jet_grad(pt.u, i) == doctest::Approx(du[i]).epsilon(1e-13));
            CHECK(jet_value(pt.du[i]) == doctest::Approx(du[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("constraint system: M5 presets") {
    CHECK(brane_constraint_violation(BraneSpec::m5()).empty());
    const std::string why = brane_constraint_violation(BraneSpec::m5_printed());
    CHECK(why.find("projector mismatch") != std::string::npos);
    CHECK_THROWS_AS(BraneGeometry(conj11(), BraneSpec::m5_printed()), ConstraintError);
    // the printed coefficients themselves satisfy the α-system with δ2 = +1
    BraneSpec s = BraneSpec::m5_printed();
    s.delta1 = 1;
    CHECK(brane_constraint_violation(s).find("α1") != std::string::npos);
    BraneSpec bad = BraneSpec::m5();
    bad.alpha3 = 2.0;
    CHECK(brane_constraint_violation(bad).find("α") != std::string::npos);
    BraneSpec odd = BraneSpec::m5();
    odd.p = 4;
    CHECK(brane_constraint_violation(odd).find("even dimensional") != std::string::npos);
}

TEST_CASE("Christoffel symbols: metric formula, finite differences and closed form") {
    const auto& g = m5();
    for (const auto& y : sample_points(3, 5)) {
        auto pt = g.at(y);
        const auto dg = metric_derivatives_fd(g, y);
        double worst = 0, worst_fd = 0, sym = 0;
        for (int A = 0; A < 11; ++A)
            for (int B = 0; B < 11; ++B)
                for (int C = 0; C < 11; ++C) {
                    const double v = jet_value(pt.christoffel[A][B][C]);
                    worst = std::max(worst, std::abs(v - g.christoffel_closed(pt, A, B, C)));
                    sym = std::max(sym, std::abs(v - jet_value(pt.christoffel[C][B][A])));
                    worst_fd = std::max(worst_fd, std::abs(v - christoffel_fd(dg, A, B, C)));
                }
        CHECK(worst < 1e-12);
        CHECK(sym == 0.0);
        CHECK(worst_fd < 1e-7);
        // worldvolume-only and mixed components listed as vanishing
        CHECK(jet_value(pt.christoffel[0][1][2]) == 0.0);
        CHECK(jet_value(pt.christoffel[6][0][7]) == 0.0);
        CHECK(jet_value(pt.christoffel[0][6][7]) == 0.0);
    }
}

TEST_CASE("constant profile gives a flat background") {
    BraneSpec s = BraneSpec::m5();
    s.profile = Profile::affine;
    s.profile_params = {0, 0, 0, 0, 0};
    BraneGeometry g(conj11(), s);
    auto pt = g.at({0.1, 0.2, 0.3, 0.4, 0.5});
    double worst = 0;
    for (int A = 0; A < 11; ++A) {
        worst = std::max(worst, pt.omega[A].v.norm() + pt.conn_c[A].v.norm());
        for (int B = 0; B < 11; ++B)
            for (int C = 0; C < 11; ++C) worst = std::max(worst, std::abs(jet_value(pt.christoffel[A][B][C])));
    }
    CHECK(worst == 0.0);
}

TEST_CASE("Levi-Civita spin connection is the negative of the printed lift and parallelizes γ") {
    const auto& g = m5();
    for (const auto& y : sample_points(3, 7)) {
        auto pt = g.at(y);
        auto du = g.du(y);
        const double f1 = jet_value(pt.f1), f2 = jet_value(pt.f2);
        double lift = 0, parallel = 0, xcoef = 0;
        for (int E = 0; E < 11; ++E) {
            lift = std::max(lift, (pt.omega[E].v + g.spin_connection_printed(pt, E)).norm());
            for (int A = 0; A < 11; ++A) {
                // ∇_Eγ_A = ∂_Eγ_A + [ω_E, γ_A] - Γ^B_{EA}γ_B
                CMat r = pt.gamma[A].d[E] + pt.omega[E].v * pt.gamma[A].v - pt.gamma[A].v * pt.omega[E].v;
                for (int B = 0; B < 11; ++B) r -= jet_value(pt.gamma2[E][B][A]) * pt.gamma[B].v;
                parallel = std::max(parallel, r.norm());
            }
        }
        // X_i = ∂_i(ln f1) f1/f2 = α1 ∂_i u f1/f2 by differentiating e^{α1 u}
        for (int i = 0; i < 5; ++i) xcoef = std::max(xcoef, std::abs(pt.X[i] - (-1.0 / 6) * du[i] * f1 / f2));
        CHECK(lift < 1e-13);
        CHECK(parallel < 1e-12);
        CHECK(xcoef < 1e-14);
    }
}

TEST_CASE("generic D^C matches the reduced closed form") {
    const auto& g = m5();
    for (const auto& y : sample_points(10, 13)) {
        auto pt = g.at(y);
        double worst = 0;
        for (int A = 0; A < 11; ++A) worst = std::max(worst, (pt.conn_c[A].v - g.dc_closed(pt, A)).norm());
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("electric description reuses the magnetic projector in odd dimension") {
    const auto& g = m5();
    auto e = g.electric_eps();
    REQUIRE(e.has_value());
    CHECK((g.electric_projector(1) - g.projector(1)).norm() < 1e-13);
    CHECK((g.electric_projector(-1) - g.projector(-1)).norm() < 1e-13);
}

TEST_CASE("curvature: antisymmetry and (R_{AB})^C = -R^C_{AB}") {
    const auto& g = m5();
    auto pt = g.at({0.2, -0.1, 0.4, 0.3, -0.6});
    auto R = curvature(pt, pt.conn);
    auto RC = curvature(pt, pt.conn_c);
    double anti = 0, adj = 0, scale = 0;
    for (int A = 0; A < 11; ++A)
        for (int B = 0; B < 11; ++B) {
            anti = std::max(anti, (R.v[A][B] + R.v[B][A]).norm());
            adj = std::max(adj, (g.adjoint(R.v[A][B]) + RC.v[A][B]).norm());
            scale = std::max(scale, R.v[A][B].norm());
        }
    CHECK(scale > 1e-3);
    CHECK(anti == 0.0);
    CHECK(adj < 1e-12);
}

TEST_CASE("generic torsion is twice the printed brane torsion") {
    const auto& g = m5();
    for (const auto& y : sample_points(10, 17)) {
        auto pt = g.at(y);
        auto T = torsion(g, pt);
        double twice = 0, once = 0, scale = 0;
        for (int A = 0; A < 11; ++A)
            for (int B = 0; B < 11; ++B) {
                CMat P = g.torsion_printed(pt, A, B);
                twice = std::max(twice, (T.v[A][B] - 2.0 * P).norm());
                once = std::max(once, (T.v[A][B] - P).norm());
                scale = std::max(scale, P.norm());
            }
        CHECK(twice < 1e-12 * std::max(1.0, scale));
        CHECK(once > 0.1 * scale);
    }
}

TEST_CASE("Bianchi identities on the brane background") {
    const auto& g = m5();
    for (const auto& y : sample_points(2, 19)) {
        auto r = bianchi_check(g, g.at(y));
        CHECK(r.scale > 1e-2);
        CHECK(r.dt < 1e-9);
        CHECK(r.dr < 1e-9);
        CHECK(r.dadr_half < 1e-9);
        // the identity with unit factor does not hold
        CHECK(r.dadr > 1e-2);
    }
}

TEST_CASE("parallel spinor family of the M5 background") {
    const auto& g = m5();
    auto pts = sample_points(3, 23);
    auto fam = parallel_spinors_brane(g, pts);
    CHECK(fam.basis.cols() == 16);
    CHECK(fam.projector_sign == 1);
    CHECK(fam.exponent == doctest::Approx(-1.0 / 12).epsilon(1e-14));
    CHECK(fam.max_residual < 1e-10);
    CHECK(fam.off_family > 1e-2);
    CHECK(fam.curvature < 1e-9);

    // ∂_i f = c Y_i f with c = -(d-1)β/2α, integrated with RK4 along a segment
    const double c = -0.25;
    const auto y0 = pts[0], y1 = pts[1];
    auto rhs = [&](double s) {
        std::vector<double> y(5);
        for (int i = 0; i < 5; ++i) y[i] = y0[i] + s * (y1[i] - y0[i]);
        auto du = g.du(y);
        double v = 0;
        for (int i = 0; i < 5; ++i) v += c * (1.0 / 3) * du[i] * (y1[i] - y0[i]);
        return v;
    };
    for (int i = 0; i < 5; ++i) CHECK(g.at(y0).Y[i] == doctest::Approx(g.du(y0)[i] / 3).epsilon(1e-14));
    double lf = 0;  // ln f
    const int steps = 200;
    for (int k = 0; k < steps; ++k) {
        const double s = double(k) / steps, h = 1.0 / steps;
        const double k1 = rhs(s), k2 = rhs(s + h / 2), k4 = rhs(s + h);
        lf += h * (k1 + 4 * k2 + k4) / 6;
    }
    CHECK(lf == doctest::Approx(fam.exponent * (g.u(y1) - g.u(y0))).epsilon(1e-9));

    // D^C(fη0) = 0 with ∂_i by central differences of f = e^{ku}
    const auto& y = pts[2];
    auto pt = g.at(y);
    const double h = 1e-4;
    double worst = 0;
    for (int k = 0; k < fam.basis.cols(); ++k) {
        const CVec eta0 = fam.basis.col(k);
        for (int A = 0; A < 11; ++A) {
            double df = 0;
            if (A >= g.p1()) {
                auto yp = y, ym = y;
                yp[A - g.p1()] += h;
                ym[A - g.p1()] -= h;
                df = (std::exp(fam.exponent * g.u(yp)) - std::exp(fam.exponent * g.u(ym))) / (2 * h);
            }
            CVec r = df * eta0 + std::exp(fam.exponent * g.u(y)) * (pt.conn_c[A].v * eta0);
            worst = std::max(worst, r.norm());
        }
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("Killing vectors from parallel spinor pairs") {
    const auto& g = m5();
    auto pts = sample_points(2, 29);
    auto fam = parallel_spinors_brane(g, pts);
    for (const auto& y : pts) {
        auto r = killing_check(g, fam, y);
        CHECK(r.scale > 1e-3);
        CHECK(r.symmetric < 1e-7);
        CHECK(r.torsion < 1e-7);
    }
}

TEST_CASE("holonomy of D^C on the brane background") {
    const auto& g = m5();
    auto h = holonomy_algebra(g, g.at({0.3, -0.2, 0.5, 0.1, -0.4}));
    CHECK(h.dim() == 106);
    CHECK(!h.saturated);
    REQUIRE(h.rounds.size() == 3);
    CHECK(h.rounds[0] == 40);
    CHECK(h.rounds[1] == 100);
    CHECK(h.rounds[2] == 106);
    // closure is idempotent
    CHECK(lie_closure(h.basis).dim() == 106);
}

TEST_CASE("lie closure: small cases") {
    CHECK(lie_closure({CMat::Zero(4, 4)}).dim() == 0);
    // Pauli matrices close on su(2); two of them generate the third
    CMat s1(2, 2), s2(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    auto h = lie_closure({s1, s2});
    CHECK(h.dim() == 3);
    CHECK(h.rounds == std::vector<std::size_t>{2, 3});
    auto z = lie_closure({s1});
    CHECK(z.dim() == 1);
}

TEST_CASE("torsion free subset of the brane background is empty") {
    const auto& g = m5();
    const std::vector<double> y{0.1, 0.4, -0.3, 0.2, 0.5};
    auto fam = parallel_spinors_brane(g, {y});
    auto r = torsion_free_subset_brane(g, fam, y);
    CHECK(r.dim_family == 16);
    CHECK(r.x_square < 1e-14);
    CHECK(r.dim_k == 0);
    CHECK(r.first_summand_sym < 1e-12);
    CHECK(r.d_term_on_k == 0.0);
    CHECK(r.d_term_on_family > 1e-3);
}

TEST_CASE("geometric Killing connection on flat space") {
    for (auto [t, s] : std::vector<std::pair<int, int>>{{0, 7}, {1, 10}, {3, 4}}) {
        auto rep = rep_of(t, s);
        auto conj = build_conjugation(rep, realizable_delta0(*rep).back());
        REQUIRE(conj.delta0() * conj.delta1() == -1);
        for (Cq a : {Cq(1), Cq(-2), Cq(Rational(3, 2))}) {
            auto k = killing_example(conj, a);
            CHECK(k.torsion_4a);
            CHECK(k.curvature_2a2);
            CHECK(k.hat_dt_measured);
            CHECK(k.hat_dt_printed == (a == Cq(1)));
            CHECK(k.adr_gamma);
            CHECK(k.both_sides_vanish);
            CHECK(k.admissible);
        }
        // independent torsion: ad^C(aγ_μ)γ_ν - (μ ↔ ν) with dense matrices
        const Cq a(Rational(3, 2));
        auto T = torsion(killing_connection(conj, a));
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                auto ad = [&](int x, int y) {
                    QMat A = oracle::dense_gamma(*rep, x) * a, G = oracle::dense_gamma(*rep, y);
                    return A * G + G * adjoint_oracle(conj, A);
                };
                CHECK(T[m][n] == ad(m, n) - ad(n, m));
            }
    }
}

TEST_CASE("flat Bianchi identities for constant connections") {
    auto rep = rep_of(1, 4);
    auto conj = build_conjugation(rep, realizable_delta0(*rep).front());
    SpinorConnection zero(Bundle{conj});
    auto z = flat_bianchi(zero);
    CHECK(z.dt);
    CHECK(z.dr);
    CHECK(z.dadr);
    CHECK(z.dt_sides_zero);
    CHECK(holonomy_flat(zero).dim() == 0);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 3; ++trial) {
        auto conn = three_form_connection(conj, random_form(rng, 5, 3));
        auto b = flat_bianchi(conn);
        CHECK(b.dt);
        CHECK(b.dr);
        CHECK(b.dadr_half);
        CHECK_FALSE(b.dadr);
    }
}

TEST_CASE("su(n) intersection is trivial; the isotropic 3-forms kill the pure spinor") {
    auto r2 = su_n_flat_example(2);
    CHECK(r2.dim_nbar == 0);
    CHECK(r2.dim_n == 0);
    CHECK(r2.dim_real == 0);
    CHECK(r2.dim_isotropic == 0);
    CHECK(r2.generic_not_annihilating);

    auto r3 = su_n_flat_example(3);
    CHECK(r3.dim_nbar == 0);
    CHECK(r3.dim_n == 0);
    CHECK(r3.dim_isotropic == 1);
    CHECK(r3.eta_annihilated);
    CHECK(r3.eta_bar_annihilated);
    CHECK(r3.isotropic_holonomy_in_su);
    CHECK(r3.admissible);
    CHECK(r3.generic_not_annihilating);
}

TEST_CASE("complex structure spinors are pure and of opposite type") {
    auto rep = rep_of(0, 6);
    auto eta = complex_structure_spinor(*rep, false), bar = complex_structure_spinor(*rep, true);
    for (int a = 0; a < 3; ++a) {
        QMat m = rep->gamma_up(a).dense() - rep->gamma_up(a + 3).dense() * Cq::i();
        QMat mb = rep->gamma_up(a).dense() + rep->gamma_up(a + 3).dense() * Cq::i();
        CHECK(is_zero(m.apply(eta)));
        CHECK(is_zero(mb.apply(bar)));
        CHECK_FALSE(is_zero(m.apply(bar)));
    }
}

TEST_CASE("skew torsion: σ^T is a 4-form and the printed R⁰ expansion") {
    for (auto [t, s] : std::vector<std::pair<int, int>>{{0, 4}, {0, 5}, {1, 4}}) {
        auto rep = rep_of(t, s);
        auto conj = build_conjugation(rep, realizable_delta0(*rep).front());
        std::mt19937_64 rng(53 + t + s);
        auto r = r0_from_skew_torsion(three_form_connection(conj, random_form(rng, t + s, 3)));
        CHECK(r.totally_skew);
        CHECK(r.torsion_matches_vector);
        CHECK(r.sigma_is_form);
        CHECK(r.flat_identity);
        CHECK_FALSE(r.dt_t_zero);
        CHECK_FALSE(r.r0_zero);
    }
    // T = 0: R⁰ = R = 0
    auto rep = rep_of(0, 4);
    auto conj = build_conjugation(rep, realizable_delta0(*rep).front());
    auto r = r0_from_skew_torsion(SpinorConnection(Bundle{conj}));
    CHECK(r.r0_zero);
    CHECK(r.R == r.R0);
}
