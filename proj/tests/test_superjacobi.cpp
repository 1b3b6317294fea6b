#include <algorithm>
#include <random>

#include "doctest.h"
#include "spintorsion/geometry.hpp"
#include "spintorsion/superjacobi.hpp"

using namespace spt;

namespace {

ChargeConjugation conj_of(int t, int s, int d0) {
    return build_conjugation(std::make_shared<const GammaRep>(Signature::make(t, s)), d0);
}

QVec rand_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> v(-2, 2);
    QVec out(n);
    for (auto& x : out) {
        int re = v(rng), im = v(rng);
        x = Cq(re) + Cq::i() * Cq(im);
    }
    return out;
}

QVec add(const QVec& a, const QVec& b) { return axpy(Cq(1), a, b); }

QVec unit(std::size_t n, std::size_t i) {
    QVec e(n);
    e[i] = Cq(1);
    return e;
}

ExteriorElement rand_homogeneous(std::mt19937_64& rng, int n, int k) {
    ExteriorElement e(n);
    std::uniform_int_distribution<int> v(-3, 3);
    for (const auto& s : subsets(n, k)) {
        std::uint32_t m = 0;
        for (int i : s) m |= 1u << i;
        e.add(m, Cq(v(rng)));
    }
    return e;
}

// Oracle for θ_I ∧ θ_J: concatenate and bubble sort, counting swaps.
std::pair<int, std::uint32_t> merge_oracle(std::uint32_t I, std::uint32_t J) {
    std::vector<int> idx;
    for (int i = 0; i < 32; ++i)
        if (I >> i & 1u) idx.push_back(i);
    for (int i = 0; i < 32; ++i)
        if (J >> i & 1u) idx.push_back(i);
    int sign = 1;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b + 1 < idx.size() - a; ++b) {
            if (idx[b] == idx[b + 1]) return {0, 0};
            if (idx[b] > idx[b + 1]) {
                std::swap(idx[b], idx[b + 1]);
                sign = -sign;
            }
        }
    for (std::size_t b = 0; b + 1 < idx.size(); ++b)
        if (idx[b] == idx[b + 1]) return {0, 0};
    return {sign, I | J};
}

ExteriorElement oracle_wedge(const ExteriorElement& a, const ExteriorElement& b) {
    ExteriorElement out(std::max(a.generators(), b.generators()));
    for (const auto& [I, x] : a.terms())
        for (const auto& [J, y] : b.terms()) {
            auto [s, m] = merge_oracle(I, J);
            if (s) out.add(m, x * y * Cq(s));
        }
    return out;
}

const ChargeConjugation& c06() {
    static const ChargeConjugation c = conj_of(0, 6, 1);
    return c;
}

FiberConfig su3_config() {
    KForm F{3, 6, {}};
    for (const auto& x : isotropic_forms(3, false))
        for (const auto& [k, v] : x.comp) F.comp[k] += v;
    return FiberConfig::flat(three_form_connection(c06(), F));
}

}  // namespace

TEST_CASE("wedge matches the sorted-merge oracle and is graded commutative") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = ExteriorElement::vector(rand_vec(rng, 8));
        auto b = ExteriorElement::vector(rand_vec(rng, 8));
        auto c = ExteriorElement::vector(rand_vec(rng, 8));
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        CHECK(wedge(wedge(a, b), c) == oracle_wedge(oracle_wedge(a, b), c));
        CHECK(wedge(a, a).is_zero());
    }
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; q <= 4; ++q) {
            auto a = rand_homogeneous(rng, 8, p);
            auto b = rand_homogeneous(rng, 8, q);
            auto ab = wedge(a, b);
            CHECK(ab == wedge(b, a) * Cq((p * q) % 2 ? -1 : 1));
            CHECK(ab == oracle_wedge(a, b));
            for (const auto& [m, x] : ab.terms()) CHECK(std::popcount(m) == p + q);
        }
}

TEST_CASE("grade pieces have binomial dimension and the cap is enforced") {
    const int n = 6;
    std::vector<int> count(n + 1, 0);
    for (std::uint32_t m = 0; m < (1u << n); ++m) ++count[std::popcount(m)];
    for (int k = 0; k <= n; ++k) CHECK(count[k] == static_cast<int>(subsets(n, k).size()));
    CHECK_NOTHROW(ExteriorElement(8));
    CHECK_THROWS_AS(ExteriorElement(9), std::invalid_argument);
    CHECK_THROWS_AS(ExteriorElement::vector(QVec(16)), std::invalid_argument);
}

TEST_CASE("endomorphisms act as even derivations and contractions as odd ones") {
    std::mt19937_64 rng(2);
    Bundle b(c06());
    const std::size_t N = b.dim();
    for (int trial = 0; trial < 5; ++trial) {
        QMat M = QMat::zero(N, N);
        for (std::size_t i = 0; i < N; ++i) {
            QVec r = rand_vec(rng, N);
            for (std::size_t j = 0; j < N; ++j) M(i, j) = r[j];
        }
        QVec v = rand_vec(rng, N), phi = rand_vec(rng, N);
        CHECK(derivation(M, ExteriorElement::vector(v)) == ExteriorElement::vector(M.apply(v)));
        CHECK(contraction(b, phi, ExteriorElement::vector(v)) == ExteriorElement::one(8) * b.pair(phi, v));
        for (int p = 1; p <= 3; ++p) {
            auto x = rand_homogeneous(rng, 8, p);
            auto y = rand_homogeneous(rng, 8, 2);
            CHECK(derivation(M, wedge(x, y)) == wedge(derivation(M, x), y) + wedge(x, derivation(M, y)));
            CHECK(contraction(b, phi, wedge(x, y)) ==
                  wedge(contraction(b, phi, x), y) + wedge(x, contraction(b, phi, y)) * Cq(p % 2 ? -1 : 1));
        }
    }
}

TEST_CASE("b_term and d_term: symmetry and closed forms") {
    std::mt19937_64 rng(3);
    const Cq a(2);
    auto sphere = FiberConfig::killing_sphere(c06(), a);
    auto flatk = FiberConfig::flat(killing_connection(c06(), a));
    Bundle b(c06());
    const int D = 6;
    // T = 4aγ_{μν} on both, R = 2a²γ_{μν} on the flat base and 0 on the sphere
    auto T = sphere.torsion();
    auto R = flatk.curvature();
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            QMat gmn = m == n ? QMat::zero(8, 8) : b.gamma(m).dense() * b.gamma(n).dense();
            CHECK(T[m][n] == gmn * (a * Cq(4)));
            CHECK(flatk.torsion()[m][n] == gmn * (a * Cq(4)));
            CHECK(R[m][n] == gmn * (a * a * Cq(2)));
            CHECK(sphere.curvature()[m][n].is_zero());
            CHECK(sphere.curvature_c()[m][n].is_zero());
        }
    for (int trial = 0; trial < 3; ++trial) {
        QVec p = rand_vec(rng, 8), q = rand_vec(rng, 8);
        auto bpq = b_term(flatk, p, q), bqp = b_term(flatk, q, p);
        // γ^μφ ∧ γ^νψ = -γ^νψ ∧ γ^μφ and R antisymmetric
        CHECK(bpq.size() == bqp.size());
        for (const auto& [m, x] : bpq) CHECK(x == bqp.at(m));
        CHECK(d_term(flatk, p, q) == d_term(flatk, q, p));
        CHECK(is_zero(b_term(sphere, p, q)));
        CHECK_FALSE(is_zero(d_term(sphere, p, q)));
    }
    // zero connection: everything vanishes
    auto zero = FiberConfig::flat(SpinorConnection(Bundle(conj_of(0, 4, -1))));
    QVec p = rand_vec(rng, 4);
    CHECK(is_zero(b_term(zero, p, p)));
    CHECK(is_zero(d_term(zero, p, p)));
}

TEST_CASE("fundamental commutation relations and the bracket identity") {
    auto zero4 = FiberConfig::flat(SpinorConnection(Bundle(conj_of(0, 4, -1))));
    std::vector<QVec> k4 = {unit(4, 0), unit(4, 1), add(unit(4, 2), unit(4, 3))};
    CHECK(commutation_check(zero4, k4, 5).all());

    auto su3 = su3_config();
    auto k6 = su3.parallel_candidates();
    REQUIRE(k6.size() == 8);
    std::vector<QVec> pick = {k6[0], k6[3], complex_structure_spinor(c06().rep(), false)};
    CHECK(commutation_check(su3, pick, 6, 2).all());

    for (int a : {1, -2}) {
        auto sphere = FiberConfig::killing_sphere(c06(), Cq(a));
        auto ks = sphere.parallel_candidates();
        REQUIRE(ks.size() == 8);
        auto rep = commutation_check(sphere, {ks[0], ks[5], add(ks[2], ks[7])}, 7, 2);
        CHECK(rep.covariant_covariant);
        CHECK(rep.covariant_endo);
        CHECK(rep.covariant_contraction);
        CHECK(rep.contraction_contraction);
        CHECK(rep.endo_contraction);
        CHECK(rep.bracket_identity);
    }
    auto lorentz = FiberConfig::killing_sphere(conj_of(1, 5, 1), Cq(1));
    auto kl = lorentz.parallel_candidates();
    CHECK(commutation_check(lorentz, {kl[1], kl[4]}, 8, 2).all());
}

TEST_CASE("bracket identity fails without admissibility") {
    // D = 4 only has Δ0Δ1 = +1, so D̂γ has a symmetric part
    auto conj = conj_of(0, 4, -1);
    auto sphere = FiberConfig::killing_sphere(conj, Cq(1));
    auto k = sphere.parallel_candidates();
    REQUIRE_FALSE(k.empty());
    CHECK_FALSE(admissible_on(sphere, k[0]));
    CHECK_FALSE(commutation_check(sphere, {k[0], k[1]}, 9, 1).bracket_identity);
    CHECK_THROWS_AS(cyclic_jacobi(sphere, k[0], k[1], k[2]), std::invalid_argument);
}

TEST_CASE("cyclic sums of the (3,0) and (4,1) components vanish") {
    std::mt19937_64 rng(4);
    SUBCASE("zero connection, constant spinors") {
        auto zero4 = FiberConfig::flat(SpinorConnection(Bundle(conj_of(0, 4, -1))));
        auto j = cyclic_jacobi(zero4, unit(4, 0), unit(4, 1), rand_vec(rng, 4));
        CHECK(is_zero(j.d_first));
        CHECK(is_zero(j.d_second));
        CHECK(is_zero(j.b_first));
        CHECK(is_zero(j.b_second));
    }
    SUBCASE("Killing connection on a constant curvature base") {
        for (auto [t, s] : {std::pair{0, 6}, std::pair{1, 5}}) {
            auto conj = conj_of(t, s, 1);
            REQUIRE(conj.delta0() * conj.delta1() == -1);
            auto f = FiberConfig::killing_sphere(conj, Cq(Rational(3, 2)));
            auto k = f.parallel_candidates();
            for (int trial = 0; trial < 2; ++trial) {
                QVec x = k[trial], y = k[trial + 3], z = add(k[6], k[1]);
                auto single = jacobi_summands(f, x, y, z);
                CHECK_FALSE(is_zero(single.d_first));  // individual summands are nonzero
                auto j = cyclic_jacobi(f, x, y, z);
                CHECK(is_zero(j.d_first));
                CHECK(is_zero(j.d_second));
                CHECK(is_zero(j.b_first));
                CHECK(is_zero(j.b_second));
                CHECK(bianchi_corollary_holds(f, x, y, z));
            }
        }
    }
    SUBCASE("su(3) isotropic connection") {
        auto f = su3_config();
        auto k = f.parallel_candidates();
        auto j = cyclic_jacobi(f, k[0], k[2], k[5]);
        CHECK(is_zero(j.d_first));
        CHECK(is_zero(j.d_second));
        CHECK(is_zero(j.b_first));
        CHECK(is_zero(j.b_second));
    }
}

TEST_CASE("first summands cancel for any Δ1-symmetric torsion") {
    std::mt19937_64 rng(5);
    for (auto [t, s, d0] : {std::tuple{0, 4, -1}, std::tuple{1, 3, -1}, std::tuple{0, 6, 1}}) {
        Bundle b(conj_of(t, s, d0));
        for (int trial = 0; trial < 3; ++trial) {
            auto T = random_delta1_torsion(rng, b);
            CHECK(torsion_has_delta1_symmetry(b, T));
            auto R = random_curvature(rng, b);
            QVec x = rand_vec(rng, b.dim()), y = rand_vec(rng, b.dim()), z = rand_vec(rng, b.dim());
            auto j = cyclic_first_summands(b, T, R, x, y, z);
            CHECK(is_zero(j.d_first));
            CHECK(is_zero(j.b_first));
        }
    }
}

TEST_CASE("Jacobi checks reject spinors outside the parallel kernel") {
    auto flatk = FiberConfig::flat(killing_connection(c06(), Cq(1)));
    CHECK(flatk.parallel_candidates().empty());
    CHECK_THROWS_AS(cyclic_jacobi(flatk, unit(8, 0), unit(8, 1), unit(8, 2)), std::invalid_argument);
    CHECK_THROWS_AS(flatness_check(flatk, unit(8, 0), 1), std::invalid_argument);
    // pointwise the second summands still cancel
    QVec x = unit(8, 0), y = unit(8, 1), z = add(unit(8, 2), unit(8, 5));
    auto s = jacobi_summands(flatk, x, y, z);
    for (const auto& t : {jacobi_summands(flatk, y, z, x), jacobi_summands(flatk, z, x, y)}) {
        s.d_second += t.d_second;
        s.b_second += t.b_second;
    }
    CHECK(is_zero(s.d_second));
    CHECK(is_zero(s.b_second));
}

TEST_CASE("Levi-Civita term in the Bianchi lemma") {
    // with R⁰_{κμνλ} = g(R⁰(e_κ,e_μ)e_λ, e_ν) the identity holds; the other index order fails
    for (int a : {1, 2}) {
        auto f = FiberConfig::killing_sphere(c06(), Cq(a));
        auto k = f.parallel_candidates();
        for (const auto& eta : k) {
            CHECK(bianchi_lemma_holds(f, eta));
            CHECK_FALSE(bianchi_lemma_holds_alt(f, eta));
        }
    }
    auto f = su3_config();
    for (const auto& eta : f.parallel_candidates()) {
        CHECK(bianchi_lemma_holds(f, eta));
        CHECK(bianchi_lemma_holds_alt(f, eta));  // R⁰ = 0
    }
    // flat base, admissible connection: holds pointwise for every spinor
    auto flatk = FiberConfig::flat(killing_connection(c06(), Cq(3)));
    for (std::size_t i = 0; i < 8; ++i) CHECK(bianchi_lemma_holds(flatk, unit(8, i)));
}

TEST_CASE("flatness and the differential criterion") {
    auto f = su3_config();
    QVec eta = complex_structure_spinor(c06().rep(), false);
    auto rep = flatness_check(f, eta, 11);
    CHECK(rep.strongly_torsion_free);
    CHECK(rep.d_zero);
    CHECK(rep.b_zero);
    CHECK(rep.flat());
    CHECK(rep.iota_squared_zero);

    // a parallel spinor of the same connection that is not annihilated by the torsion
    QVec other = complex_structure_spinor(c06().rep(), true);
    auto r2 = flatness_check(f, other, 12);
    CHECK_FALSE(r2.strongly_torsion_free);
    CHECK_FALSE(r2.flat());
    CHECK_FALSE(r2.iota_squared_zero);

    auto sphere = FiberConfig::killing_sphere(c06(), Cq(1));
    auto r3 = flatness_check(sphere, sphere.parallel_candidates()[0], 13);
    CHECK(r3.b_zero);
    CHECK_FALSE(r3.d_zero);
    CHECK_FALSE(r3.iota_squared_zero);
    // strongly torsion free implies torsion free
    for (const auto& r : {rep, r2, r3}) CHECK((!r.strongly_torsion_free || r.d_zero));
}

TEST_CASE("complex frame of a pure spinor") {
    for (auto [s, d0] : {std::pair{4, -1}, std::pair{6, 1}}) {
        auto conj = conj_of(0, s, d0);
        for (int w : {1, -1}) {
            auto fr = complex_frame(conj.rep(), w);
            const QVec& eta = fr.eta.spinor;
            for (const auto& nb : fr.eta.null_basis) CHECK(is_zero(nb.apply(eta)));
            for (std::size_t a = 0; a < fr.unbarred.size(); ++a) {
                CHECK_FALSE(is_zero(fr.unbarred[a].apply(eta)));
                for (std::size_t b = 0; b < fr.unbarred.size(); ++b)
                    CHECK(anticommutator(fr.unbarred[a], fr.unbarred[b]).is_zero());
            }
            for (int m = 0; m < s; ++m) {
                QVec lhs = conj.rep().gamma_up(m).apply(eta);
                QVec rhs(eta.size());
                for (std::size_t a = 0; a < fr.unbarred.size(); ++a)
                    rhs = axpy(fr.c[m][a], fr.unbarred[a].apply(eta), rhs);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("pure spinor criteria for the curvature and torsion terms") {
    for (auto [s, d0] : {std::pair{4, -1}, std::pair{6, 1}}) {
        auto conj = conj_of(0, s, d0);
        for (int w : {1, -1}) {
            auto rep = pure_spinor_check(conj, w, 100 + s + w, 20);
            CHECK(rep.b_equivalent);
            CHECK(rep.d_equivalent);
            REQUIRE(rep.b_samples.size() == 20);
            for (const auto& x : rep.b_samples) CHECK(x.direct_zero == !x.generic);
            for (const auto& x : rep.d_samples) CHECK(x.direct_zero == !x.generic);
        }
    }
    auto conj = conj_of(0, 4, -1);
    auto plus = pure_spinor_check(conj, 1, 7, 2);
    auto minus = pure_spinor_check(conj, -1, 7, 2);
    // ½εW = -wW: the wedge of a positive spinor is anti-self-dual, so it pairs to zero with Λ²_+
    CHECK(plus.b_zero_selfdual);
    CHECK_FALSE(plus.b_zero_antiselfdual);
    CHECK(minus.b_zero_antiselfdual);
    CHECK_FALSE(minus.b_zero_selfdual);
    CHECK(plus.t_zero_selfdual);
    CHECK(minus.t_zero_antiselfdual);
    CHECK_FALSE(minus.t_zero_selfdual);
    // *π1(T) = λπ3(T) on Λ²_+ ⊗ Λ¹ and -λ on Λ²_- ⊗ Λ¹
    CHECK(plus.dual_ratio_exact);
    CHECK(plus.dual_ratio_opposite);
    CHECK(plus.dual_ratio == Rational(3));
}
