#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spintorsion/clifford.hpp"

using namespace spt;

namespace {

std::vector<Signature> small_signatures(int maxD) {
    std::vector<Signature> out;
    for (int D = 1; D <= maxD; ++D)
        for (int t = 0; t <= 1 && t <= D; ++t) out.push_back(Signature::make(t, D - t));
    return out;
}

}  // namespace

TEST_CASE("gamma generators satisfy the Clifford relation exactly") {
    for (const auto& sig : small_signatures(11)) {
        GammaRep rep = build_gamma(sig);
        CHECK(rep.dim() == (std::size_t(1) << (sig.D() / 2)));
        for (int a = 0; a < sig.D(); ++a)
            for (int b = a; b < sig.D(); ++b) {
                QMat ac = anticommutator(rep.dense(a), rep.dense(b));
                QMat want = QMat::identity(rep.dim()) * Cq(a == b ? -2 * sig.g(a) : 0);
                CHECK(ac == want);
            }
    }
}

TEST_CASE("gamma construction agrees with plain Kronecker products") {
    for (const auto& sig : small_signatures(8)) {
        GammaRep rep = build_gamma(sig);
        auto ref = oracle::kron_gammas(sig.t, sig.s);
        for (int a = 0; a < sig.D(); ++a) CHECK(rep.dense(a) == ref[a]);
    }
}

TEST_CASE("two-dimensional Euclidean generators") {
    GammaRep rep = build_gamma(Signature::make(0, 2));
    CHECK(rep.dim() == 2);
    QMat id = QMat::identity(2);
    CHECK(rep.dense(0) * rep.dense(0) == -id);
    CHECK(rep.dense(1) * rep.dense(1) == -id);
    CHECK(rep.dense(0) * rep.dense(1) == -(rep.dense(1) * rep.dense(0)));
}

TEST_CASE("dimension bounds") {
    CHECK_THROWS_AS(Signature::make(0, 13), std::out_of_range);
    CHECK_THROWS_AS(Signature::make(0, 0), std::out_of_range);
    CHECK(build_gamma(Signature::make(1, 10)).dim() == 32);
    CHECK(build_gamma(Signature::make(0, 12)).dim() == 64);
}

TEST_CASE("gamma star squares to one and grades the algebra") {
    for (const auto& sig : small_signatures(10)) {
        if (sig.D() % 2) continue;
        GammaRep rep = build_gamma(sig);
        QMat st = rep.star().dense();
        CHECK(st * st == QMat::identity(rep.dim()));
        for (int k = 0; k <= sig.D(); ++k)
            for (const auto& I : subsets(sig.D(), k)) {
                QMat g = antisym_gamma(rep, I);
                CHECK(st * g == g * st * Cq(k % 2 ? -1 : 1));
                if (k >= 2) break;  // one representative per degree keeps this fast
            }
    }
    // explicit D=4 check against the direct product of all generators
    GammaRep rep = build_gamma(Signature::make(0, 4));
    QMat vol = oracle::ordered_product({rep.dense(0), rep.dense(1), rep.dense(2), rep.dense(3)}, 4);
    CHECK(vol * vol == QMat::identity(4));
    CHECK(rep.star().dense() == vol);
}

TEST_CASE("volume element square follows the sign rule") {
    for (const auto& sig : small_signatures(11)) {
        GammaRep rep = build_gamma(sig);
        int D = sig.D();
        int e = (D * (D + 1)) / 2 + sig.t;
        QMat v = rep.volume().dense();
        CHECK(v * v == QMat::identity(rep.dim()) * Cq(e % 2 ? -1 : 1));
    }
}

TEST_CASE("antisymmetrized products match the brute-force average") {
    std::mt19937_64 rng(7);
    for (const auto& sig : small_signatures(5)) {
        GammaRep rep = build_gamma(sig);
        int D = sig.D();
        for (int k = 0; k <= std::min(D, 4); ++k)
            for (const auto& I : subsets(D, k)) {
                std::vector<int> idx = I;
                std::shuffle(idx.begin(), idx.end(), rng);
                std::vector<QMat> gs;
                for (int a : idx) gs.push_back(rep.dense(a));
                CHECK(antisym_gamma(rep, idx) == oracle::antisym_bruteforce(gs, rep.dim()));
            }
    }
}

TEST_CASE("two-index product is the half commutator and repeats vanish") {
    GammaRep rep = build_gamma(Signature::make(1, 3));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            QMat want = commutator(rep.dense(a), rep.dense(b)) * Cq(Rational(1, 2));
            CHECK(antisym_gamma(rep, {a, b}) == want);
        }
    CHECK(antisym_gamma(rep, {2, 2}).is_zero());
    CHECK(antisym_gamma(rep, {0, 1, 0}).is_zero());
    // repeated labels through the brute-force oracle as well
    QMat bf = oracle::antisym_bruteforce({rep.dense(1), rep.dense(1)}, rep.dim());
    CHECK(bf.is_zero());
}

TEST_CASE("multi index canonicalization") {
    auto m = MultiIndex::canonical({3, 1, 2});
    REQUIRE(m.has_value());
    CHECK(m->idx == std::vector<int>{1, 2, 3});
    CHECK(m->sign == 1);
    auto m2 = MultiIndex::canonical({2, 1});
    CHECK(m2->sign == -1);
    CHECK(!MultiIndex::canonical({1, 1}).has_value());
    GammaRep rep = build_gamma(Signature::make(0, 4));
    CHECK(antisym_mono(rep, *m2).dense() == antisym_gamma(rep, {2, 1}));
}

TEST_CASE("contraction expansion equals the direct product") {
    for (const auto& sig : small_signatures(4)) {
        GammaRep rep = build_gamma(sig);
        int D = sig.D();
        for (int k = 0; k <= D; ++k)
            for (int l = 0; k + l <= D; ++l)
                for (const auto& I : subsets(D, k))
                    for (const auto& J : subsets(D, l)) {
                        QMat direct = antisym_gamma(rep, I) * antisym_gamma_up(rep, J);
                        CHECK(product_expand(rep, I, J) == direct);
                    }
    }
    GammaRep rep = build_gamma(Signature::make(1, 3));
    // single contraction: γ_μ γ^μ = -g_μμ g^μμ Id = -Id
    CHECK(product_expand(rep, {2}, {2}) == -QMat::identity(4));
    // disjoint: pure m = 0 term
    CHECK(product_expand(rep, {0, 1}, {3}) == antisym_mixed(rep, {0, 1}, {3}));
    // one shared index in D = 4
    CHECK(product_expand(rep, {0, 2}, {2, 3}) == antisym_gamma(rep, {0, 2}) * antisym_gamma_up(rep, {2, 3}));
}

TEST_CASE("duality map reproduces every antisymmetrized product") {
    for (const auto& sig : small_signatures(6)) {
        GammaRep rep = build_gamma(sig);
        for (int k = 0; k <= sig.D(); ++k)
            for (const auto& I : subsets(sig.D(), k)) CHECK(duality_map(rep, I) == antisym_gamma(rep, I));
    }
    GammaRep rep = build_gamma(Signature::make(0, 4));
    CHECK(duality_map(rep, {}) == QMat::identity(4));
    CHECK(duality_map(rep, {1, 0}) == antisym_gamma(rep, {1, 0}));
}

TEST_CASE("Pauli set sign tables") {
    PauliSet p = pauli_set();
    const int eik[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    const int ek[4] = {1, 1, -1, 1};
    for (int i = 0; i < 4; ++i) {
        CHECK(p.eps_k[i] == ek[i]);
        CHECK(p.tau[i].transpose() == p.tau[i] * Cq(p.eps_k[i]));
        for (int k = 0; k < 4; ++k) {
            CHECK(p.eps_ik[i][k] == eik[i][k]);
            CHECK(p.tau[i] * p.tau[k] == p.tau[k] * p.tau[i] * Cq(p.eps_ik[i][k]));
        }
    }
    CHECK(p.tau[2] * p.tau[2] == -QMat::identity(2));
    CHECK(p.eps_ik[1][3] == -1);
    CHECK(p.eps_k[2] == -1);
}
