#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spintorsion/conjugation.hpp"

using namespace spt;

namespace {

std::shared_ptr<const GammaRep> rep_of(int t, int s) {
    return std::make_shared<const GammaRep>(Signature::make(t, s));
}

// Exact nullspace of the stacked intertwiner system, row-major vec(C).
std::size_t kron_nullity(const GammaRep& rep, int s) {
    std::size_t n = rep.dim();
    QMat sys(rep.D() * n * n, n * n);
    for (int mu = 0; mu < rep.D(); ++mu) {
        QMat g = rep.dense(mu);
        QMat gt = g.transpose();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t row = mu * n * n + i * n + k;
                for (std::size_t j = 0; j < n; ++j) {
                    sys(row, i * n + j) += g(j, k);          // (Cγ)(i,k)
                    sys(row, j * n + k) -= gt(i, j) * Cq(s);  // s (γᵀC)(i,k)
                }
            }
    }
    return nullspace(sys).size();
}

}  // namespace

TEST_CASE("propagated intertwiners agree with the generic nullspace") {
    for (int D = 1; D <= 6; ++D)
        for (int t = 0; t <= 1 && t <= D; ++t) {
            auto rep = rep_of(t, D - t);
            for (int s : {1, -1}) CHECK(intertwiners(*rep, s).size() == kron_nullity(*rep, s));
        }
}

TEST_CASE("measured symmetries follow the recursion and the closed formula") {
    for (int D = 1; D <= 11; ++D)
        for (int t = 0; t <= 1 && t <= D; ++t) {
            auto rep = rep_of(t, D - t);
            auto realizable = realizable_delta0(*rep);
            CHECK(!realizable.empty());
            for (int d0 : realizable) {
                auto conj = build_conjugation(rep, d0);
                CHECK(conj.delta0() == d0);
                CHECK(conj.c().transpose() == conj.c() * Cq(d0));
                CHECK(conj.c() * conj.c_inv() == QMat::identity(rep->dim()));
                for (int mu = 0; mu < D; ++mu) {
                    QMat cg = conj.c() * rep->dense(mu);
                    CHECK(cg.transpose() == cg * Cq(conj.delta1()));
                }
                for (int k = 0; k <= D; ++k) {
                    if (k >= 2) CHECK(conj.delta(k) == -conj.delta(k - 2));
                    CHECK(conj.delta(k) == delta_formula(conj.delta0(), conj.delta1(), k));
                }
            }
        }
}

TEST_CASE("odd dimension realizes a single Δ0 and reports the other as unavailable") {
    auto rep = rep_of(0, 3);
    auto r = realizable_delta0(*rep);
    REQUIRE(r.size() == 1);
    int missing = -r.front();
    CHECK_THROWS_AS(build_conjugation(rep, missing), UnavailableError);
    try {
        build_conjugation(rep, missing);
    } catch (const UnavailableError& e) {
        CHECK(std::string(e.what()).find("realizable") != std::string::npos);
    }
}

TEST_CASE("eleven dimensions: adjoint eigenspaces") {
    auto rep = rep_of(1, 10);
    auto conj = build_conjugation(rep, -1);
    CHECK(conj.delta1() == 1);
    auto split = adjoint_split(conj);
    for (int k : split.minus) CHECK((k % 4 == 1 || k % 4 == 2));
    for (int k : split.plus) CHECK((k % 4 == 0 || k % 4 == 3));
    CHECK(split.minus == std::vector<int>{1, 2, 5, 6, 9, 10});
    CHECK(parallel_span_check(conj) == std::vector<int>{1, 2, 5, 6, 9, 10});
    // a 3-form plus 5-form connection is not in this span
    auto span = parallel_span_check(conj);
    CHECK(std::find(span.begin(), span.end(), 3) == span.end());
    CHECK(std::find(span.begin(), span.end(), 5) != span.end());
}

TEST_CASE("ten-dimensional Lorentzian: both choices give Δ1 = +1") {
    auto rep = rep_of(1, 9);
    for (int d0 : {1, -1}) CHECK(build_conjugation(rep, d0).delta1() == 1);
}

TEST_CASE("parallel span matches the mod-4 description") {
    for (int D = 2; D <= 11; ++D)
        for (int t = 0; t <= 1; ++t) {
            auto rep = rep_of(t, D - t);
            for (int d0 : realizable_delta0(*rep)) {
                auto conj = build_conjugation(rep, d0);
                std::vector<int> want;
                int r = (((-conj.delta0() * conj.delta1()) % 4) + 4) % 4;
                for (int k = 0; k <= D; ++k)
                    if (k % 4 == 2 || k % 4 == r) want.push_back(k);
                CHECK(parallel_span_check(conj) == want);
                auto span = parallel_span_check(conj);
                CHECK(std::find(span.begin(), span.end(), 2) != span.end());
            }
        }
}

TEST_CASE("Euclidean even dimension: Δ_k against Δ_{2n-k} and the chirality table") {
    for (int n = 1; n <= 5; ++n) {
        auto rep = rep_of(0, 2 * n);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            for (int k = 0; k <= 2 * n; ++k)
                CHECK(conj.delta(k) == (((n + k) % 2) ? -1 : 1) * conj.delta(2 * n - k));
            auto table = symmetry_chirality_table(conj);
            bool want_chiral = (2 * n) % 8 == 2 || (2 * n) % 8 == 6;
            CHECK(table.chiral == want_chiral);
            for (const auto& row : table.rows)
                CHECK(row.chiral == (want_chiral != (row.k % 2 == 1)));
            CHECK(conj.delta(n) == 1);
        }
    }
    auto rep8 = rep_of(0, 8);
    for (int d0 : realizable_delta0(*rep8)) {
        auto conj = build_conjugation(rep8, d0);
        for (int m = 0; 2 * m <= 8; ++m) CHECK(conj.delta(2 * m) == (m % 2 ? -1 : 1));
    }
    CHECK_THROWS_AS(symmetry_chirality_table(build_conjugation(rep_of(0, 3), realizable_delta0(*rep_of(0, 3))[0])),
                    std::invalid_argument);
}

TEST_CASE("adjoint: identity, generators, involution, antihomomorphism") {
    std::mt19937_64 rng(11);
    for (auto [t, s] : {std::pair{1, 3}, std::pair{0, 5}, std::pair{1, 10}}) {
        auto rep = rep_of(t, s);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            std::size_t n = rep->dim();
            CHECK(adjoint(conj, QMat::identity(n)) == QMat::identity(n));
            for (int mu = 0; mu < rep->D(); ++mu)
                CHECK(adjoint(conj, rep->dense(mu)) == rep->dense(mu) * Cq(conj.delta0() * conj.delta1()));
            QMat a(n, n), b(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if ((i + 2 * j) % 5 == 0) a(i, j) = oracle::random_cq(rng);
                    if ((3 * i + j) % 7 == 0) b(i, j) = oracle::random_cq(rng);
                }
            CHECK(adjoint(conj, adjoint(conj, a)) == a);
            CHECK(adjoint(conj, a * b) == adjoint(conj, b) * adjoint(conj, a));
            // C(Φ^C η, ξ) = C(η, Φ ξ)
            QVec eta = oracle::random_spinor(rng, n), xi = oracle::random_spinor(rng, n);
            CHECK(conj.pair(adjoint(conj, a).apply(eta), xi) == conj.pair(eta, a.apply(xi)));
            for (int k = 0; k <= rep->D(); ++k) {
                std::vector<int> I(k);
                for (int q = 0; q < k; ++q) I[q] = q;
                QMat g = antisym_gamma(*rep, I);
                CHECK(adjoint(conj, g) == g * Cq(conj.delta0() * conj.delta(k)));
            }
        }
    }
    auto conj = build_conjugation(rep_of(0, 4), -1);
    CHECK_THROWS_AS(adjoint(conj, QMat::identity(2)), std::invalid_argument);
}

TEST_CASE("twisted pairing flips symmetries by ε_i") {
    auto rep = rep_of(1, 9);
    auto conj = build_conjugation(rep, -1);
    for (int i = 0; i < 4; ++i) {
        auto tw = twist_conjugation(conj, i);
        for (int k = 0; k <= rep->D(); ++k) {
            std::vector<int> I(k);
            for (int q = 0; q < k; ++q) I[q] = q;
            QMat m = tw.c * kron(antisym_gamma(*rep, I), QMat::identity(2));
            CHECK(m.transpose() == m * Cq(tw.delta(k)));
        }
    }
    CHECK(twist_conjugation(conj, 2).delta(1) == -conj.delta1());
    CHECK(twist_conjugation(conj, 1).delta(1) == conj.delta1());
}
