#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spintorsion/fierz.hpp"

using namespace spt;

namespace {

std::shared_ptr<const GammaRep> rep_of(int t, int s) {
    return std::make_shared<const GammaRep>(Signature::make(t, s));
}

bool pure_by_all_degrees(const ChargeConjugation& conj, const QVec& eta) {
    int n = conj.rep().D() / 2;
    for (int k = 0; k <= conj.rep().D(); ++k)
        if (k != n && !project_ck(conj, eta, eta, k).is_zero()) return false;
    return true;
}

bool pure_relaxed(const ChargeConjugation& conj, const QVec& eta) {
    int n = conj.rep().D() / 2;
    for (int k = 0; k <= conj.rep().D(); ++k)
        if (k != n && (k - n) % 4 == 0 && !project_ck(conj, eta, eta, k).is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("projections have symmetry Δ_k and vanish on zero") {
    std::mt19937_64 rng(3);
    for (auto [t, s] : {std::pair{0, 4}, std::pair{1, 4}, std::pair{1, 5}}) {
        auto rep = rep_of(t, s);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            QVec phi = oracle::random_spinor(rng, rep->dim()), psi = oracle::random_spinor(rng, rep->dim());
            for (int k = 0; k <= rep->D(); ++k) {
                CHECK(project_ck(conj, psi, phi, k) == project_ck(conj, phi, psi, k).scaled(Cq(conj.delta(k))));
                CHECK(project_ck(conj, QVec(rep->dim()), psi, k).is_zero());
            }
            auto f = project_ck(conj, phi, psi, 2);
            CHECK(f.at({1, 0}) == -f.at({0, 1}));
            CHECK(f.at({1, 1}).is_zero());
        }
    }
}

TEST_CASE("supersymmetry bracket") {
    std::mt19937_64 rng(5);
    for (auto [t, s] : {std::pair{1, 3}, std::pair{0, 4}, std::pair{1, 9}}) {
        auto rep = rep_of(t, s);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            QVec phi = oracle::random_spinor(rng, rep->dim()), psi = oracle::random_spinor(rng, rep->dim());
            QVec a = susy_bracket(conj, phi, psi), b = susy_bracket(conj, psi, phi);
            CHECK((a == b) == (conj.delta1() == 1));
            Cq z = oracle::random_cq(rng);
            QVec zphi = phi;
            for (auto& x : zphi) x *= z;
            QVec za = a;
            for (auto& x : za) x *= z;
            CHECK(susy_bracket(conj, zphi, psi) == za);
        }
    }
}

TEST_CASE("Fierz reconstruction is exact and the trace map returns its coefficients") {
    std::mt19937_64 rng(17);
    for (int D = 2; D <= 7; ++D)
        for (int t = 0; t <= 1; ++t) {
            auto rep = rep_of(t, D - t);
            for (int d0 : realizable_delta0(*rep)) {
                auto conj = build_conjugation(rep, d0);
                for (int trial = 0; trial < 10; ++trial) {
                    QVec phi = oracle::random_spinor(rng, rep->dim()), psi = oracle::random_spinor(rng, rep->dim());
                    QMat r1 = rank_one(conj, phi, psi);
                    CHECK(fierz_expand(conj, phi, psi) == r1);
                    CHECK(trace_coefficients(*rep, r1) == fierz_coefficients(conj, phi, psi));
                    // rank-one map acts as ξ ↦ C(ψ,ξ)φ
                    QVec xi = oracle::random_spinor(rng, rep->dim());
                    QVec want = phi;
                    for (auto& x : want) x *= conj.pair(psi, xi);
                    CHECK(r1.apply(xi) == want);
                }
                // without the (-1)^n the sum is not the rank-one map
                QVec phi = oracle::random_spinor(rng, rep->dim()), psi = oracle::random_spinor(rng, rep->dim());
                if (rep->D() >= 2) CHECK(fierz_expand_literal(conj, phi, psi) != rank_one(conj, phi, psi));
            }
        }
    auto conj = build_conjugation(rep_of(0, 4), -1);
    CHECK(fierz_expand(conj, QVec(4), QVec(4)).is_zero());
    CHECK(fierz_top_degree(11) == 5);
    CHECK(fierz_top_degree(10) == 10);
}

TEST_CASE("pure spinors in four dimensions") {
    auto rep = rep_of(0, 4);
    for (int w : {1, -1}) {
        PureSpinor p = make_pure_spinor(*rep, w);
        CHECK(p.chirality == w);
        CHECK(rep->star().apply(p.spinor) == (w > 0 ? p.spinor : axpy(Cq(-2), p.spinor, p.spinor)));
        for (const auto& b : p.null_basis) CHECK(is_zero(b.apply(p.spinor)));
        CHECK(annihilator_dim(*rep, p.spinor) == 2);
        for (int d0 : realizable_delta0(*rep)) {
            auto conj = build_conjugation(rep, d0);
            CHECK(project_ck(conj, p.spinor, p.spinor, 0).is_zero());
            CHECK(project_ck(conj, p.spinor, p.spinor, 1).is_zero());
            CHECK(is_zero(susy_bracket(conj, p.spinor, p.spinor)));
            CHECK(pure_by_all_degrees(conj, p.spinor));
            CHECK(!project_ck(conj, p.spinor, p.spinor, 2).is_zero());
            CHECK(conj.delta(2) == 1);
        }
    }
    CHECK_THROWS_AS(make_pure_spinor(*rep_of(0, 5), 1), std::invalid_argument);
}

TEST_CASE("relaxed purity criterion agrees with the full one on chiral spinors") {
    std::mt19937_64 rng(23);
    for (int D : {4, 6, 8}) {
        auto rep = rep_of(0, D);
        auto conj = build_conjugation(rep, realizable_delta0(*rep).front());
        QMat st = rep->star().dense();
        for (int w : {1, -1}) {
            std::vector<QVec> basis;
            for (std::size_t i = 0; i < rep->dim(); ++i)
                if (st(i, i) == Cq(w)) {
                    QVec e(rep->dim());
                    e[i] = Cq(1);
                    basis.push_back(e);
                }
            REQUIRE(basis.size() == rep->dim() / 2);
            std::vector<QVec> samples = basis;
            for (int trial = 0; trial < 12; ++trial) {
                QVec v(rep->dim());
                std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
                for (int r = 0; r < 2; ++r) v = axpy(oracle::random_cq(rng, 2), basis[pick(rng)], v);
                samples.push_back(v);
            }
            samples.push_back(make_pure_spinor(*rep, w).spinor);
            int npure = 0;
            for (const auto& eta : samples) {
                bool full = pure_by_all_degrees(conj, eta);
                CHECK(full == pure_relaxed(conj, eta));
                if (full) {
                    ++npure;
                    if (!is_zero(eta)) CHECK(annihilator_dim(*rep, eta) == static_cast<std::size_t>(D / 2));
                }
            }
            CHECK(npure > 0);
        }
    }
}

TEST_CASE("top forms in complex coordinates and γ*") {
    for (int D : {4, 6, 8}) {
        auto rep = rep_of(0, D);
        int n = D / 2;
        QMat up = QMat::identity(rep->dim()), dn = QMat::identity(rep->dim());
        for (int a = 0; a < n; ++a) {
            up = up * (rep->dense(a) + rep->dense(a + n) * Cq::i());
            dn = dn * (rep->dense(a) - rep->dense(a + n) * Cq::i());
        }
        QMat st = rep->star().dense();
        // unbarred top form sits in the +1 eigenspace of γ* from the left
        CHECK(st * up == up);
        CHECK(up * st == up * Cq(n % 2 ? -1 : 1));
        CHECK(dn * st == dn);
    }
}

TEST_CASE("wedge of pure spinors: Fierz expressions and four-dimensional duality") {
    auto rep = rep_of(0, 4);
    for (int d0 : realizable_delta0(*rep)) {
        auto conj = build_conjugation(rep, d0);
        for (int w : {1, -1}) {
            auto rpt = wedge_selfdual_check(conj, make_pure_spinor(*rep, w));
            CHECK(!rpt.zero);
            CHECK(rpt.direct_matches_first);
            CHECK(rpt.direct_matches_second);
            CHECK(rpt.duality_ok);
            CHECK(rpt.is_self_dual == (w < 0));
            CHECK(rpt.is_anti_self_dual == (w > 0));
        }
        PureSpinor zero;
        zero.spinor = QVec(rep->dim());
        zero.chirality = 1;
        CHECK(wedge_selfdual_check(conj, zero).zero);
    }
    for (int D : {6, 8}) {
        auto r = rep_of(0, D);
        for (int d0 : realizable_delta0(*r)) {
            auto conj = build_conjugation(r, d0);
            for (int w : {1, -1}) {
                auto rpt = wedge_selfdual_check(conj, make_pure_spinor(*r, w));
                CHECK(rpt.direct_matches_first);
                CHECK(rpt.direct_matches_second);
            }
        }
    }
}
