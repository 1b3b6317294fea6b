#pragma once

// Independent reference computations used by the tests. These deliberately
// avoid the library's monomial fast paths.

#include <algorithm>
#include <random>
#include <vector>

#include "spintorsion/clifford.hpp"

namespace oracle {

using spt::Cq;
using spt::QMat;

inline QMat dense_gamma(const spt::GammaRep& rep, int a) { return rep.gamma(a).dense(); }

inline QMat dense_gamma_up(const spt::GammaRep& rep, int a) {
    return dense_gamma(rep, a) * Cq(rep.signature().g(a));
}

inline QMat ordered_product(const std::vector<QMat>& ms, std::size_t n) {
    QMat r = QMat::identity(n);
    for (const auto& m : ms) r = r * m;
    return r;
}

// (1/k!) Σ_σ sgn σ γ_{σ(1)}...γ_{σ(k)}, by brute force over all permutations
inline QMat antisym_bruteforce(const std::vector<QMat>& gs, std::size_t n) {
    std::vector<int> p(gs.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
    QMat acc = QMat::zero(n, n);
    long long cnt = 0;
    do {
        std::vector<QMat> seq;
        for (int i : p) seq.push_back(gs[i]);
        acc += ordered_product(seq, n) * Cq(spt::perm_sign(p));
        ++cnt;
    } while (std::next_permutation(p.begin(), p.end()));
    return acc * Cq(spt::Rational(1, cnt));
}

// Independent Kronecker construction with plain dense Pauli matrices
inline std::vector<QMat> kron_gammas(int t, int s) {
    auto m2 = [](Cq a, Cq b, Cq c, Cq d) {
        QMat m(2, 2);
        m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
        return m;
    };
    const Cq I = Cq::i();
    QMat s1 = m2(0, 1, 1, 0), s2 = m2(0, -I, I, 0), s3 = m2(1, 0, 0, -1), id = QMat::identity(2);
    int D = t + s, n = D / 2;
    std::vector<QMat> e;
    for (int k = 0; k < n; ++k)
        for (const QMat* p : {&s1, &s2}) {
            QMat m = QMat::identity(1);
            for (int j = 0; j < n; ++j) m = spt::kron(m, j < k ? s3 : (j == k ? *p : id));
            e.push_back(m);
        }
    if (D % 2) {
        QMat m = QMat::identity(1);
        for (int j = 0; j < n; ++j) m = spt::kron(m, s3);
        e.push_back(m);
    }
    for (int a = t; a < D; ++a) e[a] = e[a] * I;
    return e;
}

inline Cq random_cq(std::mt19937_64& rng, int range = 3) {
    std::uniform_int_distribution<int> u(-range, range);
    return Cq(spt::Rational(u(rng)), spt::Rational(u(rng)));
}

inline spt::QVec random_spinor(std::mt19937_64& rng, std::size_t n, int range = 3) {
    spt::QVec v(n);
    for (auto& x : v) x = random_cq(rng, range);
    return v;
}

}  // namespace oracle
