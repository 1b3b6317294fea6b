#include "spintorsion/clifford.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spt {

Signature Signature::make(int t, int s) {
    if (t < 0 || s < 0 || t + s < 1 || t + s > kMaxDim)
        throw std::out_of_range("signature (" + std::to_string(t) + "," + std::to_string(s) +
                                ") outside supported range 1 <= D <= " + std::to_string(kMaxDim));
    return Signature{t, s};
}

int perm_sign(const std::vector<int>& p) {
    int sgn = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (p[i] == p[j]) return 0;
            if (p[i] > p[j]) sgn = -sgn;
        }
    return sgn;
}

std::optional<MultiIndex> MultiIndex::canonical(std::vector<int> raw) {
    int sgn = perm_sign(raw);
    if (sgn == 0) return std::nullopt;
    std::sort(raw.begin(), raw.end());
    return MultiIndex{std::move(raw), sgn};
}

std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

std::vector<int> complement(const std::vector<int>& idx, int n) {
    std::vector<int> out;
    for (int a = 0; a < n; ++a)
        if (std::find(idx.begin(), idx.end(), a) == idx.end()) out.push_back(a);
    return out;
}

long long factorial(int n) {
    long long f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

namespace {

Mono pauli_mono(int which) {
    Mono m;
    switch (which) {
        case 0: return Mono::identity(2);
        case 1: m.col = {1, 0}; m.ph = {0, 0}; break;  // σ1
        case 2: m.col = {1, 0}; m.ph = {3, 1}; break;  // σ2
        default: m.col = {0, 1}; m.ph = {0, 2}; break; // σ3
    }
    return m;
}

Mono kron_mono(const Mono& a, const Mono& b) {
    Mono m;
    std::size_t nb = b.dim();
    m.col.resize(a.dim() * nb);
    m.ph.resize(a.dim() * nb);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < nb; ++k) {
            m.col[i * nb + k] = static_cast<int>(a.col[i] * nb + b.col[k]);
            m.ph[i * nb + k] = static_cast<unsigned char>((a.ph[i] + b.ph[k]) % 4);
        }
    return m;
}

}  // namespace

GammaRep::GammaRep(Signature sig) : sig_(Signature::make(sig.t, sig.s)) {
    const int D = sig_.D();
    const int n = D / 2;
    dim_ = std::size_t(1) << n;
    // Euclidean generators e_a with e_a e_b + e_b e_a = 2 δ_ab
    std::vector<Mono> e;
    for (int k = 0; k < n; ++k)
        for (int p : {1, 2}) {
            Mono m = Mono::identity(1);
            for (int j = 0; j < n; ++j) m = kron_mono(m, pauli_mono(j < k ? 3 : (j == k ? p : 0)));
            e.push_back(m);
        }
    if (D % 2) {
        Mono m = Mono::identity(1);
        for (int j = 0; j < n; ++j) m = kron_mono(m, pauli_mono(3));
        e.push_back(m);
    }
    // timelike squares to +1, spacelike to -1
    for (int a = 0; a < D; ++a) gam_.push_back(a < sig_.t ? e[a] : e[a].times_phase(1));
    id_ = Mono::identity(dim_);
    vol_ = id_;
    for (int a = 0; a < D; ++a) vol_ = vol_ * gamma_up(a);
    if (D % 2 == 0) star_ = ((n - sig_.t) % 2 == 0) ? vol_ : vol_.times_phase(1);
}

const Mono& GammaRep::star() const {
    if (!has_star()) throw std::logic_error("γ* exists only in even dimension");
    return star_;
}

Mono GammaRep::product(const std::vector<int>& labels) const {
    Mono m = id_;
    for (int a : labels) m = m * gam_.at(a);
    return m;
}

Mono GammaRep::product_up(const std::vector<int>& labels) const {
    Mono m = id_;
    for (int a : labels) m = m * gamma_up(a);
    return m;
}

GammaRep build_gamma(Signature sig) { return GammaRep(sig); }

Mono antisym_mono(const GammaRep& rep, const MultiIndex& lower) {
    Mono m = rep.product(lower.idx);
    return lower.sign < 0 ? m.times_phase(2) : m;
}

Mono antisym_mono_up(const GammaRep& rep, const MultiIndex& upper) {
    Mono m = rep.product_up(upper.idx);
    return upper.sign < 0 ? m.times_phase(2) : m;
}

QMat antisym_mixed(const GammaRep& rep, const std::vector<int>& lower, const std::vector<int>& upper) {
    std::vector<int> all = lower;
    all.insert(all.end(), upper.begin(), upper.end());
    if (perm_sign(all) == 0) return QMat::zero(rep.dim(), rep.dim());
    // distinct labels anticommute, so the antisymmetrization is the ordered product
    return (rep.product(lower) * rep.product_up(upper)).dense();
}

QMat antisym_gamma(const GammaRep& rep, const std::vector<int>& lower) {
    return antisym_mixed(rep, lower, {});
}

QMat antisym_gamma_up(const GammaRep& rep, const std::vector<int>& upper) {
    return antisym_mixed(rep, {}, upper);
}

QMat product_expand(const GammaRep& rep, const std::vector<int>& mu, const std::vector<int>& nu) {
    const int k = static_cast<int>(mu.size());
    const int l = static_cast<int>(nu.size());
    QMat acc = QMat::zero(rep.dim(), rep.dim());
    for (int m = 0; m <= std::min(k, l); ++m) {
        // (-)^{m(m-2k-1)/2}; the combinatorial prefactor cancels the 1/(k! l!) of the
        // two antisymmetrizations up to the sum over distinct contraction patterns
        const int ph = (m * (m - 2 * k - 1)) / 2;
        const int base_sign = (((ph % 2) + 2) % 2) ? -1 : 1;
        for (const auto& P : subsets(k, m)) {
            std::vector<int> restP = complement(P, k);
            std::vector<int> orderP = P;
            orderP.insert(orderP.end(), restP.begin(), restP.end());
            const int sP = perm_sign(orderP);
            // injective maps a ↦ pi[a] onto matching labels of ν; equivalent to running
            // over every m-subset Q of ν and every ordering of Q, minus the dead branches
            std::vector<int> pi(m);
            std::vector<char> used(l, 0);
            std::function<void(int)> assign = [&](int a) {
                if (a == m) {
                    std::vector<int> orderQ = pi, up, lo;
                    for (int b = 0; b < l; ++b)
                        if (!used[b]) {
                            orderQ.push_back(b);
                            up.push_back(nu[b]);
                        }
                    const int sQ = perm_sign(orderQ);
                    for (int x : restP) lo.push_back(mu[x]);
                    QMat term = antisym_mixed(rep, lo, up);
                    if (!term.is_zero()) acc += term * Cq(base_sign * sP * sQ);
                    return;
                }
                for (int b = 0; b < l; ++b)
                    if (!used[b] && nu[b] == mu[P[a]]) {
                        used[b] = 1;
                        pi[a] = b;
                        assign(a + 1);
                        used[b] = 0;
                    }
            };
            assign(0);
        }
    }
    return acc;
}

int epsilon_lower(const Signature& sig, const std::vector<int>& labels) {
    int s = perm_sign(labels);
    return (sig.t % 2) ? -s : s;
}

QMat duality_map(const GammaRep& rep, const std::vector<int>& lower) {
    const int D = rep.D();
    const int k = static_cast<int>(lower.size());
    if (perm_sign(lower) == 0) return QMat::zero(rep.dim(), rep.dim());
    // the sum over orderings of the complement gives (D-k)! equal terms
    std::vector<int> comp = complement(lower, D);
    std::vector<int> full = lower;
    full.insert(full.end(), comp.begin(), comp.end());
    int ph = (k * (k + 1)) / 2 + (D * (D + 1)) / 2;
    int sgn = (ph % 2 ? -1 : 1) * epsilon_lower(rep.signature(), full);
    Mono m = rep.product_up(comp) * rep.volume();
    return m.dense() * Cq(sgn);
}

PauliSet pauli_set() {
    PauliSet p;
    auto mk = [](int a, int b, int c, int d) {
        QMat m(2, 2);
        m(0, 0) = Cq(a); m(0, 1) = Cq(b); m(1, 0) = Cq(c); m(1, 1) = Cq(d);
        return m;
    };
    p.tau = {mk(1, 0, 0, 1), mk(0, 1, 1, 0), mk(0, 1, -1, 0), mk(1, 0, 0, -1)};
    for (int i = 0; i < 4; ++i) {
        p.eps_k[i] = p.tau[i].transpose() == p.tau[i] ? 1 : -1;
        for (int k = 0; k < 4; ++k)
            p.eps_ik[i][k] = p.tau[i] * p.tau[k] == p.tau[k] * p.tau[i] ? 1 : -1;
    }
    return p;
}

}  // namespace spt
