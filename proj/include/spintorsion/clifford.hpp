#pragma once

#include <array>
#include <optional>
#include <vector>

#include "spintorsion/matrix.hpp"

namespace spt {

constexpr int kMaxDim = 12;

// Orthonormal-frame signature: labels 0..t-1 are timelike, t..D-1 spacelike.
struct Signature {
    int t = 0;
    int s = 0;

    static Signature make(int t, int s);  // validates 1 <= D <= 12
    int D() const { return t + s; }
    int g(int a) const { return a < t ? -1 : 1; }  // g_aa = g^aa
    bool operator==(const Signature&) const = default;
};

// Strictly increasing frame labels plus the sign picked up while sorting.
struct MultiIndex {
    std::vector<int> idx;
    int sign = 1;

    // nullopt if a label repeats (antisymmetric object vanishes)
    static std::optional<MultiIndex> canonical(std::vector<int> raw);
    int size() const { return static_cast<int>(idx.size()); }
};

int perm_sign(const std::vector<int>& p);  // sign of the sort; 0 on repeats
std::vector<std::vector<int>> subsets(int n, int k);
std::vector<int> complement(const std::vector<int>& idx, int n);
long long factorial(int n);

class GammaRep {
public:
    explicit GammaRep(Signature sig);

    const Signature& signature() const { return sig_; }
    int D() const { return sig_.D(); }
    std::size_t dim() const { return dim_; }

    const Mono& gamma(int a) const { return gam_[a]; }
    Mono gamma_up(int a) const { return sig_.g(a) < 0 ? gam_[a].times_phase(2) : gam_[a]; }
    const Mono& id() const { return id_; }

    // ordered products of lower / upper generators (any labels, repeats allowed)
    Mono product(const std::vector<int>& labels) const;
    Mono product_up(const std::vector<int>& labels) const;

    // γ^{[D]} = γ^0 γ^1 ... γ^{D-1}
    const Mono& volume() const { return vol_; }
    bool has_star() const { return D() % 2 == 0; }
    const Mono& star() const;

    QMat dense(int a) const { return gam_[a].dense(); }

private:
    Signature sig_;
    std::size_t dim_;
    std::vector<Mono> gam_;
    Mono id_, vol_, star_;
};

GammaRep build_gamma(Signature sig);

// γ_{μ1...μk} with weight-1/k! antisymmetrization; any order, repeats give zero.
QMat antisym_gamma(const GammaRep& rep, const std::vector<int>& lower);
QMat antisym_gamma_up(const GammaRep& rep, const std::vector<int>& upper);
// γ_{μ...}^{ν...} antisymmetrized over all slots jointly
QMat antisym_mixed(const GammaRep& rep, const std::vector<int>& lower, const std::vector<int>& upper);
// Monomial form for distinct increasing labels (the common fast path)
Mono antisym_mono(const GammaRep& rep, const MultiIndex& lower);
Mono antisym_mono_up(const GammaRep& rep, const MultiIndex& upper);

// Right-hand side of the contraction expansion of γ_{μ1..μk} γ^{ν1..νℓ}.
QMat product_expand(const GammaRep& rep, const std::vector<int>& lower, const std::vector<int>& upper);

// ε with all indices down: ε_{0..D-1} = (-1)^t
int epsilon_lower(const Signature& sig, const std::vector<int>& labels);

// Right-hand side of the Hodge-type duality for γ_{idx}
QMat duality_map(const GammaRep& rep, const std::vector<int>& lower);

struct PauliSet {
    std::array<QMat, 4> tau;
    std::array<std::array<int, 4>, 4> eps_ik{};
    std::array<int, 4> eps_k{};
};

PauliSet pauli_set();

}  // namespace spt
