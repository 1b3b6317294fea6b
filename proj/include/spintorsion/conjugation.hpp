#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spintorsion/clifford.hpp"

namespace spt {

// Requested symmetry is not realizable in this signature.
struct UnavailableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pairing C(φ,ψ) = φᵀ C ψ with measured symmetries Δ_k.
class ChargeConjugation {
public:
    ChargeConjugation(std::shared_ptr<const GammaRep> rep, QMat c);

    const GammaRep& rep() const { return *rep_; }
    std::shared_ptr<const GammaRep> rep_ptr() const { return rep_; }
    const QMat& c() const { return c_; }
    const QMat& c_inv() const { return cinv_; }
    int delta0() const { return delta_[0]; }
    int delta1() const { return delta_.size() > 1 ? delta_[1] : 0; }
    int delta(int k) const { return delta_.at(k); }
    const std::vector<int>& deltas() const { return delta_; }
    // Cγ_μ C⁻¹ = s γ_μᵀ
    int intertwiner_sign() const { return sign_; }

    Cq pair(const QVec& phi, const QVec& psi) const;

private:
    std::shared_ptr<const GammaRep> rep_;
    QMat c_, cinv_;
    std::vector<int> delta_;
    int sign_ = 0;
};

// All nonzero C with Cγ_μ = s γ_μᵀ C; empty if none. Exact, via propagation
// of the monomial relations through the n² unknowns.
std::vector<QMat> intertwiners(const GammaRep& rep, int s);

ChargeConjugation build_conjugation(std::shared_ptr<const GammaRep> rep, int delta0);
// Δ0 values that can be realized in this signature (sorted)
std::vector<int> realizable_delta0(const GammaRep& rep);

QMat adjoint(const ChargeConjugation& conj, const QMat& phi);
int delta_k(const ChargeConjugation& conj, int k);
int delta_formula(int delta0, int delta1, int k);

// Eigenvalue of γ^{(k)} under Φ ↦ Φ^C
struct AdjointSplit {
    std::vector<int> plus, minus;  // degrees
};
AdjointSplit adjoint_split(const ChargeConjugation& conj);

struct SymChirRow {
    int k;
    int delta;
    bool chiral;  // pairs opposite γ* eigenspaces
};
struct SymChirTable {
    std::vector<SymChirRow> rows;
    bool chiral;  // pairing of C itself (k = 0)
};
SymChirTable symmetry_chirality_table(const ChargeConjugation& conj);

// {k : Δ_k Δ_0 = -1}
std::vector<int> parallel_span_check(const ChargeConjugation& conj);

// Twisted pairing C ⊗ τ_i on S ⊕ S
struct TwistedConjugation {
    ChargeConjugation base;
    int twist;
    QMat c;  // kron(C, τ_i)
    int delta(int k) const;
};
TwistedConjugation twist_conjugation(const ChargeConjugation& conj, int i);
QMat adjoint(const TwistedConjugation& conj, const QMat& phi);

}  // namespace spt
