#pragma once

#include <map>
#include <vector>

#include "spintorsion/conjugation.hpp"

namespace spt {

// Totally antisymmetric k-form stored on strictly increasing index sets.
struct KForm {
    int degree = 0;
    int D = 0;
    std::map<std::vector<int>, Cq> comp;

    // component for arbitrary index order (antisymmetric extension)
    Cq at(const std::vector<int>& idx) const;
    bool is_zero() const;
    KForm scaled(const Cq& s) const;
    friend bool operator==(const KForm& a, const KForm& b);
};

KForm project_ck(const ChargeConjugation& conj, const QVec& phi, const QVec& psi, int k);
// {φ,ψ}^μ = 2 g^{μμ} C(φ, γ_μ ψ)
QVec susy_bracket(const ChargeConjugation& conj, const QVec& phi, const QVec& psi);

// Coefficients of the Fierz sum as printed: Δ0(Δ0Δ1)^n C(φ,γ^I ψ) / dim S on sorted I
std::map<std::vector<int>, Cq> fierz_coefficients(const ChargeConjugation& conj, const QVec& phi,
                                                   const QVec& psi);
// Endomorphism Σ c_I (-1)^{|I|} γ_I; the (-1)^n restores the trace dual basis
// for the γγ = -g convention. Equals the rank-one map ξ ↦ C(ψ,ξ)φ.
QMat fierz_expand(const ChargeConjugation& conj, const QVec& phi, const QVec& psi);
// The same sum without the (-1)^n factor (kept to document the sign)
QMat fierz_expand_literal(const ChargeConjugation& conj, const QVec& phi, const QVec& psi);
// ξ ↦ C(ψ,ξ)φ as a matrix: φ ψᵀ C
QMat rank_one(const ChargeConjugation& conj, const QVec& phi, const QVec& psi);
// Ω ↦ 2^{-⌊D/2⌋} Σ (-)^{n(n-1)/2} tr(γ^I Ω) on sorted I, n ≤ ⟨D⟩
std::map<std::vector<int>, Cq> trace_coefficients(const GammaRep& rep, const QMat& omega);
// ⟨D⟩: D for even D, (D-1)/2 for odd D
int fierz_top_degree(int D);

struct PureSpinor {
    QVec spinor;
    std::vector<QMat> null_basis;  // γ^{ā} with γ^{ā}η = 0
    int chirality = 0;             // γ*η = w η
};

// Riemannian even D only.
PureSpinor make_pure_spinor(const GammaRep& rep, int chirality);
// dimension of {X ∈ T⊗ℂ : Xη = 0}
std::size_t annihilator_dim(const GammaRep& rep, const QVec& eta);

struct WedgeReport {
    bool direct_matches_first = false;   // first Fierz-derived expression
    bool direct_matches_second = false;  // second (duality-manipulated) expression
    bool duality_ok = true;              // D = 4 only: ½ε W^{..} = -w W
    bool is_self_dual = false;           // D = 4 only
    bool is_anti_self_dual = false;      // D = 4 only
    bool zero = false;
};
// W^{μν} = γ^{[μ}η ⊗ γ^{ν]}η mapped to End(S) by the rank-one identification
std::vector<std::vector<QMat>> wedge_array(const ChargeConjugation& conj, const QVec& eta);
WedgeReport wedge_selfdual_check(const ChargeConjugation& conj, const PureSpinor& eta);

}  // namespace spt
