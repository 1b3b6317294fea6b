#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "spintorsion/connection.hpp"

namespace spt {

// Exterior algebra Λ(S) on n ≤ 8 generators θ_0..θ_{n-1}, keyed by bitmask.
inline constexpr int kExteriorCap = 8;

class ExteriorElement {
public:
    ExteriorElement() = default;
    explicit ExteriorElement(int n);  // throws above the cap
    static ExteriorElement one(int n);
    static ExteriorElement basis(int n, std::uint32_t mask);
    // grade-one element Σ v_i θ_i
    static ExteriorElement vector(const QVec& v);

    int generators() const { return n_; }
    const std::map<std::uint32_t, Cq>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Cq coefficient(std::uint32_t mask) const;
    ExteriorElement grade_part(int k) const;

    void add(std::uint32_t mask, const Cq& c);
    ExteriorElement& operator+=(const ExteriorElement& o);
    ExteriorElement& operator-=(const ExteriorElement& o);
    ExteriorElement& operator*=(const Cq& s);
    friend ExteriorElement operator+(ExteriorElement a, const ExteriorElement& b) { return a += b; }
    friend ExteriorElement operator-(ExteriorElement a, const ExteriorElement& b) { return a -= b; }
    friend ExteriorElement operator*(ExteriorElement a, const Cq& s) { return a *= s; }
    friend bool operator==(const ExteriorElement& a, const ExteriorElement& b) { return a.t_ == b.t_; }

private:
    int n_ = 0;
    std::map<std::uint32_t, Cq> t_;
};

ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b);
ExteriorElement wedge(const QVec& a, const ExteriorElement& b);
// M extended to Λ(S) as an even derivation, M θ_j = Σ_i M_{ij} θ_i
ExteriorElement derivation(const QMat& m, const ExteriorElement& a);
// j(φ): odd derivation of degree -1 with j(φ)θ = C(φ, θ)
ExteriorElement contraction(const Bundle& b, const QVec& phi, const ExteriorElement& a);
// sign of θ_I ∧ θ_J (0 when they overlap)
int wedge_sign(std::uint32_t I, std::uint32_t J);

// Λ(S) ⊗ End(S), the End slot kept abstract
using BTerm = std::map<std::uint32_t, QMat>;
// Σ_ν c[ν] ⊗ D^ν (upper index)
using DTerm = std::vector<ExteriorElement>;

bool is_zero(const BTerm& b);
bool is_zero(const DTerm& d);
BTerm& operator+=(BTerm& a, const BTerm& b);
DTerm& operator+=(DTerm& a, const DTerm& b);
// e ⊗ M
BTerm tensor(const ExteriorElement& e, const QMat& m);

// Fiber data of a connection at a point, in a synchronous orthonormal frame.
// The Levi-Civita spinor curvature enters through R⁰; the frame and first
// derivatives of ω vanish at the point. All fields are covariantly constant
// except through A, so D̂_κΦ = ad^C_{A_κ}Φ and D_κR = [A_κ, R] there.
struct FiberConfig {
    Bundle bundle;
    std::vector<QMat> a;  // A_μ
    EndArray r0;          // spinor curvature of the Levi-Civita connection

    static FiberConfig flat(const SpinorConnection& conn);
    // A_μ = aγ_μ on a space of constant curvature with R⁰_{μν} = -2a²γ_{μν}
    static FiberConfig killing_sphere(const ChargeConjugation& conj, const Cq& a);

    int D() const { return bundle.D(); }
    std::vector<QMat> a_c() const;
    EndArray curvature() const;    // R⁰ + [A_μ, A_ν]
    EndArray curvature_c() const;  // R⁰ + [A^C_μ, A^C_ν]
    EndArray torsion() const;
    EndArray hat_d_gamma() const;             // [κ][ν]
    QMat hat_d(int kappa, const QMat& x) const;  // ad^C_{A_κ} x
    QMat d_curv(int kappa, int mu, int nu) const;  // (D_κR)_{μν}
    // R⁰_{κμνλ}γ^λ with R⁰_{κμνλ} = g(R⁰(e_κ,e_μ)e_λ, e_ν); equals -[R⁰_{κμ}, γ_ν]
    QMat r0_gamma(int kappa, int mu, int nu) const;
    // {η : R^C_{μν}η = 0 for all μ, ν}
    std::vector<QVec> parallel_candidates() const;
};

// 𝔅(R;φ,ψ) = Σ γ^μφ ∧ γ^νψ ⊗ R_{μν}
BTerm b_term(const FiberConfig& f, const QVec& phi, const QVec& psi);
// 𝔇(T;φ,ψ) = Σ (γ^μφ ∧ T_{μν}ψ + γ^μψ ∧ T_{μν}φ) ⊗ D^ν
DTerm d_term(const FiberConfig& f, const QVec& phi, const QVec& psi);

// The two cyclic sums (coefficient of D^ν, and Λ³ ⊗ End).
// Each summand is built term by term; first and second pieces are kept separate.
struct JacobiSummands {
    DTerm d_first, d_second;
    BTerm b_first, b_second;
};
JacobiSummands jacobi_summands(const FiberConfig& f, const QVec& phi, const QVec& eta, const QVec& xi);
// throws unless the three spinors are killed by R^C and by the symmetric part of D̂γ
JacobiSummands cyclic_jacobi(const FiberConfig& f, const QVec& phi, const QVec& eta, const QVec& xi);
// first summands only, for arbitrary T and R (d_second and b_second stay empty)
JacobiSummands first_summands(const Bundle& b, const EndArray& T, const EndArray& R, const QVec& phi,
                              const QVec& eta, const QVec& xi);
JacobiSummands cyclic_first_summands(const Bundle& b, const EndArray& T, const EndArray& R, const QVec& phi,
                                     const QVec& eta, const QVec& xi);
// antisymmetric in μν with C(η, T_{μν}ξ) = Δ1 C(ξ, T_{μν}η)
EndArray random_delta1_torsion(std::mt19937_64& rng, const Bundle& b);
EndArray random_curvature(std::mt19937_64& rng, const Bundle& b);
bool in_parallel_kernel(const FiberConfig& f, const QVec& eta);
bool admissible_on(const FiberConfig& f, const QVec& eta);

// (D̂_{[κ}T_{μ]ν} - ad^C_{R_{κμ}}γ_ν - R⁰_{κμνλ}γ^λ)η for all κ, μ, ν
bool bianchi_lemma_holds(const FiberConfig& f, const QVec& eta);
// same with the other index convention for R⁰, +[R⁰_{κμ}, γ_ν]
bool bianchi_lemma_holds_alt(const FiberConfig& f, const QVec& eta);
// cycl{(D̂_{[κ}T_{μ]ν} - ad^C_{R_{κμ}}γ_ν)ξ ∧ γ^κφ ∧ γ^μη} = 0 for every ν
bool bianchi_corollary_holds(const FiberConfig& f, const QVec& phi, const QVec& eta, const QVec& xi);

// Jets at the point -------------------------------------------------------

// Value and partial derivatives of a Λ(S)-valued field in the synchronous frame.
struct Jet {
    ExteriorElement v;
    std::vector<ExteriorElement> d;                // ∂_μ
    std::vector<std::vector<ExteriorElement>> dd;  // ∂_μ∂_ν, symmetric
    int order() const { return dd.empty() ? (d.empty() ? 0 : 1) : 2; }
};
// spinor field φ with D^Cφ = 0 at the point: ∂_μφ = A^C_μφ
struct SpinorJet {
    QVec v;
    std::vector<QVec> d;
};
SpinorJet parallel_spinor_jet(const FiberConfig& f, const QVec& eta);
Jet random_jet(std::mt19937_64& rng, int n, int D, int order, int grade_max = 3, int range = 2);

// D_μF, one order lower (uses ∂_λω_μ = ½R⁰_{λμ})
Jet covariant(const FiberConfig& f, int mu, const Jet& F);
// ı(φ)F = Σ γ^νφ ∧ D_νF, one order lower
Jet iota(const FiberConfig& f, const SpinorJet& phi, const Jet& F);
// j(φ)F with φ carrying a 1-jet
Jet contract(const Bundle& b, const SpinorJet& phi, const Jet& F);
// Φ·F for a constant endomorphism
Jet act(const QMat& phi, const Jet& F);
Jet operator-(const Jet& a, const Jet& b);
bool value_zero(const Jet& j);

// Σ_I e_I ∧ M_I·F and Σ_ν c[ν] ∧ g^{νν} D_νF, values only
ExteriorElement apply_b(const BTerm& b, const ExteriorElement& F);
ExteriorElement apply_d(const FiberConfig& f, const DTerm& d, const Jet& F);

// Operator relations checked on jets -----------------------------------

struct CommutationReport {
    bool covariant_covariant = true;   // [D_μ, D_ν] = R_{μν}
    bool covariant_endo = true;        // [D_μ, Φ] = D_μΦ
    bool covariant_contraction = true; // [D_μ, j(φ)] = j(D^C_μφ)
    bool contraction_contraction = true;  // j(φ)j(ψ) + j(ψ)j(φ) = 0
    bool endo_contraction = true;      // [Φ, j(φ)] = j(-Φ^Cφ)
    bool bracket_identity = true;      // [ı(φ), ı(ψ)] = 𝔅(R;φ,ψ) + ½𝔇(T;φ,ψ)
    bool all() const {
        return covariant_covariant && covariant_endo && covariant_contraction && contraction_contraction &&
               endo_contraction && bracket_identity;
    }
};
// spinors: elements of K (needed by the bracket identity)
CommutationReport commutation_check(const FiberConfig& f, const std::vector<QVec>& spinors, std::uint64_t seed,
                                    int samples = 4);

struct FlatnessReport {
    bool b_zero = false;       // 𝔅(R;η,η) = 0
    bool d_zero = false;       // 𝔇(T;η,η) = 0, torsion free
    bool strongly_torsion_free = false;  // T_{μν}η = 0
    bool iota_squared_zero = false;  // ı(η)² = 0 on the test jets
    bool flat() const { return b_zero && d_zero; }
};
// throws when R^Cη ≠ 0
FlatnessReport flatness_check(const FiberConfig& f, const QVec& eta, std::uint64_t seed, int samples = 6);

// Pure spinors in Riemannian even D ------------------------------------

// Complex frame data for a pure spinor: γ^μη = Σ_a c[μ][a] U_a η with U_a unbarred.
struct ComplexFrame {
    PureSpinor eta;
    std::vector<QMat> unbarred;       // U_a
    std::vector<std::vector<Cq>> c;   // [μ][a]
    QMat star;                        // γ*
};
ComplexFrame complex_frame(const GammaRep& rep, int chirality);

// X^{ab} = Σ c[μ][a] c[ν][b] X_{μν}
Cq frame_component(const ComplexFrame& fr, const std::vector<std::vector<Cq>>& x, int a, int b);
QMat frame_component(const ComplexFrame& fr, const EndArray& x, int a, int b);

// Σ ε_{a_1..a_n} U^{a_1}⋯U^{a_{n-2}}(1 - (-)^n wγ*) ⊗ R^{a_{n-1}a_n}, as a Kronecker product
QMat pure_b_condition(const ComplexFrame& fr, const EndArray& R);
// the same with F^{i a_{n-1} a_n} ⊗ e_i, one block per i
std::vector<QMat> pure_d_condition(const ComplexFrame& fr, const KForm& F);

// 𝔅 and 𝔇 for an abstract curvature array / a metric 3-form connection
BTerm b_term_array(const Bundle& b, const EndArray& R, const QVec& phi, const QVec& psi);
DTerm d_term_array(const Bundle& b, const EndArray& T, const QVec& phi, const QVec& psi);

struct PureSpinorSample {
    bool generic = true;       // false: built to satisfy the condition
    bool direct_zero = false;  // 𝔅 or 𝔇 vanishes
    bool condition_zero = false;
};
struct PureSpinorReport {
    std::vector<PureSpinorSample> b_samples, d_samples;
    bool b_equivalent = true, d_equivalent = true;
    // D = 4, orientation ε_{0123} = 1: which duality class is annihilated
    bool b_zero_selfdual = false;        // 𝔅(R;η,η) = 0 for R ∈ Λ²_+ ⊗ End
    bool b_zero_antiselfdual = false;    // the same on Λ²_- ⊗ End
    bool t_zero_selfdual = false;        // Σ T_{μνκ}γ^μη ∧ γ^κη = 0 for T ∈ Λ²_+ ⊗ Λ¹
    bool t_zero_antiselfdual = false;
    Rational dual_ratio;                // *π1(T) = λ π3(T) on Λ²_+ ⊗ Λ¹
    bool dual_ratio_exact = false;
    bool dual_ratio_opposite = false;   // -λ on Λ²_- ⊗ Λ¹
};
// samples split evenly between generic and condition-satisfying inputs
PureSpinorReport pure_spinor_check(const ChargeConjugation& conj, int chirality, std::uint64_t seed, int samples = 20);

}  // namespace spt
