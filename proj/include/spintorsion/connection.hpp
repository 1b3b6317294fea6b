#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spintorsion/fierz.hpp"

namespace spt {

// Spinor bundle S or S ⊕ S = S ⊗ ℂ² with pairing C or C ⊗ τ_i.
// Every operator here is monomial, so products with gammas stay cheap.
class Bundle {
public:
    explicit Bundle(const ChargeConjugation& conj);
    Bundle(const ChargeConjugation& conj, int twist_i);  // doubled, C ⊗ τ_i

    const ChargeConjugation& conj() const { return conj_; }
    const GammaRep& rep() const { return conj_.rep(); }
    int D() const { return rep().D(); }
    bool doubled() const { return doubled_; }
    int twist() const { return twist_; }
    std::size_t dim() const { return c_.dim(); }

    const Mono& gamma(int mu) const { return gam_[mu]; }
    // lift of an End(S) monomial or matrix to the bundle (⊗ 1 when doubled)
    Mono lift(const Mono& m) const;
    QMat lift(const QMat& m) const;
    // 1 ⊗ τ_j (identity on an undoubled bundle with j = 0)
    Mono tau(int j) const;
    Mono star() const;

    // Φ^C = C⁻¹ Φᵀ C
    QMat adjoint(const QMat& phi) const;
    Cq pair(const QVec& a, const QVec& b) const;
    const Mono& c_mono() const { return c_; }
    // symmetries of the bundle pairing itself (ε_i Δ_k when twisted)
    int delta0() const { return delta0_; }
    int delta1() const { return delta1_; }

private:
    void measure();

    ChargeConjugation conj_;
    bool doubled_ = false;
    int twist_ = 0;
    Mono c_, cinv_;
    std::vector<Mono> gam_;
    int delta0_ = 0, delta1_ = 0;
};

enum class Placement {
    contract,        // X⌟F:  F_{μ K} γ^K, |K| = ℓ-1
    wedge,           // X∧F:  F^K γ_{μ K}, |K| = ℓ
    clifford_left,   // F·X:  F_K γ^K γ_μ
    clifford_right,  // X·F:  γ_μ F_K γ^K
    generic          // Σ t[μ,K] γ^K for an arbitrary Ω^1 ⊗ Ω^k tensor
};
std::string to_string(Placement p);

enum class ProjKind { none, gamma_star, plus, minus, pi };

// Right factor applied after the γ part of a term.
struct Projector {
    ProjKind kind = ProjKind::none;
    int i = 0, j = 0, w = 1;  // Π_{ij,w}
};

struct ConnectionTerm {
    int degree = 0;  // ℓ, degree of F
    Placement placement = Placement::contract;
    KForm form;
    std::map<std::pair<int, std::vector<int>>, Cq> tensor;  // generic placement only
    std::optional<int> twist;                                // ⊗ τ_j
    Projector proj;
    Cq coeff{1};
};

// A_μ of a single term at μ (flat orthonormal frame)
QMat eval_term(const Bundle& b, const ConnectionTerm& t, int mu);

// D = ∇ + A on flat space with constant coefficients.
class SpinorConnection {
public:
    explicit SpinorConnection(Bundle b) : bundle_(std::move(b)) {}
    SpinorConnection(Bundle b, std::vector<QMat> a);

    const Bundle& bundle() const { return bundle_; }
    void add(ConnectionTerm t);
    const std::vector<ConnectionTerm>& terms() const { return terms_; }
    const std::vector<QMat>& a() const;  // A_μ, cached
    std::vector<QMat> a_c() const;       // A^C_μ
    // D^C = ∇ - A^C as a connection in its own right
    SpinorConnection conjugate() const;

private:
    Bundle bundle_;
    std::vector<QMat> base_;  // explicit A_μ, empty if built from terms only
    std::vector<ConnectionTerm> terms_;
    mutable std::optional<std::vector<QMat>> cache_;
};

using EndArray = std::vector<std::vector<QMat>>;  // [μ][ν]

// ΩΦ + ΦΩ^C
QMat ad_c(const Bundle& b, const QMat& omega, const QMat& phi);
// (D̂_κγ)_ν = A_κγ_ν + γ_νA^C_κ, indexed [κ][ν]
EndArray hat_d_gamma(const SpinorConnection& conn);
// T_{μν} = ad^C_{A_μ}γ_ν - ad^C_{A_ν}γ_μ
EndArray torsion(const SpinorConnection& conn);
// S_{μν} = ad^C_{A_μ}γ_ν + ad^C_{A_ν}γ_μ, μ ≤ ν
EndArray symmetric_part(const SpinorConnection& conn);

struct Admissibility {
    bool admissible = true;
    int mu = -1, nu = -1;  // first nonzero S_{μν}
    QMat witness;
};
Admissibility is_admissible(const SpinorConnection& conn);
bool is_admissible_on(const SpinorConnection& conn, const std::vector<QVec>& K);
// T_{μν}η = 0 for all μ, ν and η ∈ K
bool strongly_torsion_free(const SpinorConnection& conn, const std::vector<QVec>& K);

// Checks on a torsion array
bool torsion_antisymmetric(const EndArray& t);
bool torsion_has_delta1_symmetry(const Bundle& b, const EndArray& t);

// D̂(ad^C_ΩΨ) = ad^C_{DΩ}Ψ + ad^C_Ω D̂Ψ for constant Ω, Ψ, where DΩ = [A, Ω]
bool compatibility_check(const SpinorConnection& conn, const QMat& omega, const QMat& psi);

// Gamma-basis coefficients: M = Σ c_I γ_I over sorted I (lower indices), degree k part
std::map<std::vector<int>, Cq> gamma_coefficients(const GammaRep& rep, const QMat& m, int k);
QMat gamma_component(const GammaRep& rep, const QMat& m, int k);

// Closed-form rules -------------------------------------------------------

// deg ≡ 3 mod 4 or deg ≡ 1 + Δ0Δ1 mod 4
bool classify_form_term(int degree, int delta0, int delta1);
// same rule written as Δ1 Δ_deg = -1
bool classify_form_term_delta(const ChargeConjugation& conj, int degree);
// F γ^{(ℓ)} γ_μ γ*: n even → ℓ ≡ 1, 1+Δ0Δ1; n odd → ℓ ≡ 3, 1-Δ0Δ1 (mod 4)
bool gamma_star_term_rule(int ell, int n, int delta0, int delta1);
// F γ^{(ℓ)} γ_μ Π^±: ℓ ≡ 3 (n odd) or ℓ ≡ 1 + Δ0Δ1 (n even)
bool projected_term_rule(int ell, int n, int delta0, int delta1);
// Δ_ℓ Δ_1 ε_j ε_{ij} = -1
bool twisted_rule(const ChargeConjugation& conj, int ell, int i, int j);

// Seeded generic form with small integer entries.
KForm random_form(std::mt19937_64& rng, int D, int degree, int range = 3);
KForm ones_form(int D, int degree);

// Brute force: the term with F replaced by two generic witnesses
bool brute_force_admissible(const Bundle& b, ConnectionTerm t, std::uint64_t seed);

// Table 1 --------------------------------------------------------------

struct TwistRow {
    int i = 0;
    int ell_mod4 = 0;
    std::vector<int> j;
    bool operator==(const TwistRow&) const = default;
};
// For the given Δ0Δ1: all (ℓ mod 4, j) that pass Δ_ℓΔ_1ε_jε_{ij} = -1, per i.
std::vector<TwistRow> twisted_table(const ChargeConjugation& conj);
std::vector<TwistRow> twisted_table(const ChargeConjugation& conj, int i);

// Π_{ij,w} = ½(1 ⊗ τ_i + w γ* ⊗ τ_j) ----------------------------------

struct PiProjector {
    int i = 0, j = 0, w = 1;
    QMat m;
};
PiProjector pi_projector(const GammaRep& rep, int i, int j, int w);
bool pi_has_zero_eigenvalue(int i, int j);

struct PiLemmaReport {
    bool squares_ok = true;            // Π_{02,w}² = ½wγ*⊗τ_2, Π_{13,w}² = ½
    bool zero_products_ok = true;      // Π_{ij,w}Π_{ij,-w} = 0 for i = j or ij = 0
    bool product12_ok = true;          // Π_{12,w}Π_{12,-w} = Π_{03,w}
    bool product23_ok = true;          // Π_{23,w}Π_{23,-w} = Π_{01,w} as printed
    bool product23_measured = true;    // Π_{23,w}Π_{23,-w} = -Π_{01,-w}
    bool kernel_dims_ok = true;        // dim ker = dim S with a zero eigenvalue, else 0
    bool kernel_image_ok = true;       // ker Π_{ij,±} = im Π_{ij,∓} on all twelve pairs
    bool kernel_image_regular = true;  // the same on the eight pairs with Π² ≠ 0
    bool nilpotent_self_image = true;  // Π² = 0 on (1,2),(2,1),(2,3),(3,2) and ker Π_w = im Π_w
    bool squared_formula_ok = true;    // general Π² and Π_wΠ_{-w} in terms of ε_i, ε_{ij}
};
PiLemmaReport pi_lemma_check(const GammaRep& rep);
// same column span
bool same_span(const std::vector<QVec>& a, const std::vector<QVec>& b);
std::vector<QVec> kernel(const QMat& m);
std::vector<QVec> image(const QMat& m);

// Prop.: projected contributions go to the opposite projection ----------

struct OppositeProjection {
    bool adjoint_opposite = false;   // A^C_μ Π^{±} = 0
    bool adjoint_formula = false;    // A^C_μ = -F γ_μ γ^{(ℓ)} Π^∓
    bool torsion_opposite = false;   // T_{μν} Π^{±} = 0
    bool hat_d_formula = false;      // D̂_μγ_ν = F(γ^{(ℓ)}γ_{μν} + γ_{μν}γ^{(ℓ)})Π^∓
};
// conn must consist of clifford_left terms carrying a plus/minus projector
OppositeProjection opposite_projection_check(const SpinorConnection& conn);

// Eleven-dimensional supergravity connection -------------------------

// A_μ = -1/36 F_{μνρσ}γ^{νρσ} + 1/288 F_{νρστ}γ_μ^{νρστ} (all orderings)
SpinorConnection sugra_connection(const ChargeConjugation& conj, const KForm& F);
struct SugraCoefficients {
    Rational six, two;     // measured c6, c2 in ad^C(A_μ)γ_ν = c6 F γ_{μν(4)} + c2 F_{μν(2)} γ^{(2)}
    bool exact = false;    // no other degree and the fit is exact at every (μ,ν)
};
SugraCoefficients sugra_ad_coefficients(const SpinorConnection& conn, const KForm& F);

// Ten-dimensional twisted examples ------------------------------------

struct TwistedField {
    std::string name;
    int degree;
    Placement placement;
    int twist;  // τ_j
};
// F^ℓ twisted by τ_2 (ℓ ≡ 1 mod 4) or τ_1 (ℓ ≡ 3 mod 4), and H twisted by τ_3
std::vector<TwistedField> iib_fields();
// F³γ ⊗ τ_3 + F⁴γ ⊗ τ_1
std::vector<TwistedField> iia_fields();

struct TruncationRow {
    int i = 0;  // pairing C ⊗ τ_i
    std::vector<std::string> kept, killed;
};
// Which fields survive admissibility for each pairing; brute force builds every
// field on the doubled bundle, otherwise the closed-form rule is used.
std::vector<TruncationRow> field_truncations(const ChargeConjugation& conj, const std::vector<TwistedField>& fields,
                                             bool brute_force);

}  // namespace spt
