#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "spintorsion/connection.hpp"

namespace spt {

// Flat space with constant coefficients (exact) ------------------------------

// A_μ = a γ_μ, the wedge placement of a 0-form
SpinorConnection killing_connection(const ChargeConjugation& conj, const Cq& a);

// R_{μν} = [A_μ, A_ν]
EndArray flat_curvature(const SpinorConnection& conn);

struct FlatBianchi {
    bool dt = false;         // cycl D̂_κT_{μν} = cycl ad^C(R_{κμ})γ_ν
    bool dr = false;         // cycl D_κR_{μν} = 0
    bool dadr = false;       // Alt D̂_κ(ad^C_Rγ) = Alt ad^C(R)T
    bool dadr_half = false;  // the same with ½ on the right
    bool dt_sides_zero = false;
};
FlatBianchi flat_bianchi(const SpinorConnection& conn);

// Cyclic sum over (κ,μ,ν) of D̂_κT_{μν} and of ad^C(R_{κμ})γ_ν, indexed by sorted triples
struct CyclicSums {
    std::vector<std::vector<int>> triples;
    std::vector<QMat> dt, adr;
};
CyclicSums flat_cyclic_sums(const SpinorConnection& conn);

struct KillingExample {
    bool torsion_4a = false;           // T_{μν} = 4aγ_{μν}
    bool curvature_2a2 = false;        // R_{μν} = 2a²γ_{μν}
    bool hat_dt_printed = false;       // D̂_κT_{μν} = -16a g_{κ[μ}γ_{ν]}
    bool hat_dt_measured = false;      // D̂_κT_{μν} = -16a² g_{κ[μ}γ_{ν]}
    bool adr_gamma = false;            // ad^C_{R_{μν}}γ_κ = 8a² g_{κ[μ}γ_{ν]}
    bool both_sides_vanish = false;    // cyclic sums of both sides are zero
    bool admissible = false;
};
// needs Δ0Δ1 = -1 for the 4a normalization
KillingExample killing_example(const ChargeConjugation& conj, const Cq& a);

// Holonomy ----------------------------------------------------------------

struct Holonomy {
    std::vector<CMat> basis;          // orthonormal in the Frobenius product
    std::vector<std::size_t> rounds;  // dimension after each closure round
    bool saturated = false;           // reached dim gl(S)
    std::size_t dim() const { return basis.size(); }
};
// Lie algebra generated by the given matrices; rank tolerance relative to the largest generator
Holonomy lie_closure(const std::vector<CMat>& generators, double tol = 1e-9);
Holonomy holonomy_flat(const SpinorConnection& conn);

// su(n) example ------------------------------------------------------------

struct SuNReport {
    int n = 0;
    std::size_t dim_nbar = 0, dim_n = 0;     // dim of Λ³ ∩ (n̄ ⊗ su(n)) and of Λ³ ∩ (n ⊗ su(n))
    std::size_t dim_real = 0;                // real 3-forms in either intersection
    bool eta_annihilated = false;            // T_{μν}η = 0 for F ∈ n̄ ⊗ su(n)
    bool eta_bar_annihilated = false;        // T_{μν}η̄ = 0 for F ∈ n ⊗ su(n)
    bool holonomy_in_su = false;             // A_μ η = A_μ η̄ = 0 and R_{μν} kills both
    bool admissible = false;                 // every basis connection
    bool generic_not_annihilating = false;   // a generic 3-form does not kill η
    std::size_t dim_isotropic = 0;           // Λ³ with one slot in n̄, no su(n) condition
    bool isotropic_holonomy_in_su = false;   // A and R of those forms kill η and η̄
};
// Metric connection A_μ = ¼F_{μνκ}γ^{νκ} (all orderings) on flat ℝ^{2n}
SuNReport su_n_flat_example(int n);
// Λ³ ∩ (n̄ ⊗ su(n)) (bar = true) or Λ³ ∩ (n ⊗ su(n)) as 3-forms on ℝ^{2n}
std::vector<KForm> su_n_forms(int n, bool bar);
// Λ³ ∩ (n̄ ⊗ Λ²) (bar = false): the isotropic condition alone
std::vector<KForm> isotropic_forms(int n, bool bar);
// η with (γ^a - iγ^{a+n})η = 0 (bar = false) or (γ^a + iγ^{a+n})η = 0
QVec complex_structure_spinor(const GammaRep& rep, bool bar);
SpinorConnection three_form_connection(const ChargeConjugation& conj, const KForm& F);

// R⁰ from skew torsion -----------------------------------------------------

// Tensors on flat ℝ^{t,s} as flat arrays, index (a,b,c,...) row-major.
struct Tensor {
    int D = 0, rank = 0;
    std::vector<Cq> v;
    Tensor() = default;
    Tensor(int D_, int rank_);
    Cq& operator()(std::initializer_list<int> idx);
    const Cq& operator()(std::initializer_list<int> idx) const;
    bool operator==(const Tensor&) const = default;
};

struct SkewTorsionReport {
    Tensor T;        // T_{μνκ}, lowered with g
    Tensor R;        // R_{κλμν} = g(R(e_κ,e_λ)e_μ, e_ν)
    Tensor DT;       // (D_μ T)_{κλν}
    Tensor sigma;    // σ^T_{κλμν}
    Tensor R0;       // reconstruction
    bool totally_skew = false;
    bool sigma_is_form = false;
    bool torsion_matches_vector = false;  // spinor torsion = torsion of the vector connection
    bool r0_zero = false;                 // flat base: R⁰ must vanish
    bool flat_identity = false;           // R = ¼T_{κλρ}T_{μν}^ρ - ¼σ^T, the constant-T case of the expansion
    bool dt_t_zero = false;               // D^T T = 0
};
// conn: metric connection with constant coefficients on flat space
SkewTorsionReport r0_from_skew_torsion(const SpinorConnection& conn);
// σ^T = 3T_{ρ[κλ}T_{μ]ν}^ρ
Tensor sigma_t(const Signature& sig, const Tensor& T);

// Brane backgrounds (complex double) ---------------------------------------

// Second-order jets in the transverse coordinates y^1..y^d.
using Jet1 = Eigen::AutoDiffScalar<Eigen::VectorXd>;
using Jet2 = Eigen::AutoDiffScalar<Eigen::Matrix<Jet1, Eigen::Dynamic, 1>>;
std::vector<Jet2> jet_variables(const std::vector<double>& y);
Jet2 jet_constant(double c, int n);
double jet_value(const Jet2& s);
double jet_grad(const Jet2& s, int i);
double jet_hess(const Jet2& s, int i, int j);

struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Profile { affine, radial_log };

struct BraneSpec {
    int p = 5, d = 5;
    int delta1 = -1, delta2 = -1;
    std::complex<double> eps{0, 1}, alpha, beta;
    double alpha1 = 0, alpha2 = 0, alpha3 = 0;
    Profile profile = Profile::radial_log;
    std::vector<double> profile_params;  // affine: u = c·y; radial_log: centre y0 of log(1 + |y - y0|²)

    int D() const { return p + 1 + d; }
    static BraneSpec m5();          // consistent signs δ1 = δ2 = -1
    static BraneSpec m5_printed();  // δ1 = -δ2 = -1, α = 8i/288
};

// Names the first failing condition, empty if none.
std::string brane_constraint_violation(const BraneSpec& s);

enum class BackgroundKind { flat, killing, brane };
struct Background {
    BackgroundKind kind = BackgroundKind::flat;
    Cq a;             // killing
    BraneSpec brane;  // brane
};

// Matrix-valued jet: value, ∂_A for every coordinate, ∂_i∂_j over transverse ones.
struct MatJet {
    CMat v;
    std::vector<CMat> d;                // [A], zero along the worldvolume
    std::vector<std::vector<CMat>> dd;  // [i][j], transverse only; empty when not tracked
};

// Everything at one point, in coordinate components.
struct BranePoint {
    std::vector<double> y;
    int D = 0, p1 = 0, d = 0;
    Jet2 u, f1, f2, h;              // h = e^{α3 u}, the potential of F
    std::vector<Jet2> du;           // analytic ∂_i u
    std::vector<Jet2> scale;        // f1 or f2 per coordinate
    std::vector<Jet2> g;            // diagonal metric
    std::vector<double> X, Y;       // X_i = ∂_i(ln f1)f1/f2, Y_i = ∂_i(ln f2)
    std::vector<std::vector<std::vector<Jet2>>> christoffel;  // Γ_{ABC}, middle index lowered
    std::vector<std::vector<std::vector<Jet2>>> gamma2;       // Γ^B_{AC} as [A][B][C]
    std::vector<MatJet> gamma;      // coordinate γ_A
    std::vector<MatJet> omega;      // Levi-Civita ω_A
    std::vector<MatJet> a;          // A_A of D = ∇ + A
    std::vector<MatJet> ac;         // A^C_A
    std::vector<MatJet> conn;       // Ω_A = ω_A + A_A
    std::vector<MatJet> conn_c;     // Ω^C_A = ω_A - A^C_A
};

class BraneGeometry {
public:
    // validate = false builds the connection even when the constraints fail
    BraneGeometry(const ChargeConjugation& conj, BraneSpec spec, bool validate = true);

    const BraneSpec& spec() const { return spec_; }
    const ChargeConjugation& conj() const { return conj_; }
    int D() const { return spec_.D(); }
    int p1() const { return spec_.p + 1; }

    BranePoint at(const std::vector<double>& y) const;
    // u and ∂u by closed form (no jets)
    double u(const std::vector<double>& y) const;
    std::vector<double> du(const std::vector<double>& y) const;

    const CMat& frame_gamma(int a) const { return G_[a]; }
    const CMat& frame_gamma_up(int a) const { return Gu_[a]; }
    const CMat& vol_d() const { return vol_; }  // γ^{[d]} = γ^{p+1}⋯γ^{D-1}, upper frame
    CMat projector(int sign) const;              // ½(1 ± εγ^{[d]})
    const CMat& vol_worldvolume() const { return vol_wv_; }  // γ^{[p+1]} = γ^0⋯γ^p
    // Electric description: Π̂^± = ½(1 ± ε̂γ^{[p+1]}) with ε̂γ^{[p+1]} = εγ^{[d]}. In odd D the dual
    // field gives the same connection, so Π̂^± = Π^± and the magnetic machinery is reused.
    std::optional<std::complex<double>> electric_eps() const;
    CMat electric_projector(int sign) const;
    CMat adjoint(const CMat& m) const;           // C⁻¹mᵀC
    std::complex<double> pair(const CVec& a, const CVec& b) const;

    // Γ_{ABC} from the closed-form display
    double christoffel_closed(const BranePoint& pt, int A, int B, int C) const;
    // ∇_A - ∂_A from the display, ½∂_i(ln f1)f1f2⁻¹γ_μ̌^ǐ and ½∂_j(ln f2)γ_ǐ^ǰ
    CMat spin_connection_printed(const BranePoint& pt, int A) const;
    // D^C_A - ∂_A from the reduced closed form: -X_jγ_μ̌^ǰΠ^{-δ1},
    // -Y_jγ_ǐ^ǰΠ^{-δ2} + δ2ε((d-1)β/2α)Y_iγ^{[d]}
    CMat dc_closed(const BranePoint& pt, int A) const;
    // torsion as printed, coordinate components
    CMat torsion_printed(const BranePoint& pt, int A, int B) const;

private:
    ChargeConjugation conj_;
    BraneSpec spec_;
    std::vector<CMat> G_, Gu_;
    CMat vol_, vol_wv_, C_, Cinv_;
};

// Generic machinery on a point ------------------------------------------------

using CArray = std::vector<std::vector<CMat>>;
struct CurvatureJet {
    CArray v;                        // R_{AB}
    std::vector<CArray> d;           // ∂_E R_{AB} as [E][A][B]
};
CurvatureJet curvature(const BranePoint& pt, const std::vector<MatJet>& conn);
// ad^C_ΩΦ with a complex adjoint
CMat ad_c(const BraneGeometry& g, const CMat& omega, const CMat& phi);

struct TorsionJet {
    CArray v;
    std::vector<CArray> d;
};
TorsionJet torsion(const BraneGeometry& g, const BranePoint& pt);

struct BianchiResiduals {
    double dt = 0, dr = 0, dadr = 0, dadr_half = 0;  // max abs residuals
    double scale = 0;                                 // max abs of the cyclic terms
};
BianchiResiduals bianchi_check(const BraneGeometry& g, const BranePoint& pt);

struct ParallelFamily {
    CMat basis;              // columns span ker Π^{sign}
    int projector_sign = 0;  // η0 ∈ ker Π^{projector_sign}
    double exponent = 0;     // f = e^{exponent·u}
    double max_residual = 0; // max |D^C(fη0)| over the sample points and basis
    double off_family = 0;   // min over basis of |D^Cη| for η0 ∈ im Π^{sign} (should be nonzero)
    double curvature = 0;    // max |R^C_{AB}η0| at the first point
};
ParallelFamily parallel_spinors_brane(const BraneGeometry& g, const std::vector<std::vector<double>>& points);

struct KillingResiduals {
    double symmetric = 0;  // max |∇_(μV_ν)|
    double torsion = 0;    // max |∇_μV_ν - C(η,T_{μν}ξ)|
    double scale = 0;      // max |∇_μV_ν|
    int worst_a = -1, worst_b = -1;
};
// V_ν = 2C(η, γ_νξ) for η, ξ from the family; derivatives by central differences
KillingResiduals killing_check(const BraneGeometry& g, const ParallelFamily& fam, const std::vector<double>& y,
                               double h = 1e-3);

Holonomy holonomy_algebra(const BraneGeometry& g, const BranePoint& pt);

struct TorsionFreeSubset {
    std::size_t dim_family = 0;
    std::size_t dim_k = 0;             // dim of the parallel family ∩ ker X·
    double x_square = 0;               // X·X· + |X|² residual
    double first_summand_sym = 0;      // symmetrized T_{iμ} term of the reduced equations
    double d_term_on_k = 0;            // 𝔇 on K (0 when K = {0})
    double d_term_on_family = 0;       // 𝔇 on the whole family, for reference
};
TorsionFreeSubset torsion_free_subset_brane(const BraneGeometry& g, const ParallelFamily& fam,
                                            const std::vector<double>& y);

}  // namespace spt
