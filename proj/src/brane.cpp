#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "spintorsion/geometry.hpp"

namespace spt {

using cd = std::complex<double>;

// Jets -------------------------------------------------------------------

std::vector<Jet2> jet_variables(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    std::vector<Jet2> out(n);
    for (int i = 0; i < n; ++i) {
        out[i].value() = Jet1(y[i], n, i);
        out[i].derivatives().resize(n);
        for (int k = 0; k < n; ++k) out[i].derivatives()(k) = Jet1(k == i ? 1.0 : 0.0, Eigen::VectorXd::Zero(n));
    }
    return out;
}

Jet2 jet_constant(double c, int n) {
    Jet2 out;
    out.value() = Jet1(c, Eigen::VectorXd::Zero(n));
    out.derivatives().resize(n);
    for (int k = 0; k < n; ++k) out.derivatives()(k) = Jet1(0.0, Eigen::VectorXd::Zero(n));
    return out;
}

double jet_value(const Jet2& s) { return s.value().value(); }
double jet_grad(const Jet2& s, int i) { return s.derivatives()(i).value(); }
double jet_hess(const Jet2& s, int i, int j) { return s.derivatives()(i).derivatives()(j); }

namespace {

bool jet_is_zero(const Jet2& s) {
    if (s.value().value() != 0.0) return false;
    for (Eigen::Index i = 0; i < s.derivatives().size(); ++i) {
        if (s.derivatives()(i).value() != 0.0) return false;
        if (!s.derivatives()(i).derivatives().isZero(0.0)) return false;
    }
    return true;
}

MatJet zero_jet(int N, int D, int d, bool second) {
    MatJet m;
    m.v = CMat::Zero(N, N);
    m.d.assign(D, CMat::Zero(N, N));
    if (second) m.dd.assign(d, std::vector<CMat>(d, CMat::Zero(N, N)));
    return m;
}

// m += s·M
void accumulate(MatJet& m, int p1, const Jet2& s, const CMat& M) {
    const int d = static_cast<int>(s.derivatives().size());
    m.v += jet_value(s) * M;
    for (int i = 0; i < d; ++i) {
        double gi = jet_grad(s, i);
        if (gi != 0.0) m.d[p1 + i] += gi * M;
    }
    if (m.dd.empty()) return;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double hij = jet_hess(s, i, j);
            if (hij != 0.0) m.dd[i][j] += hij * M;
        }
}

MatJet map_jet(const MatJet& m, const std::function<CMat(const CMat&)>& f) {
    MatJet out;
    out.v = f(m.v);
    for (const auto& x : m.d) out.d.push_back(f(x));
    for (const auto& row : m.dd) {
        out.dd.emplace_back();
        for (const auto& x : row) out.dd.back().push_back(f(x));
    }
    return out;
}

MatJet combine(const MatJet& a, const MatJet& b, double sb) {
    MatJet out = a;
    out.v += sb * b.v;
    for (std::size_t k = 0; k < out.d.size(); ++k) out.d[k] += sb * b.d[k];
    for (std::size_t i = 0; i < out.dd.size(); ++i)
        for (std::size_t j = 0; j < out.dd[i].size(); ++j) out.dd[i][j] += sb * b.dd[i][j];
    return out;
}

// ∂_E∂_A of a jet, zero unless both directions are transverse
CMat second(const MatJet& m, int p1, int E, int A) {
    if (E < p1 || A < p1 || m.dd.empty()) return CMat::Zero(m.v.rows(), m.v.cols());
    return m.dd[E - p1][A - p1];
}

CMat product(const std::vector<CMat>& ms, int N) {
    CMat r = CMat::Identity(N, N);
    for (const auto& m : ms) r = r * m;
    return r;
}

bool close(cd a, cd b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::string fmt(cd z) {
    std::ostringstream os;
    os.precision(12);
    os << z;
    return os.str();
}

}  // namespace

// Presets and constraints ------------------------------------------------

BraneSpec BraneSpec::m5() {
    BraneSpec s;
    s.p = 5;
    s.d = 5;
    s.delta1 = -1;
    s.delta2 = -1;
    s.eps = cd(0, 1);
    s.beta = cd(0, -1.0 / 288);
    s.alpha = cd(0, -8.0 / 288);
    s.alpha1 = -1.0 / 6;
    s.alpha2 = 1.0 / 3;
    s.alpha3 = 1.0;
    return s;
}

BraneSpec BraneSpec::m5_printed() {
    BraneSpec s = m5();
    s.delta2 = 1;
    s.alpha = cd(0, 8.0 / 288);
    return s;
}

std::string brane_constraint_violation(const BraneSpec& s) {
    if (s.p < 0 || s.d < 2) return "need p >= 0 and d >= 2";
    if ((s.p + 1) % 2 != 0 && s.d % 2 != 0) return "one of the factors must be even dimensional";
    if (std::abs(s.delta1) != 1 || std::abs(s.delta2) != 1) return "signs δ1, δ2 must be ±1";
    if (!(close(s.eps, 1.0) || close(s.eps, cd(0, 1)))) return "ε must be 1 or i";
    // (γ^{[d]})² = (-1)^{d(d-1)/2} (-1)^d for spacelike generators
    const int sq = ((s.d * (s.d - 1) / 2) % 2 ? -1 : 1) * (s.d % 2 ? -1 : 1);
    if (!close(s.eps * s.eps * double(sq), 1.0)) return "(εγ^{[d]})² = 1 fails";
    if (std::abs(s.alpha) == 0) return "α must be nonzero";
    const double sd = s.d % 2 ? -1.0 : 1.0;
    const double f1 = static_cast<double>(factorial(s.d - 1)), f2 = static_cast<double>(factorial(s.d - 2));
    cd rhs1 = sd * double(s.delta1) * (2.0 / s.eps) * s.beta * f1 * s.alpha3;
    if (!close(s.alpha1, rhs1))
        return "α1 = (-)^d δ1 (2/ε) β (d-1)! α3 fails: " + fmt(s.alpha1) + " vs " + fmt(rhs1);
    cd rhs2 = -sd * double(s.delta2) * (2.0 / s.eps) * s.alpha * f2 * s.alpha3;
    if (!close(s.alpha2, rhs2))
        return "α2 = -(-)^d δ2 (2/ε) α (d-2)! α3 fails: " + fmt(s.alpha2) + " vs " + fmt(rhs2);
    if (!close(s.alpha3, (s.d - 2) * s.alpha2)) return "α3 = (d-2) α2 fails";
    if (s.delta1 != s.delta2)
        return "projector mismatch: the worldvolume term carries Π^{-δ1} and the transverse term Π^{-δ2}, "
               "so δ1 = δ2 is required";
    if (s.profile == Profile::affine && static_cast<int>(s.profile_params.size()) != s.d)
        return "affine profile needs d coefficients";
    if (s.profile == Profile::radial_log && !s.profile_params.empty() && static_cast<int>(s.profile_params.size()) != s.d)
        return "radial-log centre needs d coordinates";
    return {};
}

// Geometry ---------------------------------------------------------------

BraneGeometry::BraneGeometry(const ChargeConjugation& conj, BraneSpec spec, bool validate)
    : conj_(conj), spec_(std::move(spec)) {
    const auto& sig = conj_.rep().signature();
    if (sig.D() != spec_.D() || sig.t != 1)
        throw std::invalid_argument("brane background needs signature (1, p+d)");
    if (validate) {
        std::string why = brane_constraint_violation(spec_);
        if (!why.empty()) throw ConstraintError(why);
    }
    if (spec_.profile == Profile::affine && static_cast<int>(spec_.profile_params.size()) != spec_.d)
        throw ConstraintError("affine profile needs d coefficients");
    for (int a = 0; a < sig.D(); ++a) {
        G_.push_back(to_complex(conj_.rep().dense(a)));
        Gu_.push_back(G_.back() * double(sig.g(a)));
    }
    const int N = static_cast<int>(conj_.rep().dim());
    vol_ = CMat::Identity(N, N);
    for (int a = p1(); a < D(); ++a) vol_ = vol_ * Gu_[a];
    vol_wv_ = CMat::Identity(N, N);
    for (int a = 0; a < p1(); ++a) vol_wv_ = vol_wv_ * Gu_[a];
    C_ = to_complex(conj_.c());
    Cinv_ = to_complex(conj_.c_inv());
}

CMat BraneGeometry::projector(int sign) const {
    const int N = static_cast<int>(vol_.rows());
    return 0.5 * (CMat::Identity(N, N) + double(sign) * spec_.eps * vol_);
}

std::optional<std::complex<double>> BraneGeometry::electric_eps() const {
    // ε̂γ^{[p+1]} = εγ^{[d]} needs γ^{[p+1]} ∝ γ^{[d]}, which holds when γ^{[D]} is central
    const std::complex<double> num = (vol_wv_.adjoint() * vol_).trace();
    const double den = vol_wv_.squaredNorm();
    const std::complex<double> lam = spec_.eps * num / den;
    if ((lam * vol_wv_ - spec_.eps * vol_).norm() > 1e-12 * vol_.norm()) return std::nullopt;
    return lam;
}

CMat BraneGeometry::electric_projector(int sign) const {
    auto e = electric_eps();
    if (!e) throw ConstraintError("electric description needs γ^{[p+1]} proportional to γ^{[d]} (odd D)");
    const int N = static_cast<int>(vol_wv_.rows());
    return 0.5 * (CMat::Identity(N, N) + double(sign) * *e * vol_wv_);
}

CMat BraneGeometry::adjoint(const CMat& m) const { return Cinv_ * m.transpose() * C_; }

std::complex<double> BraneGeometry::pair(const CVec& a, const CVec& b) const { return (a.transpose() * C_ * b)(0, 0); }

double BraneGeometry::u(const std::vector<double>& y) const {
    const auto& c = spec_.profile_params;
    if (spec_.profile == Profile::affine) {
        double s = 0;
        for (int i = 0; i < spec_.d; ++i) s += c[i] * y[i];
        return s;
    }
    double r2 = 0;
    for (int i = 0; i < spec_.d; ++i) {
        double r = y[i] - (c.empty() ? 0.0 : c[i]);
        r2 += r * r;
    }
    return std::log1p(r2);
}

std::vector<double> BraneGeometry::du(const std::vector<double>& y) const {
    const auto& c = spec_.profile_params;
    std::vector<double> out(spec_.d);
    if (spec_.profile == Profile::affine) return c;
    double r2 = 0;
    for (int i = 0; i < spec_.d; ++i) {
        double r = y[i] - (c.empty() ? 0.0 : c[i]);
        r2 += r * r;
    }
    for (int i = 0; i < spec_.d; ++i) out[i] = 2 * (y[i] - (c.empty() ? 0.0 : c[i])) / (1 + r2);
    return out;
}

BranePoint BraneGeometry::at(const std::vector<double>& y) const {
    const int D = this->D(), P1 = p1(), d = spec_.d;
    const int N = static_cast<int>(conj_.rep().dim());
    const auto& sig = conj_.rep().signature();
    if (static_cast<int>(y.size()) != d) throw std::invalid_argument("point needs d transverse coordinates");

    BranePoint pt;
    pt.y = y;
    pt.D = D;
    pt.p1 = P1;
    pt.d = d;
    auto Y = jet_variables(y);
    const auto& c = spec_.profile_params;
    if (spec_.profile == Profile::affine) {
        Jet2 u = jet_constant(0, d);
        for (int i = 0; i < d; ++i) {
            u = u + Y[i] * c[i];
            pt.du.push_back(jet_constant(c[i], d));
        }
        pt.u = u;
    } else {
        std::vector<Jet2> r;
        Jet2 s = jet_constant(1, d);
        for (int i = 0; i < d; ++i) {
            r.push_back(Y[i] - (c.empty() ? 0.0 : c[i]));
            s = s + r[i] * r[i];
        }
        pt.u = log(s);
        for (int i = 0; i < d; ++i) pt.du.push_back(Jet2(r[i] * 2.0 / s));
    }
    pt.f1 = exp(pt.u * spec_.alpha1);
    pt.f2 = exp(pt.u * spec_.alpha2);
    pt.h = exp(pt.u * spec_.alpha3);

    auto expo = [&](int A) { return A < P1 ? spec_.alpha1 : spec_.alpha2; };
    for (int A = 0; A < D; ++A) {
        pt.scale.push_back(A < P1 ? pt.f1 : pt.f2);
        pt.g.push_back(Jet2(pt.scale[A] * pt.scale[A] * double(sig.g(A))));
    }
    for (int i = 0; i < d; ++i) {
        double dui = jet_value(pt.du[i]);
        pt.X.push_back(spec_.alpha1 * dui * jet_value(pt.f1) / jet_value(pt.f2));
        pt.Y.push_back(spec_.alpha2 * dui);
    }

    // ∂_E g_{AA} = 2 g_{AA} α_A ∂_E u, with analytic ∂u
    const Jet2 zero = jet_constant(0, d);
    auto dg = [&](int A, int E) -> Jet2 {
        if (E < P1) return zero;
        return Jet2(pt.g[A] * pt.du[E - P1] * (2.0 * expo(A)));
    };
    // Γ_{ABC} = ½(∂_A g_{BC} + ∂_C g_{BA} - ∂_B g_{AC})
    pt.christoffel.assign(D, std::vector<std::vector<Jet2>>(D, std::vector<Jet2>(D, zero)));
    pt.gamma2 = pt.christoffel;
    for (int A = 0; A < D; ++A)
        for (int B = 0; B < D; ++B)
            for (int C = 0; C < D; ++C) {
                Jet2 s = zero;
                bool any = false;
                if (B == C) { s = s + dg(B, A); any = true; }
                if (A == B) { s = s + dg(B, C); any = true; }
                if (A == C) { s = s - dg(A, B); any = true; }
                if (!any) continue;
                pt.christoffel[A][B][C] = Jet2(s * 0.5);
                pt.gamma2[A][B][C] = Jet2(pt.christoffel[A][B][C] / pt.g[B]);
            }

    for (int A = 0; A < D; ++A) {
        MatJet gj = zero_jet(N, D, d, false);
        accumulate(gj, P1, pt.scale[A], G_[A]);
        pt.gamma.push_back(std::move(gj));
    }

    // ω_A = -¼ Γ_{ABC} γ^B γ^C with coordinate γ^B = γ^{B̌}/scale_B
    for (int A = 0; A < D; ++A) {
        MatJet w = zero_jet(N, D, d, true);
        for (int B = 0; B < D; ++B)
            for (int C = 0; C < D; ++C) {
                if (B == C || jet_is_zero(pt.christoffel[A][B][C])) continue;
                Jet2 s = pt.christoffel[A][B][C] / (pt.scale[B] * pt.scale[C]) * (-0.25);
                accumulate(w, P1, s, Gu_[B] * Gu_[C]);
            }
        pt.omega.push_back(std::move(w));
    }

    // -A^C_A = α F_{A B..}γ^{B..} + β F_{B..}γ_A^{B..} over all orderings,
    // F_{m1..m_{d-1}} = ε_{m1..m_{d-1}m} ∂_m h with ∂_m h = α3 h ∂_m u
    auto dh = [&](int m) { return Jet2(pt.h * pt.du[m] * spec_.alpha3); };
    const double fb = static_cast<double>(factorial(d - 1)), fa = static_cast<double>(factorial(d - 2));
    for (int A = 0; A < D; ++A) {
        MatJet mac = zero_jet(N, D, d, true);
        for (const auto& S : subsets(d, d - 1)) {
            if (A >= P1 && std::find(S.begin(), S.end(), A - P1) != S.end()) continue;
            int m = complement(S, d).front();
            std::vector<int> order = S;
            order.push_back(m);
            const double sign = perm_sign(order);
            std::vector<CMat> ms{G_[A]};
            for (int s : S) ms.push_back(Gu_[P1 + s]);
            Jet2 coef = dh(m) * pt.scale[A] * exp(log(pt.f2) * -double(d - 1)) * (sign * fb);
            accumulate(mac, P1, coef, (spec_.beta * product(ms, N)).eval());
        }
        if (A >= P1) {
            const int i = A - P1;
            std::vector<int> rest;
            for (int k = 0; k < d; ++k)
                if (k != i) rest.push_back(k);
            for (const auto& Ssub : subsets(d - 1, d - 2)) {
                std::vector<int> S;
                for (int k : Ssub) S.push_back(rest[k]);
                int m = rest[complement(Ssub, d - 1).front()];
                std::vector<int> order{i};
                order.insert(order.end(), S.begin(), S.end());
                order.push_back(m);
                const double sign = perm_sign(order);
                std::vector<CMat> ms;
                for (int s : S) ms.push_back(Gu_[P1 + s]);
                Jet2 coef = dh(m) * exp(log(pt.f2) * -double(d - 2)) * (sign * fa);
                accumulate(mac, P1, coef, (spec_.alpha * product(ms, N)).eval());
            }
        }
        pt.ac.push_back(map_jet(mac, [](const CMat& x) { return CMat(-x); }));
        pt.a.push_back(map_jet(pt.ac.back(), [this](const CMat& x) { return adjoint(x); }));
        pt.conn.push_back(combine(pt.omega[A], pt.a[A], 1.0));
        pt.conn_c.push_back(combine(pt.omega[A], pt.ac[A], -1.0));
    }
    return pt;
}

double BraneGeometry::christoffel_closed(const BranePoint& pt, int A, int B, int C) const {
    const int P1 = p1();
    auto dln = [&](int f, int i) { return (f == 1 ? spec_.alpha1 : spec_.alpha2) * jet_value(pt.du[i - P1]); };
    auto g = [&](int X, int Y) { return X == Y ? jet_value(pt.g[X]) : 0.0; };
    const bool a = A < P1, b = B < P1, c = C < P1;
    if (a && b && !c) return dln(1, C) * g(A, B);       // Γ_{μνi}
    if (!a && b && c) return dln(1, A) * g(B, C);       // Γ_{iνμ} = Γ_{μνi}
    if (a && !b && c) return -dln(1, B) * g(A, C);      // Γ_{μiν}
    if (!a && !b && !c) return dln(2, A) * g(B, C) + dln(2, C) * g(A, B) - dln(2, B) * g(C, A);
    return 0.0;
}

CMat BraneGeometry::spin_connection_printed(const BranePoint& pt, int A) const {
    const int N = static_cast<int>(vol_.rows()), P1 = p1();
    CMat out = CMat::Zero(N, N);
    for (int j = 0; j < spec_.d; ++j) {
        if (A < P1)
            out += 0.5 * pt.X[j] * G_[A] * Gu_[P1 + j];
        else if (A - P1 != j)
            out += 0.5 * pt.Y[j] * G_[A] * Gu_[P1 + j];
    }
    return out;
}

CMat BraneGeometry::dc_closed(const BranePoint& pt, int A) const {
    const int N = static_cast<int>(vol_.rows()), P1 = p1();
    CMat out = CMat::Zero(N, N);
    if (A < P1) {
        for (int j = 0; j < spec_.d; ++j) out -= pt.X[j] * G_[A] * Gu_[P1 + j];
        return out * projector(-spec_.delta1);
    }
    const int i = A - P1;
    for (int j = 0; j < spec_.d; ++j)
        if (j != i) out -= pt.Y[j] * G_[A] * Gu_[P1 + j];
    out = out * projector(-spec_.delta2);
    const cd k = double(spec_.d - 1) * spec_.beta / (2.0 * spec_.alpha);
    out += double(spec_.delta2) * spec_.eps * k * pt.Y[i] * vol_;
    return out;
}

CMat BraneGeometry::torsion_printed(const BranePoint& pt, int A, int B) const {
    const int N = static_cast<int>(vol_.rows()), P1 = p1(), d = spec_.d;
    if (A == B) return CMat::Zero(N, N);
    if (A > B) return -torsion_printed(pt, B, A);
    const double f1 = jet_value(pt.f1), f2 = jet_value(pt.f2);
    const cd d1e = double(spec_.delta1) * spec_.eps, d2e = double(spec_.delta2) * spec_.eps;
    CMat out = CMat::Zero(N, N);
    if (B < P1) {
        // δ1ε f1f2 X·γ_μ̌ν̌γ^{[d]}, X· = X_kγ^k with coordinate γ^k = γ^ǩ/f2
        for (int k = 0; k < d; ++k) out += (pt.X[k] / f2) * Gu_[P1 + k];
        return d1e * f1 * f2 * out * G_[A] * G_[B] * vol_;
    }
    if (A < P1) return -d1e * f2 * pt.X[B - P1] * G_[A] * vol_;
    for (int k = 0; k < d; ++k) {
        if (P1 + k == A || P1 + k == B) continue;
        out += pt.Y[k] * Gu_[P1 + k] * G_[A] * G_[B];
    }
    return d2e * f2 * out * vol_;
}

// Generic machinery ------------------------------------------------------

CMat ad_c(const BraneGeometry& g, const CMat& omega, const CMat& phi) { return omega * phi + phi * g.adjoint(omega); }

CurvatureJet curvature(const BranePoint& pt, const std::vector<MatJet>& conn) {
    const int D = pt.D, N = static_cast<int>(conn[0].v.rows());
    CurvatureJet R;
    R.v.assign(D, std::vector<CMat>(D, CMat::Zero(N, N)));
    R.d.assign(D, R.v);
    for (int A = 0; A < D; ++A)
        for (int B = A + 1; B < D; ++B) {
            const auto& a = conn[A];
            const auto& b = conn[B];
            CMat r = b.d[A] - a.d[B] + a.v * b.v - b.v * a.v;
            R.v[A][B] = r;
            R.v[B][A] = -r;
            for (int E = pt.p1; E < D; ++E) {
                CMat dr = second(b, pt.p1, E, A) - second(a, pt.p1, E, B) + a.d[E] * b.v - b.v * a.d[E] +
                          a.v * b.d[E] - b.d[E] * a.v;
                R.d[E][A][B] = dr;
                R.d[E][B][A] = -dr;
            }
        }
    return R;
}

TorsionJet torsion(const BraneGeometry& g, const BranePoint& pt) {
    const int D = pt.D, N = static_cast<int>(pt.a[0].v.rows());
    TorsionJet T;
    T.v.assign(D, std::vector<CMat>(D, CMat::Zero(N, N)));
    T.d.assign(D, T.v);
    // ad^C_{A_A}γ_B and its derivative
    auto hat = [&](int A, int B, int E) -> CMat {
        const auto& a = pt.a[A];
        const auto& ac = pt.ac[A];
        const auto& gm = pt.gamma[B];
        if (E < 0) return a.v * gm.v + gm.v * ac.v;
        return a.d[E] * gm.v + a.v * gm.d[E] + gm.d[E] * ac.v + gm.v * ac.d[E];
    };
    (void)g;
    for (int A = 0; A < D; ++A)
        for (int B = A + 1; B < D; ++B) {
            CMat t = hat(A, B, -1) - hat(B, A, -1);
            T.v[A][B] = t;
            T.v[B][A] = -t;
            for (int E = pt.p1; E < D; ++E) {
                CMat dt = hat(A, B, E) - hat(B, A, E);
                T.d[E][A][B] = dt;
                T.d[E][B][A] = -dt;
            }
        }
    return T;
}

BianchiResiduals bianchi_check(const BraneGeometry& g, const BranePoint& pt) {
    const int D = pt.D;
    const Eigen::Index N = pt.gamma[0].v.rows();
    BianchiResiduals out;
    const auto R = curvature(pt, pt.conn);
    const auto T = torsion(g, pt);
    auto G2 = [&](int A, int B, int C) { return jet_value(pt.gamma2[A][B][C]); };
    std::vector<CMat> Wc(D);
    CArray Rc(D, std::vector<CMat>(D));
    for (int A = 0; A < D; ++A) {
        Wc[A] = g.adjoint(pt.conn[A].v);
        for (int B = 0; B < D; ++B) Rc[A][B] = g.adjoint(R.v[A][B]);
    }

    // covariant derivative of a two-index array: ∂ + action - Γ on both indices
    auto cov2 = [&](const CArray& v, const std::vector<CArray>& dv, int K, int M, int Nn, bool hat) {
        CMat out2 = dv[K][M][Nn];
        const CMat& W = pt.conn[K].v;
        out2 += hat ? CMat(W * v[M][Nn] + v[M][Nn] * Wc[K]) : CMat(W * v[M][Nn] - v[M][Nn] * W);
        for (int E = 0; E < D; ++E) {
            double a = G2(K, E, M), b = G2(K, E, Nn);
            if (a != 0.0) out2 -= a * v[E][Nn];
            if (b != 0.0) out2 -= b * v[M][E];
        }
        return out2;
    };
    for (const auto& tr : subsets(D, 3)) {
        const int k = tr[0], m = tr[1], n = tr[2];
        CMat lhs = cov2(T.v, T.d, k, m, n, true) + cov2(T.v, T.d, m, n, k, true) + cov2(T.v, T.d, n, k, m, true);
        CMat rhs = ad_c(g, R.v[k][m], pt.gamma[n].v) + ad_c(g, R.v[m][n], pt.gamma[k].v) +
                   ad_c(g, R.v[n][k], pt.gamma[m].v);
        out.dt = std::max(out.dt, (lhs - rhs).cwiseAbs().maxCoeff());
        out.scale = std::max(out.scale, rhs.cwiseAbs().maxCoeff());
        CMat dr = cov2(R.v, R.d, k, m, n, false) + cov2(R.v, R.d, m, n, k, false) + cov2(R.v, R.d, n, k, m, false);
        out.dr = std::max(out.dr, dr.cwiseAbs().maxCoeff());
    }

    // Φ_{μνρ} = ad^C(R_{μν})γ_ρ and D̂_κΦ with Γ on all three indices, tabulated for μ < ν
    auto idx = [&](int M, int Nn, int P) { return (static_cast<std::size_t>(M) * D + Nn) * D + P; };
    std::vector<CMat> phi(static_cast<std::size_t>(D) * D * D, CMat::Zero(N, N));
    for (int M = 0; M < D; ++M)
        for (int Nn = 0; Nn < D; ++Nn)
            for (int P = 0; P < D; ++P)
                if (M != Nn) phi[idx(M, Nn, P)] = R.v[M][Nn] * pt.gamma[P].v + pt.gamma[P].v * Rc[M][Nn];
    auto hat_phi = [&](int K, int M, int Nn, int P) -> CMat {
        const CMat& v = phi[idx(M, Nn, P)];
        CMat out2 = pt.conn[K].v * v + v * Wc[K];
        if (K >= pt.p1)
            out2 += R.d[K][M][Nn] * pt.gamma[P].v + pt.gamma[P].v * g.adjoint(R.d[K][M][Nn]) +
                    R.v[M][Nn] * pt.gamma[P].d[K] + pt.gamma[P].d[K] * Rc[M][Nn];
        for (int E = 0; E < D; ++E) {
            double a = G2(K, E, M), b = G2(K, E, Nn), c = G2(K, E, P);
            if (a != 0.0) out2 -= a * phi[idx(E, Nn, P)];
            if (b != 0.0) out2 -= b * phi[idx(M, E, P)];
            if (c != 0.0) out2 -= c * phi[idx(M, Nn, E)];
        }
        return out2;
    };
    // Alt over the 24 orderings: the left side is skew in the middle pair and the right side in
    // both outer pairs, so each sums over representatives only
    for (const auto& q : subsets(D, 4)) {
        std::vector<int> s = q;
        CMat lhs = CMat::Zero(N, N), rhs = lhs;
        do {
            const double sg = perm_sign(s);
            if (s[1] < s[2]) lhs += 2.0 * sg * hat_phi(s[0], s[1], s[2], s[3]);
            if (s[0] < s[1] && s[2] < s[3])
                rhs += 4.0 * sg * (R.v[s[0]][s[1]] * T.v[s[2]][s[3]] + T.v[s[2]][s[3]] * Rc[s[0]][s[1]]);
        } while (std::next_permutation(s.begin(), s.end()));
        out.dadr = std::max(out.dadr, (lhs - rhs).cwiseAbs().maxCoeff());
        out.dadr_half = std::max(out.dadr_half, (lhs - 0.5 * rhs).cwiseAbs().maxCoeff());
    }
    return out;
}

// Parallel spinors, Killing vectors, holonomy ----------------------------

ParallelFamily parallel_spinors_brane(const BraneGeometry& g, const std::vector<std::vector<double>>& points) {
    const auto& s = g.spec();
    ParallelFamily fam;
    fam.projector_sign = -s.delta2;
    fam.basis = nullspace_tol(g.projector(fam.projector_sign), 1e-12);
    const cd k = double(s.d - 1) * s.beta / (2.0 * s.alpha);
    if (std::abs(k.imag()) > 1e-12) throw ConstraintError("(d-1)β/2α must be real for a real profile");
    fam.exponent = -k.real() * s.alpha2;
    CMat off = nullspace_tol(g.projector(-fam.projector_sign), 1e-12);
    fam.off_family = std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto& y : points) {
        BranePoint pt = g.at(y);
        const double f = std::exp(fam.exponent * jet_value(pt.u));
        for (int A = 0; A < pt.D; ++A) {
            const double dfa = A < pt.p1 ? 0.0 : fam.exponent * f * jet_value(pt.du[A - pt.p1]);
            CMat res = dfa * fam.basis + f * pt.conn_c[A].v * fam.basis;
            fam.max_residual = std::max(fam.max_residual, res.cwiseAbs().maxCoeff());
        }
        for (Eigen::Index c = 0; c < off.cols(); ++c) {
            double worst = 0;
            for (int A = 0; A < pt.D; ++A) {
                const double dfa = A < pt.p1 ? 0.0 : fam.exponent * f * jet_value(pt.du[A - pt.p1]);
                worst = std::max(worst, (dfa * off.col(c) + f * pt.conn_c[A].v * off.col(c)).norm());
            }
            fam.off_family = std::min(fam.off_family, worst);
        }
        if (first) {
            auto Rc = curvature(pt, pt.conn_c);
            for (int A = 0; A < pt.D; ++A)
                for (int B = A + 1; B < pt.D; ++B)
                    fam.curvature = std::max(fam.curvature, (Rc.v[A][B] * fam.basis).cwiseAbs().maxCoeff());
            first = false;
        }
    }
    return fam;
}

KillingResiduals killing_check(const BraneGeometry& g, const ParallelFamily& fam, const std::vector<double>& y,
                               double h) {
    const int D = g.D(), P1 = g.p1(), d = g.spec().d;
    BranePoint pt = g.at(y);
    const auto T = torsion(g, pt);
    // V_ν(y) = 2 f(y)² scale_ν(y) C(η0, γ_ν̌ ξ0): only the scalar factor depends on y
    auto phi = [&](const std::vector<double>& z, int nu) {
        const double u = g.u(z);
        const double f = std::exp(fam.exponent * u);
        const double sc = std::exp((nu < P1 ? g.spec().alpha1 : g.spec().alpha2) * u);
        return f * f * sc;
    };
    // 4th-order central differences of φ_ν along each transverse direction
    std::vector<std::vector<double>> dphi(D, std::vector<double>(D, 0.0));  // [E][ν]
    for (int nu = 0; nu < D; ++nu)
        for (int i = 0; i < d; ++i) {
            auto shifted = [&](double t) {
                auto z = y;
                z[i] += t;
                return phi(z, nu);
            };
            dphi[P1 + i][nu] = (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h);
        }
    const double f0 = std::exp(fam.exponent * jet_value(pt.u));
    KillingResiduals out;
    const Eigen::Index n = fam.basis.cols();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            CVec eta = fam.basis.col(a), xi = fam.basis.col(b);
            std::vector<cd> c(D);
            for (int nu = 0; nu < D; ++nu) c[nu] = g.pair(eta, g.frame_gamma(nu) * xi);
            std::vector<cd> V(D);
            for (int nu = 0; nu < D; ++nu) V[nu] = 2.0 * c[nu] * phi(y, nu);
            std::vector<std::vector<cd>> nab(D, std::vector<cd>(D));
            for (int mu = 0; mu < D; ++mu)
                for (int nu = 0; nu < D; ++nu) {
                    cd v = 2.0 * c[nu] * dphi[mu][nu];
                    for (int B = 0; B < D; ++B) {
                        double gam = jet_value(pt.gamma2[mu][B][nu]);
                        if (gam != 0.0) v -= gam * V[B];
                    }
                    nab[mu][nu] = v;
                }
            for (int mu = 0; mu < D; ++mu)
                for (int nu = 0; nu < D; ++nu) {
                    double sym = std::abs(nab[mu][nu] + nab[nu][mu]);
                    cd tor = f0 * f0 * g.pair(eta, T.v[mu][nu] * xi);
                    double dt = std::abs(nab[mu][nu] - tor);
                    out.scale = std::max(out.scale, std::abs(nab[mu][nu]));
                    if (sym > out.symmetric) {
                        out.symmetric = sym;
                        out.worst_a = static_cast<int>(a);
                        out.worst_b = static_cast<int>(b);
                    }
                    out.torsion = std::max(out.torsion, dt);
                }
        }
    return out;
}

Holonomy holonomy_algebra(const BraneGeometry& g, const BranePoint& pt) {
    (void)g;
    auto R = curvature(pt, pt.conn_c);
    std::vector<CMat> gens;
    for (int A = 0; A < pt.D; ++A)
        for (int B = A + 1; B < pt.D; ++B) gens.push_back(R.v[A][B]);
    return lie_closure(gens);
}

TorsionFreeSubset torsion_free_subset_brane(const BraneGeometry& g, const ParallelFamily& fam,
                                            const std::vector<double>& y) {
    const int D = g.D(), P1 = g.p1(), d = g.spec().d;
    BranePoint pt = g.at(y);
    const auto T = torsion(g, pt);
    const int N = static_cast<int>(fam.basis.rows());
    TorsionFreeSubset out;
    out.dim_family = static_cast<std::size_t>(fam.basis.cols());

    const double f2 = jet_value(pt.f2);
    CMat Xdot = CMat::Zero(N, N);
    double x2 = 0;
    for (int i = 0; i < d; ++i) {
        Xdot += (pt.X[i] / f2) * g.frame_gamma_up(P1 + i);
        x2 += pt.X[i] * pt.X[i] / (f2 * f2);
    }
    out.x_square = (Xdot * Xdot + x2 * CMat::Identity(N, N)).cwiseAbs().maxCoeff();
    CMat kx = nullspace_tol(Xdot * fam.basis, 1e-10);
    out.dim_k = static_cast<std::size_t>(kx.cols());
    CMat K = fam.basis * kx;

    std::vector<CMat> gup;
    for (int A = 0; A < D; ++A) gup.push_back(g.frame_gamma_up(A) / jet_value(pt.scale[A]));
    auto wedge = [](const CVec& a, const CVec& b) -> CMat { return a * b.transpose() - b * a.transpose(); };
    // 𝔇_ν(η,ξ) = Σ_A γ^Aη ∧ T_{Aν}ξ + γ^Aξ ∧ T_{Aν}η
    auto dterm = [&](const CMat& basis) {
        double worst = 0;
        for (Eigen::Index a = 0; a < basis.cols(); ++a)
            for (Eigen::Index b = a; b < basis.cols(); ++b) {
                CVec eta = basis.col(a), xi = basis.col(b);
                for (int nu = 0; nu < D; ++nu) {
                    CMat s = CMat::Zero(N, N);
                    for (int A = 0; A < D; ++A)
                        s += wedge(gup[A] * eta, T.v[A][nu] * xi) + wedge(gup[A] * xi, T.v[A][nu] * eta);
                    worst = std::max(worst, s.cwiseAbs().maxCoeff());
                }
            }
        return worst;
    };
    out.d_term_on_k = K.cols() ? dterm(K) : 0.0;
    out.d_term_on_family = dterm(fam.basis);

    // T_{iμ}η ∧ γ^μξ + (η ↔ ξ)
    for (Eigen::Index a = 0; a < fam.basis.cols(); ++a)
        for (Eigen::Index b = a; b < fam.basis.cols(); ++b) {
            CVec eta = fam.basis.col(a), xi = fam.basis.col(b);
            for (int i = P1; i < D; ++i) {
                CMat s = CMat::Zero(N, N);
                for (int mu = 0; mu < P1; ++mu)
                    s += wedge(T.v[i][mu] * eta, gup[mu] * xi) + wedge(T.v[i][mu] * xi, gup[mu] * eta);
                out.first_summand_sym = std::max(out.first_summand_sym, s.cwiseAbs().maxCoeff());
            }
        }
    return out;
}

}  // namespace spt
