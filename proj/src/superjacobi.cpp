#include "spintorsion/superjacobi.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <stdexcept>

#include "spintorsion/geometry.hpp"

namespace spt {

// Exterior algebra ----------------------------------------------------------

int wedge_sign(std::uint32_t I, std::uint32_t J) {
    if (I & J) return 0;
    // count pairs i ∈ I, j ∈ J with i > j
    int swaps = 0;
    for (std::uint32_t rest = J; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        swaps += std::popcount(I >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

ExteriorElement::ExteriorElement(int n) : n_(n) {
    if (n < 0 || n > kExteriorCap) throw std::invalid_argument("exterior fiber is capped at dim S = 8");
}

ExteriorElement ExteriorElement::one(int n) {
    ExteriorElement e(n);
    e.t_[0] = Cq(1);
    return e;
}

ExteriorElement ExteriorElement::basis(int n, std::uint32_t mask) {
    ExteriorElement e(n);
    e.t_[mask] = Cq(1);
    return e;
}

ExteriorElement ExteriorElement::vector(const QVec& v) {
    ExteriorElement e(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) e.t_[1u << i] = v[i];
    return e;
}

Cq ExteriorElement::coefficient(std::uint32_t mask) const {
    auto it = t_.find(mask);
    return it == t_.end() ? Cq(0) : it->second;
}

ExteriorElement ExteriorElement::grade_part(int k) const {
    ExteriorElement e(n_);
    for (const auto& [m, c] : t_)
        if (std::popcount(m) == k) e.t_[m] = c;
    return e;
}

void ExteriorElement::add(std::uint32_t mask, const Cq& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(mask, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

ExteriorElement& ExteriorElement::operator+=(const ExteriorElement& o) {
    n_ = std::max(n_, o.n_);
    for (const auto& [m, c] : o.t_) add(m, c);
    return *this;
}

ExteriorElement& ExteriorElement::operator-=(const ExteriorElement& o) {
    n_ = std::max(n_, o.n_);
    for (const auto& [m, c] : o.t_) add(m, -c);
    return *this;
}

ExteriorElement& ExteriorElement::operator*=(const Cq& s) {
    if (s.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto& [m, c] : t_) c *= s;
    return *this;
}

ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b) {
    ExteriorElement out(std::max(a.generators(), b.generators()));
    for (const auto& [I, x] : a.terms())
        for (const auto& [J, y] : b.terms()) {
            int s = wedge_sign(I, J);
            if (s) out.add(I | J, s > 0 ? x * y : -(x * y));
        }
    return out;
}

ExteriorElement wedge(const QVec& a, const ExteriorElement& b) { return wedge(ExteriorElement::vector(a), b); }

namespace {

std::vector<int> bits(std::uint32_t m) {
    std::vector<int> out;
    for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

}  // namespace

ExteriorElement derivation(const QMat& m, const ExteriorElement& a) {
    ExteriorElement out(a.generators());
    const int n = static_cast<int>(m.rows());
    for (const auto& [I, x] : a.terms()) {
        auto idx = bits(I);
        for (std::size_t p = 0; p < idx.size(); ++p) {
            std::uint32_t rest = I & ~(1u << idx[p]);
            std::uint32_t before = I & ((1u << idx[p]) - 1);
            std::uint32_t after = rest & ~before;
            for (int i = 0; i < n; ++i) {
                const Cq& mij = m(i, idx[p]);
                if (mij.is_zero()) continue;
                std::uint32_t bit = 1u << i;
                if (rest & bit) continue;
                // θ_before ∧ θ_i ∧ θ_after
                int s = wedge_sign(before, bit) * wedge_sign(before | bit, after);
                out.add(rest | bit, s > 0 ? x * mij : -(x * mij));
            }
        }
    }
    return out;
}

ExteriorElement contraction(const Bundle& b, const QVec& phi, const ExteriorElement& a) {
    const std::size_t n = b.dim();
    // C(φ, e_i)
    std::vector<Cq> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        QVec e(n);
        e[i] = Cq(1);
        c[i] = b.pair(phi, e);
    }
    ExteriorElement out(a.generators());
    for (const auto& [I, x] : a.terms()) {
        auto idx = bits(I);
        for (std::size_t p = 0; p < idx.size(); ++p) {
            if (c[idx[p]].is_zero()) continue;
            Cq v = x * c[idx[p]];
            out.add(I & ~(1u << idx[p]), (p % 2) ? -v : v);
        }
    }
    return out;
}

bool is_zero(const BTerm& b) {
    for (const auto& [m, x] : b)
        if (!x.is_zero()) return false;
    return true;
}

bool is_zero(const DTerm& d) {
    for (const auto& e : d)
        if (!e.is_zero()) return false;
    return true;
}

BTerm& operator+=(BTerm& a, const BTerm& b) {
    for (const auto& [m, x] : b) {
        auto it = a.find(m);
        if (it == a.end())
            a.emplace(m, x);
        else
            it->second = it->second + x;
    }
    return a;
}

DTerm& operator+=(DTerm& a, const DTerm& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

BTerm tensor(const ExteriorElement& e, const QMat& m) {
    BTerm out;
    for (const auto& [I, x] : e.terms()) out.emplace(I, m * x);
    return out;
}

// Fiber configuration ------------------------------------------------------

namespace {

Cq gsign(const Bundle& b, int mu) { return Cq(b.rep().signature().g(mu)); }

QMat gam(const Bundle& b, int mu) { return b.gamma(mu).dense(); }
QMat gam_up(const Bundle& b, int mu) { return gam(b, mu) * gsign(b, mu); }

EndArray zero_array(int D, std::size_t n) { return EndArray(D, std::vector<QMat>(D, QMat::zero(n, n))); }

}  // namespace

FiberConfig FiberConfig::flat(const SpinorConnection& conn) {
    const Bundle& b = conn.bundle();
    return FiberConfig{b, conn.a(), zero_array(b.D(), b.dim())};
}

FiberConfig FiberConfig::killing_sphere(const ChargeConjugation& conj, const Cq& a) {
    Bundle b(conj);
    const int D = b.D();
    std::vector<QMat> A(D);
    EndArray r0 = zero_array(D, b.dim());
    for (int m = 0; m < D; ++m) A[m] = gam(b, m) * a;
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n)
            if (m != n) r0[m][n] = gam(b, m) * gam(b, n) * (a * a * Cq(-2));
    return FiberConfig{b, A, r0};
}

std::vector<QMat> FiberConfig::a_c() const {
    std::vector<QMat> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(bundle.adjoint(x));
    return out;
}

EndArray FiberConfig::curvature() const {
    EndArray R = r0;
    for (int m = 0; m < D(); ++m)
        for (int n = 0; n < D(); ++n) R[m][n] = R[m][n] + commutator(a[m], a[n]);
    return R;
}

EndArray FiberConfig::curvature_c() const {
    auto ac = a_c();
    EndArray R = r0;
    for (int m = 0; m < D(); ++m)
        for (int n = 0; n < D(); ++n) R[m][n] = R[m][n] + commutator(ac[m], ac[n]);
    return R;
}

QMat FiberConfig::hat_d(int kappa, const QMat& x) const { return ad_c(bundle, a[kappa], x); }

EndArray FiberConfig::hat_d_gamma() const {
    EndArray out(D(), std::vector<QMat>(D()));
    for (int k = 0; k < D(); ++k)
        for (int n = 0; n < D(); ++n) out[k][n] = hat_d(k, gam(bundle, n));
    return out;
}

EndArray FiberConfig::torsion() const {
    auto h = hat_d_gamma();
    EndArray T(D(), std::vector<QMat>(D()));
    for (int m = 0; m < D(); ++m)
        for (int n = 0; n < D(); ++n) T[m][n] = h[m][n] - h[n][m];
    return T;
}

QMat FiberConfig::d_curv(int kappa, int mu, int nu) const {
    auto R = curvature();
    return commutator(a[kappa], R[mu][nu]);
}

QMat FiberConfig::r0_gamma(int kappa, int mu, int nu) const {
    return commutator(r0[kappa][mu], gam(bundle, nu)) * Cq(-1);
}

std::vector<QVec> FiberConfig::parallel_candidates() const {
    auto rc = curvature_c();
    const std::size_t n = bundle.dim();
    std::vector<const QMat*> blocks;
    for (int m = 0; m < D(); ++m)
        for (int k = m + 1; k < D(); ++k)
            if (!rc[m][k].is_zero()) blocks.push_back(&rc[m][k]);
    if (blocks.empty()) {
        std::vector<QVec> all;
        for (std::size_t i = 0; i < n; ++i) {
            QVec e(n);
            e[i] = Cq(1);
            all.push_back(e);
        }
        return all;
    }
    QMat stack = QMat::zero(blocks.size() * n, n);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) stack(b * n + i, j) = (*blocks[b])(i, j);
    return nullspace(stack);
}

// 𝔅 and 𝔇 ------------------------------------------------------------------

BTerm b_term_array(const Bundle& b, const EndArray& R, const QVec& phi, const QVec& psi) {
    BTerm out;
    const int D = b.D();
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            if (R[m][n].is_zero()) continue;
            auto w = wedge(ExteriorElement::vector(gam_up(b, m).apply(phi)), ExteriorElement::vector(gam_up(b, n).apply(psi)));
            out += tensor(w, R[m][n]);
        }
    return out;
}

DTerm d_term_array(const Bundle& b, const EndArray& T, const QVec& phi, const QVec& psi) {
    const int D = b.D();
    const int N = static_cast<int>(b.dim());
    DTerm out(D, ExteriorElement(N));
    for (int n = 0; n < D; ++n)
        for (int m = 0; m < D; ++m) {
            out[n] += wedge(ExteriorElement::vector(gam_up(b, m).apply(phi)), ExteriorElement::vector(T[m][n].apply(psi)));
            out[n] += wedge(ExteriorElement::vector(gam_up(b, m).apply(psi)), ExteriorElement::vector(T[m][n].apply(phi)));
        }
    return out;
}

BTerm b_term(const FiberConfig& f, const QVec& phi, const QVec& psi) {
    return b_term_array(f.bundle, f.curvature(), phi, psi);
}

DTerm d_term(const FiberConfig& f, const QVec& phi, const QVec& psi) {
    return d_term_array(f.bundle, f.torsion(), phi, psi);
}

// Jacobi summands -------------------------------------------------------------

namespace {

using EV = ExteriorElement;

EV vec(const QMat& m, const QVec& v) { return EV::vector(m.apply(v)); }
EV w3(const EV& a, const EV& b, const EV& c) { return wedge(wedge(a, b), c); }

struct Cache {
    int D;
    std::vector<QMat> g, gu;  // γ_μ, γ^μ
    EndArray T, R;
    std::vector<EndArray> dT;  // D̂_κT_{μν}
    std::vector<EndArray> dR;  // (D_κR)_{μν}
    std::vector<Cq> sg;
};

Cache make_cache(const FiberConfig& f) {
    Cache c;
    c.D = f.D();
    for (int m = 0; m < c.D; ++m) {
        c.g.push_back(gam(f.bundle, m));
        c.gu.push_back(gam_up(f.bundle, m));
        c.sg.push_back(gsign(f.bundle, m));
    }
    c.T = f.torsion();
    c.R = f.curvature();
    c.dT.assign(c.D, EndArray(c.D, std::vector<QMat>(c.D)));
    c.dR.assign(c.D, EndArray(c.D, std::vector<QMat>(c.D)));
    for (int k = 0; k < c.D; ++k)
        for (int m = 0; m < c.D; ++m)
            for (int n = 0; n < c.D; ++n) {
                c.dT[k][m][n] = f.hat_d(k, c.T[m][n]);
                c.dR[k][m][n] = commutator(f.a[k], c.R[m][n]);
            }
    return c;
}

// T^{μν}
QMat t_up(const Cache& c, int m, int n) { return c.T[m][n] * (c.sg[m] * c.sg[n]); }

}  // namespace

JacobiSummands first_summands(const Bundle& b, const EndArray& T, const EndArray& R, const QVec& phi,
                              const QVec& eta, const QVec& xi) {
    const int D = b.D();
    const int N = static_cast<int>(b.dim());
    std::vector<QMat> g, gu;
    std::vector<Cq> sg;
    for (int m = 0; m < D; ++m) {
        g.push_back(gam(b, m));
        gu.push_back(gam_up(b, m));
        sg.push_back(gsign(b, m));
    }
    auto tu = [&](int m, int n) { return T[m][n] * (sg[m] * sg[n]); };
    JacobiSummands out;
    out.d_first.assign(D, EV(N));
    for (int n = 0; n < D; ++n) {
        EV first(N);
        for (int k = 0; k < D; ++k)
            for (int m = 0; m < D; ++m) {
                first += w3(vec(gu[k], phi), vec(T[k][m], eta), vec(tu(m, n), xi));
                first += w3(vec(gu[k], phi), vec(T[k][m], xi), vec(tu(m, n), eta));
                first += w3(vec(tu(n, k), phi), vec(gu[m], eta), vec(T[m][k], xi));
                first += w3(vec(tu(n, k), phi), vec(gu[m], xi), vec(T[m][k], eta));
            }
        // written against D_ν; D_ν = g_νν D^ν
        out.d_first[n] = first * (Cq(Rational(1, 4)) * sg[n]);
    }
    for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
            if (R[m][n].is_zero()) continue;
            EV first(N);
            for (int k = 0; k < D; ++k) {
                first += w3(vec(gu[m], phi), vec(g[k], eta), vec(tu(k, n), xi));
                first += w3(vec(gu[m], phi), vec(g[k], xi), vec(tu(k, n), eta));
                first += w3(vec(g[k], phi), vec(gu[m], xi), vec(tu(k, n), eta));
                first += w3(vec(g[k], phi), vec(gu[m], eta), vec(tu(k, n), xi));
            }
            out.b_first += tensor(first * Cq(Rational(1, 2)), R[m][n]);
        }
    return out;
}

JacobiSummands jacobi_summands(const FiberConfig& f, const QVec& phi, const QVec& eta, const QVec& xi) {
    const Cache c = make_cache(f);
    const int D = c.D;
    const int N = static_cast<int>(f.bundle.dim());
    JacobiSummands out = first_summands(f.bundle, c.T, c.R, phi, eta, xi);
    out.d_second.assign(D, EV(N));
    const Cq half = Cq(Rational(1, 2));
    for (int n = 0; n < D; ++n) {
        EV second(N);
        for (int k = 0; k < D; ++k)
            for (int m = 0; m < D; ++m) {
                second += w3(vec(c.gu[k], phi), vec(c.gu[m], eta), vec(c.dT[k][m][n], xi)) * half;
                second += w3(vec(c.gu[k], phi), vec(c.gu[m], xi), vec(c.dT[k][m][n], eta)) * half;
                second -= w3(vec(c.gu[k], eta), vec(c.gu[m], xi), vec(ad_c(f.bundle, c.R[k][m], c.g[n]), phi));
            }
        out.d_second[n] = second;
    }
    for (int k = 0; k < D; ++k)
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n)
                if (!c.dR[k][m][n].is_zero())
                    out.b_second += tensor(w3(vec(c.gu[k], phi), vec(c.gu[m], eta), vec(c.gu[n], xi)), c.dR[k][m][n]);
    return out;
}

namespace {

void accumulate(JacobiSummands& s, const JacobiSummands& t) {
    s.d_first += t.d_first;
    s.d_second += t.d_second;
    s.b_first += t.b_first;
    s.b_second += t.b_second;
}

}  // namespace

bool in_parallel_kernel(const FiberConfig& f, const QVec& eta) {
    for (const auto& row : f.curvature_c())
        for (const auto& r : row)
            if (!is_zero(r.apply(eta))) return false;
    return true;
}

bool admissible_on(const FiberConfig& f, const QVec& eta) {
    auto h = f.hat_d_gamma();
    for (int m = 0; m < f.D(); ++m)
        for (int n = m; n < f.D(); ++n)
            if (!is_zero((h[m][n] + h[n][m]).apply(eta))) return false;
    return true;
}

JacobiSummands cyclic_jacobi(const FiberConfig& f, const QVec& phi, const QVec& eta, const QVec& xi) {
    for (const QVec* v : {&phi, &eta, &xi}) {
        if (!in_parallel_kernel(f, *v)) throw std::invalid_argument("jacobi: spinor is not parallel (R^C does not kill it)");
        if (!admissible_on(f, *v)) throw std::invalid_argument("jacobi: connection is not admissible on the spinors");
    }
    JacobiSummands s = jacobi_summands(f, phi, eta, xi);
    accumulate(s, jacobi_summands(f, eta, xi, phi));
    accumulate(s, jacobi_summands(f, xi, phi, eta));
    return s;
}

JacobiSummands cyclic_first_summands(const Bundle& b, const EndArray& T, const EndArray& R, const QVec& phi,
                                     const QVec& eta, const QVec& xi) {
    JacobiSummands s = first_summands(b, T, R, phi, eta, xi);
    accumulate(s, first_summands(b, T, R, eta, xi, phi));
    accumulate(s, first_summands(b, T, R, xi, phi, eta));
    return s;
}

namespace {

// D̂_{[κ}T_{μ]ν} - ad^C_{R_{κμ}}γ_ν
QMat lemma_core(const FiberConfig& f, const Cache& c, int k, int m, int n) {
    QMat dt = (c.dT[k][m][n] - c.dT[m][k][n]) * Cq(Rational(1, 2));
    return dt - ad_c(f.bundle, c.R[k][m], c.g[n]);
}

bool lemma_with(const FiberConfig& f, const QVec& eta, const Cq& r0_sign) {
    const Cache c = make_cache(f);
    for (int k = 0; k < c.D; ++k)
        for (int m = 0; m < c.D; ++m)
            for (int n = 0; n < c.D; ++n) {
                QMat x = lemma_core(f, c, k, m, n) - f.r0_gamma(k, m, n) * r0_sign;
                if (!is_zero(x.apply(eta))) return false;
            }
    return true;
}

}  // namespace

bool bianchi_lemma_holds(const FiberConfig& f, const QVec& eta) { return lemma_with(f, eta, Cq(1)); }
bool bianchi_lemma_holds_alt(const FiberConfig& f, const QVec& eta) { return lemma_with(f, eta, Cq(-1)); }

bool bianchi_corollary_holds(const FiberConfig& f, const QVec& phi, const QVec& eta, const QVec& xi) {
    const Cache c = make_cache(f);
    const int N = static_cast<int>(f.bundle.dim());
    const std::vector<std::array<const QVec*, 3>> cyc = {{&phi, &eta, &xi}, {&eta, &xi, &phi}, {&xi, &phi, &eta}};
    for (int n = 0; n < c.D; ++n) {
        EV sum(N);
        for (const auto& t : cyc)
            for (int k = 0; k < c.D; ++k)
                for (int m = 0; m < c.D; ++m)
                    sum += w3(vec(lemma_core(f, c, k, m, n), *t[2]), vec(c.gu[k], *t[0]), vec(c.gu[m], *t[1]));
        if (!sum.is_zero()) return false;
    }
    return true;
}

// Jets ----------------------------------------------------------------------

SpinorJet parallel_spinor_jet(const FiberConfig& f, const QVec& eta) {
    SpinorJet j{eta, {}};
    for (const auto& ac : f.a_c()) j.d.push_back(ac.apply(eta));
    return j;
}

namespace {

EV random_element(std::mt19937_64& rng, int n, int grade_max, int range) {
    std::uniform_int_distribution<int> val(-range, range);
    EV e(n);
    const std::uint32_t full = n >= 32 ? ~0u : ((1u << n) - 1);
    for (std::uint32_t m = 0; m <= full; ++m) {
        if (std::popcount(m) > grade_max) continue;
        int re = val(rng), im = val(rng);
        e.add(m, Cq(re) + Cq::i() * Cq(im));
        if (m == full) break;
    }
    return e;
}

QVec random_vec(std::mt19937_64& rng, std::size_t n, int range = 2) {
    std::uniform_int_distribution<int> val(-range, range);
    QVec v(n);
    for (auto& x : v) {
        int re = val(rng), im = val(rng);
        x = Cq(re) + Cq::i() * Cq(im);
    }
    return v;
}

QMat random_mat(std::mt19937_64& rng, std::size_t n, int range = 2) {
    QMat m = QMat::zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        QVec r = random_vec(rng, n, range);
        for (std::size_t j = 0; j < n; ++j) m(i, j) = r[j];
    }
    return m;
}

}  // namespace

EndArray random_delta1_torsion(std::mt19937_64& rng, const Bundle& b) {
    const int D = b.D();
    const std::size_t N = b.dim();
    const QMat c = b.c_mono().dense();
    const QMat cinv = inverse(c);
    EndArray T(D, std::vector<QMat>(D, QMat::zero(N, N)));
    for (int m = 0; m < D; ++m)
        for (int n = m + 1; n < D; ++n) {
            // X = CT with Xᵀ = Δ1 X
            QMat x = random_mat(rng, N);
            x = (x + x.transpose() * Cq(b.delta1())) * Cq(Rational(1, 2));
            T[m][n] = cinv * x;
            T[n][m] = T[m][n] * Cq(-1);
        }
    return T;
}

EndArray random_curvature(std::mt19937_64& rng, const Bundle& b) {
    const int D = b.D();
    const std::size_t N = b.dim();
    EndArray R(D, std::vector<QMat>(D, QMat::zero(N, N)));
    for (int m = 0; m < D; ++m)
        for (int n = m + 1; n < D; ++n) {
            R[m][n] = random_mat(rng, N);
            R[n][m] = R[m][n] * Cq(-1);
        }
    return R;
}

Jet random_jet(std::mt19937_64& rng, int n, int D, int order, int grade_max, int range) {
    Jet j;
    j.v = random_element(rng, n, grade_max, range);
    if (order >= 1)
        for (int m = 0; m < D; ++m) j.d.push_back(random_element(rng, n, grade_max, range));
    if (order >= 2) {
        j.dd.assign(D, std::vector<EV>(D, EV(n)));
        for (int m = 0; m < D; ++m)
            for (int k = m; k < D; ++k) j.dd[m][k] = j.dd[k][m] = random_element(rng, n, grade_max, range);
    }
    return j;
}

Jet covariant(const FiberConfig& f, int mu, const Jet& F) {
    if (F.order() < 1) throw std::invalid_argument("covariant: jet has no derivatives");
    Jet out;
    out.v = F.d[mu] + derivation(f.a[mu], F.v);
    if (F.order() >= 2) {
        for (int l = 0; l < f.D(); ++l)
            out.d.push_back(F.dd[l][mu] + derivation(f.a[mu], F.d[l]) +
                            derivation(f.r0[l][mu] * Cq(Rational(1, 2)), F.v));
    }
    return out;
}

Jet iota(const FiberConfig& f, const SpinorJet& phi, const Jet& F) {
    const int D = f.D();
    const int N = static_cast<int>(f.bundle.dim());
    Jet out;
    out.v = EV(N);
    const bool first = F.order() >= 2;
    if (first) out.d.assign(D, EV(N));
    for (int n = 0; n < D; ++n) {
        Jet dn = covariant(f, n, F);
        QMat gu = gam_up(f.bundle, n);
        out.v += wedge(gu.apply(phi.v), dn.v);
        if (first)
            for (int l = 0; l < D; ++l)
                out.d[l] += wedge(gu.apply(phi.d[l]), dn.v) + wedge(gu.apply(phi.v), dn.d[l]);
    }
    return out;
}

Jet contract(const Bundle& b, const SpinorJet& phi, const Jet& F) {
    Jet out;
    out.v = contraction(b, phi.v, F.v);
    if (F.order() >= 1)
        for (std::size_t l = 0; l < F.d.size(); ++l)
            out.d.push_back(contraction(b, phi.d[l], F.v) + contraction(b, phi.v, F.d[l]));
    return out;
}

Jet act(const QMat& phi, const Jet& F) {
    Jet out;
    out.v = derivation(phi, F.v);
    for (const auto& x : F.d) out.d.push_back(derivation(phi, x));
    for (const auto& row : F.dd) {
        out.dd.emplace_back();
        for (const auto& x : row) out.dd.back().push_back(derivation(phi, x));
    }
    return out;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet out;
    out.v = a.v - b.v;
    for (std::size_t i = 0; i < std::min(a.d.size(), b.d.size()); ++i) out.d.push_back(a.d[i] - b.d[i]);
    return out;
}

bool value_zero(const Jet& j) { return j.v.is_zero(); }

ExteriorElement apply_b(const BTerm& b, const ExteriorElement& F) {
    EV out(F.generators());
    for (const auto& [I, m] : b) out += wedge(EV::basis(F.generators(), I), derivation(m, F));
    return out;
}

ExteriorElement apply_d(const FiberConfig& f, const DTerm& d, const Jet& F) {
    EV out(F.v.generators());
    for (int n = 0; n < f.D(); ++n) {
        if (d[n].is_zero()) continue;
        out += wedge(d[n], covariant(f, n, F).v * gsign(f.bundle, n));
    }
    return out;
}

// Operator relations --------------------------------------------------------

CommutationReport commutation_check(const FiberConfig& f, const std::vector<QVec>& spinors, std::uint64_t seed,
                                    int samples) {
    std::mt19937_64 rng(seed);
    const int D = f.D();
    const int N = static_cast<int>(f.bundle.dim());
    const auto R = f.curvature();
    const auto ac = f.a_c();
    CommutationReport rep;
    for (int s = 0; s < samples; ++s) {
        Jet F = random_jet(rng, N, D, 2);
        SpinorJet phi{random_vec(rng, N), {}}, psi{random_vec(rng, N), {}};
        for (int m = 0; m < D; ++m) {
            phi.d.push_back(random_vec(rng, N));
            psi.d.push_back(random_vec(rng, N));
        }
        QMat Phi = random_mat(rng, N);

        for (int m = 0; m < D; ++m) {
            Jet dm = covariant(f, m, F);
            for (int n = 0; n < D; ++n) {
                EV lhs = covariant(f, m, covariant(f, n, F)).v - covariant(f, n, dm).v;
                if (!(lhs == derivation(R[m][n], F.v))) rep.covariant_covariant = false;
            }
            // [D_μ, Φ] with ∂Φ = 0 at the point
            EV lhs = covariant(f, m, act(Phi, F)).v - derivation(Phi, dm.v);
            if (!(lhs == derivation(commutator(f.a[m], Phi), F.v))) rep.covariant_endo = false;
            // [D_μ, j(φ)] = j(D^C_μφ), D^C_μφ = ∂_μφ - A^C_μφ
            EV lc = covariant(f, m, contract(f.bundle, phi, F)).v - contraction(f.bundle, phi.v, dm.v);
            QVec dcphi = axpy(Cq(-1), ac[m].apply(phi.v), phi.d[m]);
            if (!(lc == contraction(f.bundle, dcphi, F.v))) rep.covariant_contraction = false;
        }
        EV jj = contraction(f.bundle, phi.v, contraction(f.bundle, psi.v, F.v)) +
                contraction(f.bundle, psi.v, contraction(f.bundle, phi.v, F.v));
        if (!jj.is_zero()) rep.contraction_contraction = false;
        EV ec = derivation(Phi, contraction(f.bundle, phi.v, F.v)) - contraction(f.bundle, phi.v, derivation(Phi, F.v));
        QVec phic = f.bundle.adjoint(Phi).apply(phi.v);
        if (!(ec == contraction(f.bundle, phic, F.v) * Cq(-1))) rep.endo_contraction = false;
    }
    // [ı(φ), ı(ψ)] on K: φ, ψ parallel to first order
    std::vector<SpinorJet> ks;
    for (const auto& k : spinors) ks.push_back(parallel_spinor_jet(f, k));
    for (int s = 0; s < samples; ++s) {
        Jet F = random_jet(rng, N, D, 2);
        for (std::size_t p = 0; p < ks.size(); ++p)
            for (std::size_t q = p; q < ks.size(); ++q) {
                EV lhs = iota(f, ks[p], iota(f, ks[q], F)).v + iota(f, ks[q], iota(f, ks[p], F)).v;
                EV rhs = apply_b(b_term(f, ks[p].v, ks[q].v), F.v) +
                         apply_d(f, d_term(f, ks[p].v, ks[q].v), F) * Cq(Rational(1, 2));
                if (!(lhs == rhs)) rep.bracket_identity = false;
            }
    }
    return rep;
}

FlatnessReport flatness_check(const FiberConfig& f, const QVec& eta, std::uint64_t seed, int samples) {
    if (!in_parallel_kernel(f, eta)) throw std::invalid_argument("flatness: spinor is not parallel (R^C does not kill it)");
    FlatnessReport rep;
    rep.strongly_torsion_free = true;
    for (const auto& row : f.torsion())
        for (const auto& t : row)
            if (!is_zero(t.apply(eta))) rep.strongly_torsion_free = false;
    rep.b_zero = is_zero(b_term(f, eta, eta));
    rep.d_zero = is_zero(d_term(f, eta, eta));
    std::mt19937_64 rng(seed);
    const int N = static_cast<int>(f.bundle.dim());
    SpinorJet e = parallel_spinor_jet(f, eta);
    rep.iota_squared_zero = true;
    for (int s = 0; s < samples; ++s) {
        Jet F = random_jet(rng, N, f.D(), 2);
        if (!iota(f, e, iota(f, e, F)).v.is_zero()) rep.iota_squared_zero = false;
    }
    return rep;
}

// Pure spinors ----------------------------------------------------------------

namespace {

// Σ over permutations of the unbarred labels: ε_{a_1..a_n} U^{a_1}⋯U^{a_{n-2}}(1 - (-)^n wγ*) ⊗ X^{a_{n-1}a_n}
template <class Leaf>
QMat epsilon_sum(const ComplexFrame& fr, Leaf leaf) {
    const int n = static_cast<int>(fr.unbarred.size());
    const std::size_t N = fr.star.rows();
    const int w = fr.eta.chirality;
    QMat proj = QMat::identity(N) - fr.star * Cq((n % 2 ? -1 : 1) * w);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::optional<QMat> out;
    do {
        QMat left = QMat::identity(N);
        for (int i = 0; i < n - 2; ++i) left = left * fr.unbarred[perm[i]];
        left = left * proj * Cq(perm_sign(perm));
        QMat term = kron(left, leaf(perm[n - 2], perm[n - 1]));
        out = out ? *out + term : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *out;
}

}  // namespace

ComplexFrame complex_frame(const GammaRep& rep, int chirality) {
    ComplexFrame fr;
    fr.eta = make_pure_spinor(rep, chirality);
    fr.star = rep.star().dense();
    const int D = rep.D(), n = D / 2;
    fr.c.assign(D, std::vector<Cq>(n, Cq(0)));
    for (int a = 0; a < n; ++a) {
        QMat ga = rep.gamma_up(a).dense();
        QMat gb = rep.gamma_up(a + n).dense();
        // null basis N_a = γ^a + p γ^{a+n}, unbarred U_a = γ^a - p γ^{a+n}
        QMat diff = fr.eta.null_basis[a] - ga;
        Cq p(0);
        for (std::size_t i = 0; i < gb.rows() && p.is_zero(); ++i)
            for (std::size_t j = 0; j < gb.cols(); ++j)
                if (!gb(i, j).is_zero()) {
                    p = diff(i, j) / gb(i, j);
                    break;
                }
        fr.unbarred.push_back(ga - gb * p);
        // γ^a = ½(U_a + N_a), γ^{a+n} = (N_a - U_a)/(2p), and N_a η = 0
        fr.c[a][a] = Cq(Rational(1, 2));
        fr.c[a + n][a] = Cq(-1) / (p * Cq(2));
    }
    return fr;
}

Cq frame_component(const ComplexFrame& fr, const std::vector<std::vector<Cq>>& x, int a, int b) {
    Cq s(0);
    const std::size_t D = fr.c.size();
    for (std::size_t m = 0; m < D; ++m)
        for (std::size_t n = 0; n < D; ++n) s += fr.c[m][a] * fr.c[n][b] * x[m][n];
    return s;
}

QMat frame_component(const ComplexFrame& fr, const EndArray& x, int a, int b) {
    const std::size_t D = fr.c.size();
    QMat s = QMat::zero(x[0][0].rows(), x[0][0].cols());
    for (std::size_t m = 0; m < D; ++m)
        for (std::size_t n = 0; n < D; ++n) {
            Cq w = fr.c[m][a] * fr.c[n][b];
            if (!w.is_zero()) s = s + x[m][n] * w;
        }
    return s;
}

QMat pure_b_condition(const ComplexFrame& fr, const EndArray& R) {
    return epsilon_sum(fr, [&](int a, int b) { return frame_component(fr, R, a, b); });
}

std::vector<QMat> pure_d_condition(const ComplexFrame& fr, const KForm& F) {
    const int D = static_cast<int>(fr.c.size());
    std::vector<QMat> out;
    for (int i = 0; i < D; ++i) {
        std::vector<std::vector<Cq>> x(D, std::vector<Cq>(D, Cq(0)));
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n) x[m][n] = F.at({i, m, n});
        out.push_back(epsilon_sum(fr, [&](int a, int b) {
            QMat s = QMat::zero(1, 1);
            s(0, 0) = frame_component(fr, x, a, b);
            return s;
        }));
    }
    return out;
}

namespace {

// Basis of the subspace of k-forms (as component vectors over sorted subsets) with
// vanishing unbarred components X^{..ab} for every choice of the remaining indices.
std::vector<QVec> unbarred_free_forms(const ComplexFrame& fr, int D, int k) {
    auto subs = subsets(D, k);
    const int n = static_cast<int>(fr.unbarred.size());
    std::vector<QVec> rows;
    auto lead = k == 3 ? subsets(D, 1) : std::vector<std::vector<int>>{{}};
    for (const auto& l : lead)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                QVec row(subs.size());
                for (std::size_t s = 0; s < subs.size(); ++s) {
                    KForm e{k, D, {{subs[s], Cq(1)}}};
                    std::vector<std::vector<Cq>> x(D, std::vector<Cq>(D, Cq(0)));
                    for (int m = 0; m < D; ++m)
                        for (int q = 0; q < D; ++q) {
                            std::vector<int> idx = l;
                            idx.push_back(m);
                            idx.push_back(q);
                            x[m][q] = e.at(idx);
                        }
                    row[s] = frame_component(fr, x, a, b);
                }
                rows.push_back(row);
            }
    QMat m = QMat::zero(rows.size(), subs.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t s = 0; s < subs.size(); ++s) m(r, s) = rows[r][s];
    return nullspace(m);
}

Cq random_cq(std::mt19937_64& rng, int range = 2) {
    std::uniform_int_distribution<int> val(-range, range);
    int re = val(rng), im = val(rng);
    return Cq(re) + Cq::i() * Cq(im);
}

// (*X)_{μν} = ½ε_{μνρσ}X^{ρσ} in D = 4 (Riemannian)
std::vector<std::vector<Cq>> hodge2(const std::vector<std::vector<Cq>>& x) {
    std::vector<std::vector<Cq>> out(4, std::vector<Cq>(4, Cq(0)));
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            for (int r = 0; r < 4; ++r)
                for (int s = 0; s < 4; ++s) {
                    int e = perm_sign({m, n, r, s});
                    if (e) out[m][n] += x[r][s] * Cq(Rational(e, 2));
                }
    return out;
}

// basis of Λ²_± in D = 4
std::vector<std::vector<std::vector<Cq>>> dual_basis(int sign) {
    std::vector<std::vector<std::vector<Cq>>> out;
    for (const auto& p : subsets(4, 2)) {
        std::vector<std::vector<Cq>> x(4, std::vector<Cq>(4, Cq(0)));
        x[p[0]][p[1]] = Cq(1);
        x[p[1]][p[0]] = Cq(-1);
        auto h = hodge2(x);
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) x[m][n] += h[m][n] * Cq(sign);
        out.push_back(x);
    }
    return out;
}

bool direct_b_zero(const Bundle& b, const EndArray& R, const QVec& eta) {
    return is_zero(b_term_array(b, R, eta, eta));
}

bool all_zero(const std::vector<QMat>& v) {
    return std::all_of(v.begin(), v.end(), [](const QMat& m) { return m.is_zero(); });
}

}  // namespace

PureSpinorReport pure_spinor_check(const ChargeConjugation& conj, int chirality, std::uint64_t seed, int samples) {
    const GammaRep& rep = conj.rep();
    const int D = rep.D();
    const std::size_t N = rep.dim();
    ComplexFrame fr = complex_frame(rep, chirality);
    const QVec& eta = fr.eta.spinor;
    Bundle bundle(conj);
    std::mt19937_64 rng(seed);
    PureSpinorReport rep_out;

    auto pairs = subsets(D, 2);
    auto free2 = unbarred_free_forms(fr, D, 2);
    auto free3 = unbarred_free_forms(fr, D, 3);

    for (int s = 0; s < samples; ++s) {
        const bool generic = s % 2 == 0;
        // curvature: R_{μν} = Σ_p X_p(μν) M_p
        EndArray R(D, std::vector<QMat>(D, QMat::zero(N, N)));
        auto add_form = [&](const QVec& comps) {
            QMat M = random_mat(rng, N);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                if (comps[p].is_zero()) continue;
                int m = pairs[p][0], n = pairs[p][1];
                R[m][n] = R[m][n] + M * comps[p];
                R[n][m] = R[n][m] - M * comps[p];
            }
        };
        if (generic) {
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                QVec e(pairs.size());
                e[p] = Cq(1);
                add_form(e);
            }
        } else {
            for (const auto& v : free2) add_form(v);
        }
        PureSpinorSample bs;
        bs.generic = generic;
        bs.direct_zero = direct_b_zero(bundle, R, eta);
        bs.condition_zero = pure_b_condition(fr, R).is_zero();
        rep_out.b_samples.push_back(bs);
        if (bs.direct_zero != bs.condition_zero) rep_out.b_equivalent = false;

        // metric 3-form connection
        KForm F{3, D, {}};
        auto subs3 = subsets(D, 3);
        if (generic) {
            for (const auto& I : subs3) F.comp[I] = random_cq(rng);
        } else {
            for (const auto& v : free3) {
                Cq r = random_cq(rng);
                for (std::size_t t = 0; t < subs3.size(); ++t)
                    if (!v[t].is_zero()) F.comp[subs3[t]] += v[t] * r;
            }
        }
        SpinorConnection conn = three_form_connection(conj, F);
        FiberConfig fc = FiberConfig::flat(conn);
        PureSpinorSample ds;
        ds.generic = generic;
        ds.direct_zero = is_zero(d_term(fc, eta, eta));
        ds.condition_zero = all_zero(pure_d_condition(fr, F));
        rep_out.d_samples.push_back(ds);
        if (ds.direct_zero != ds.condition_zero) rep_out.d_equivalent = false;
    }

    if (D == 4) {
        auto dual_r = [&](int sign) {
            EndArray R(4, std::vector<QMat>(4, QMat::zero(N, N)));
            for (const auto& x : dual_basis(sign)) {
                QMat M = random_mat(rng, N);
                for (int m = 0; m < 4; ++m)
                    for (int n = 0; n < 4; ++n)
                        if (!x[m][n].is_zero()) R[m][n] = R[m][n] + M * x[m][n];
            }
            return R;
        };
        rep_out.b_zero_selfdual = direct_b_zero(bundle, dual_r(1), eta);
        rep_out.b_zero_antiselfdual = direct_b_zero(bundle, dual_r(-1), eta);

        // T_{μνκ} with (μκ) in Λ²_± and ν free
        auto dual_t = [&](int sign) {
            std::vector<std::vector<std::vector<Cq>>> T(4, std::vector<std::vector<Cq>>(4, std::vector<Cq>(4, Cq(0))));
            for (const auto& x : dual_basis(sign))
                for (int n = 0; n < 4; ++n) {
                    Cq r = random_cq(rng);
                    for (int m = 0; m < 4; ++m)
                        for (int k = 0; k < 4; ++k) T[m][n][k] += x[m][k] * r;
                }
            return T;
        };
        auto t_zero = [&](const auto& T) {
            for (int n = 0; n < 4; ++n) {
                EV sum(static_cast<int>(N));
                for (int m = 0; m < 4; ++m)
                    for (int k = 0; k < 4; ++k)
                        if (!T[m][n][k].is_zero())
                            sum += wedge(EV::vector(gam_up(bundle, m).apply(eta)),
                                         EV::vector(gam_up(bundle, k).apply(eta))) *
                                   T[m][n][k];
                if (!sum.is_zero()) return false;
            }
            return true;
        };
        // *π1(T) against π3(T); π1_μ = Σ_ν T_{μνν}, π3 the full antisymmetrisation
        auto ratio = [&](const auto& T, bool& exact) {
            std::vector<Cq> p1(4, Cq(0));
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) p1[m] += T[m][n][n];
            std::optional<Cq> lam;
            exact = true;
            for (const auto& I : subsets(4, 3)) {
                Cq star(0), p3(0);
                for (int l = 0; l < 4; ++l) {
                    int e = perm_sign({I[0], I[1], I[2], l});
                    if (e) star += p1[l] * Cq(e);
                }
                std::vector<int> p = {0, 1, 2};
                do {
                    p3 += T[I[p[0]]][I[p[1]]][I[p[2]]] * Cq(Rational(perm_sign(p), 6));
                } while (std::next_permutation(p.begin(), p.end()));
                if (p3.is_zero()) {
                    if (!star.is_zero()) exact = false;
                    continue;
                }
                Cq q = star / p3;
                if (lam && !(*lam == q)) exact = false;
                lam = q;
            }
            if (!lam || !lam->im.is_zero()) exact = false;
            return lam ? lam->re : Rational(0);
        };
        auto tp = dual_t(1), tm = dual_t(-1);
        rep_out.t_zero_selfdual = t_zero(tp);
        rep_out.t_zero_antiselfdual = t_zero(tm);
        bool ep = false, em = false;
        rep_out.dual_ratio = ratio(tp, ep);
        Rational rm = ratio(tm, em);
        rep_out.dual_ratio_exact = ep;
        rep_out.dual_ratio_opposite = em && rm == -rep_out.dual_ratio;
    }
    return rep_out;
}

}  // namespace spt
