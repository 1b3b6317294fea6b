#include "spintorsion/fierz.hpp"

#include <stdexcept>

namespace spt {

Cq KForm::at(const std::vector<int>& idx) const {
    auto m = MultiIndex::canonical(idx);
    if (!m) return Cq();
    auto it = comp.find(m->idx);
    if (it == comp.end()) return Cq();
    return m->sign < 0 ? -it->second : it->second;
}

bool KForm::is_zero() const {
    for (const auto& [k, v] : comp)
        if (!v.is_zero()) return false;
    return true;
}

KForm KForm::scaled(const Cq& s) const {
    KForm f = *this;
    for (auto& [k, v] : f.comp) v *= s;
    return f;
}

bool operator==(const KForm& a, const KForm& b) {
    if (a.degree != b.degree || a.D != b.D) return false;
    for (const auto& I : subsets(a.D, a.degree))
        if (a.at(I) != b.at(I)) return false;
    return true;
}

KForm project_ck(const ChargeConjugation& conj, const QVec& phi, const QVec& psi, int k) {
    const GammaRep& rep = conj.rep();
    if (k < 0 || k > rep.D()) throw std::out_of_range("project_ck: degree out of range");
    KForm f{k, rep.D(), {}};
    for (const auto& I : subsets(rep.D(), k)) f.comp[I] = conj.pair(phi, rep.product(I).apply(psi));
    return f;
}

QVec susy_bracket(const ChargeConjugation& conj, const QVec& phi, const QVec& psi) {
    const GammaRep& rep = conj.rep();
    QVec v(rep.D());
    for (int mu = 0; mu < rep.D(); ++mu)
        v[mu] = Cq(2 * rep.signature().g(mu)) * conj.pair(phi, rep.gamma(mu).apply(psi));
    return v;
}

int fierz_top_degree(int D) { return D % 2 == 0 ? D : (D - 1) / 2; }

std::map<std::vector<int>, Cq> fierz_coefficients(const ChargeConjugation& conj, const QVec& phi,
                                                   const QVec& psi) {
    const GammaRep& rep = conj.rep();
    const int d01 = conj.delta0() * conj.delta1();
    const Rational inv_n(1, static_cast<std::int64_t>(rep.dim()));
    std::map<std::vector<int>, Cq> out;
    for (int n = 0; n <= fierz_top_degree(rep.D()); ++n) {
        // the 1/n! cancels against the n! orderings of each sorted index set
        const int sgn = conj.delta0() * ((n % 2 && d01 < 0) ? -1 : 1);
        for (const auto& I : subsets(rep.D(), n))
            out[I] = Cq(sgn) * Cq(inv_n) * conj.pair(phi, rep.product_up(I).apply(psi));
    }
    return out;
}

namespace {

QMat assemble(const GammaRep& rep, const std::map<std::vector<int>, Cq>& coef, bool dual_sign) {
    QMat acc = QMat::zero(rep.dim(), rep.dim());
    for (const auto& [I, c] : coef) {
        Cq s = (dual_sign && I.size() % 2) ? -c : c;
        add_scaled(acc, s, rep.product(I));
    }
    return acc;
}

}  // namespace

QMat fierz_expand(const ChargeConjugation& conj, const QVec& phi, const QVec& psi) {
    return assemble(conj.rep(), fierz_coefficients(conj, phi, psi), true);
}

QMat fierz_expand_literal(const ChargeConjugation& conj, const QVec& phi, const QVec& psi) {
    return assemble(conj.rep(), fierz_coefficients(conj, phi, psi), false);
}

QMat rank_one(const ChargeConjugation& conj, const QVec& phi, const QVec& psi) {
    std::size_t n = phi.size();
    QMat outer(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!phi[i].is_zero() && !psi[j].is_zero()) outer(i, j) = phi[i] * psi[j];
    return outer * conj.c();
}

std::map<std::vector<int>, Cq> trace_coefficients(const GammaRep& rep, const QMat& omega) {
    const Rational inv_n(1, static_cast<std::int64_t>(rep.dim()));
    std::map<std::vector<int>, Cq> out;
    for (int n = 0; n <= fierz_top_degree(rep.D()); ++n) {
        const int sgn = ((n * (n - 1)) / 2) % 2 ? -1 : 1;
        for (const auto& I : subsets(rep.D(), n)) out[I] = Cq(sgn) * Cq(inv_n) * mul(rep.product_up(I), omega).trace();
    }
    return out;
}

PureSpinor make_pure_spinor(const GammaRep& rep, int chirality) {
    if (!rep.has_star()) throw std::invalid_argument("pure spinors need even dimension");
    if (rep.signature().t != 0) throw std::invalid_argument("pure spinors are built for Riemannian signature");
    if (chirality != 1 && chirality != -1) throw std::invalid_argument("chirality must be +1 or -1");
    const int n = rep.D() / 2;
    const std::size_t N = rep.dim();
    for (int flip = 0; flip < 2; ++flip) {
        PureSpinor p;
        for (int a = 0; a < n; ++a) {
            // γ^{ā} = γ^a - iγ^{a+n}; flipping the last pair swaps the complex structure
            Cq ph = (flip && a == n - 1) ? Cq::i() : -Cq::i();
            p.null_basis.push_back(rep.gamma_up(a).dense() + rep.gamma_up(a + n).dense() * ph);
        }
        QMat stack(N * n, N);
        for (int a = 0; a < n; ++a)
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j) stack(a * N + i, j) = p.null_basis[a](i, j);
        auto ker = nullspace(stack);
        if (ker.size() != 1) throw std::logic_error("pure spinor: annihilator kernel is not a line");
        QVec eta = ker.front();
        QVec st = rep.star().apply(eta);
        int w = st == eta ? 1 : (st == QVec(N) ? 0 : (axpy(Cq(1), eta, st) == QVec(N) ? -1 : 0));
        if (w == 0) throw std::logic_error("pure spinor: kernel is not chiral");
        if (w != chirality) continue;
        // scale so the largest component is 1
        std::size_t best = 0;
        Rational bn(-1);
        for (std::size_t i = 0; i < N; ++i) {
            Rational nn = eta[i].re * eta[i].re + eta[i].im * eta[i].im;
            if (bn < nn) {
                bn = nn;
                best = i;
            }
        }
        Cq inv = Cq(1) / eta[best];
        for (auto& x : eta) x *= inv;
        p.spinor = eta;
        p.chirality = w;
        return p;
    }
    throw std::logic_error("pure spinor: requested chirality not reached");
}

std::size_t annihilator_dim(const GammaRep& rep, const QVec& eta) {
    QMat m(rep.dim(), rep.D());
    for (int mu = 0; mu < rep.D(); ++mu) {
        QVec v = rep.gamma(mu).apply(eta);
        for (std::size_t i = 0; i < rep.dim(); ++i) m(i, mu) = v[i];
    }
    return rep.D() - rank(m);
}

std::vector<std::vector<QMat>> wedge_array(const ChargeConjugation& conj, const QVec& eta) {
    const GammaRep& rep = conj.rep();
    const int D = rep.D();
    std::vector<QVec> g(D);
    for (int mu = 0; mu < D; ++mu) g[mu] = rep.gamma_up(mu).apply(eta);
    std::vector<std::vector<QMat>> W(D, std::vector<QMat>(D, QMat::zero(rep.dim(), rep.dim())));
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu)
            if (mu != nu)
                W[mu][nu] = (rank_one(conj, g[mu], g[nu]) - rank_one(conj, g[nu], g[mu])) * Cq(Rational(1, 2));
    return W;
}

WedgeReport wedge_selfdual_check(const ChargeConjugation& conj, const PureSpinor& p) {
    const GammaRep& rep = conj.rep();
    if (!rep.has_star()) throw std::invalid_argument("wedge check needs even dimension");
    const int D = rep.D(), n = D / 2;
    const std::size_t N = rep.dim();
    const QVec& eta = p.spinor;
    auto W = wedge_array(conj, eta);
    WedgeReport r;
    r.zero = true;
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu) r.zero = r.zero && W[mu][nu].is_zero();

    const int d01 = conj.delta0() * conj.delta1();
    const Cq pref = Cq(((n + 1) % 2 && d01 < 0) ? -1 : 1) * Cq(Rational(1, static_cast<std::int64_t>(N)));
    QMat proj = QMat::identity(N) - rep.star().dense() * Cq((n % 2 ? -1 : 1) * p.chirality);
    r.direct_matches_first = r.direct_matches_second = true;
    for (int mu = 0; mu < D; ++mu)
        for (int nu = mu + 1; nu < D; ++nu) {
            QMat e1 = QMat::zero(N, N), e2 = QMat::zero(N, N);
            for (const auto& I : subsets(D, n)) {
                std::vector<int> up{mu, nu};
                up.insert(up.end(), I.begin(), I.end());
                if (perm_sign(up) == 0) continue;
                Cq c = conj.pair(rep.product(I).apply(eta), eta);
                add_scaled(e1, c, rep.product_up(up));
            }
            for (const auto& J : subsets(D, n - 2)) {
                std::vector<int> up{mu, nu};
                up.insert(up.end(), J.begin(), J.end());
                if (perm_sign(up) == 0) continue;
                Cq c = conj.pair(rep.product_up(up).apply(eta), eta);
                add_scaled(e2, c, rep.product(J));
            }
            e1 = e1 * proj * pref;
            e2 = e2 * proj * pref;
            r.direct_matches_first = r.direct_matches_first && e1 == W[mu][nu];
            r.direct_matches_second = r.direct_matches_second && e2 == W[mu][nu];
        }

    if (D == 4) {
        bool sd = true, asd = true;
        for (int rho = 0; rho < 4; ++rho)
            for (int sig = rho + 1; sig < 4; ++sig) {
                QMat dual = QMat::zero(N, N);
                for (int mu = 0; mu < 4; ++mu)
                    for (int nu = 0; nu < 4; ++nu) {
                        int e = epsilon_lower(rep.signature(), {rho, sig, mu, nu});
                        if (e) dual += W[mu][nu] * Cq(Rational(e, 2));
                    }
                QMat lower = W[rho][sig] * Cq(rep.signature().g(rho) * rep.signature().g(sig));
                r.duality_ok = r.duality_ok && dual == lower * Cq(-p.chirality);
                sd = sd && dual == lower;
                asd = asd && dual == -lower;
            }
        r.is_self_dual = sd;
        r.is_anti_self_dual = asd;
    }
    return r;
}

}  // namespace spt
