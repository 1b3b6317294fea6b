#include "spintorsion/conjugation.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace spt {

namespace {

int symmetry_of(const QMat& m) {
    QMat t = m.transpose();
    if (t == m) return 1;
    if (t == -m) return -1;
    return 0;
}

}  // namespace

std::vector<QMat> intertwiners(const GammaRep& rep, int s) {
    const std::size_t n = rep.dim();
    const std::size_t N = n * n;
    // edge a -- b with x_a = i^{ph} x_b
    struct Edge {
        std::size_t to;
        int ph;
    };
    std::vector<std::vector<Edge>> adj(N);
    const int sph = s > 0 ? 0 : 2;
    for (int mu = 0; mu < rep.D(); ++mu) {
        const Mono& g = rep.gamma(mu);
        std::vector<std::size_t> inv(n);
        for (std::size_t r = 0; r < n; ++r) inv[g.col[r]] = r;
        // (Cγ)(i,k) = C(i,inv k) u(inv k);  (γᵀC)(i,k) = u(inv i) C(inv i, k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t a = i * n + inv[k];
                std::size_t b = inv[i] * n + k;
                int ph = sph + g.ph[inv[i]] - g.ph[inv[k]];
                ph = ((ph % 4) + 4) % 4;
                adj[a].push_back({b, ph});
                adj[b].push_back({a, (4 - ph) % 4});
            }
    }
    std::vector<int> phase(N, -1);
    std::vector<QMat> out;
    for (std::size_t root = 0; root < N; ++root) {
        if (phase[root] >= 0) continue;
        std::vector<std::size_t> comp{root};
        std::deque<std::size_t> q{root};
        phase[root] = 0;
        bool ok = true;
        while (!q.empty()) {
            std::size_t a = q.front();
            q.pop_front();
            for (const auto& e : adj[a]) {
                int want = (phase[a] + 4 - e.ph) % 4;  // x_b = x_a / i^{ph}
                if (phase[e.to] < 0) {
                    phase[e.to] = want;
                    comp.push_back(e.to);
                    q.push_back(e.to);
                } else if (phase[e.to] != want) {
                    ok = false;
                }
            }
        }
        if (!ok) continue;
        QMat c(n, n);
        for (std::size_t a : comp) c(a / n, a % n) = ipow(phase[a]);
        out.push_back(std::move(c));
    }
    return out;
}

ChargeConjugation::ChargeConjugation(std::shared_ptr<const GammaRep> rep, QMat c)
    : rep_(std::move(rep)), c_(std::move(c)) {
    cinv_ = inverse(c_);
    const int D = rep_->D();
    for (int k = 0; k <= D; ++k) {
        std::vector<int> I(k);
        for (int a = 0; a < k; ++a) I[a] = a;
        int d = symmetry_of(mul(c_, rep_->product(I)));
        if (d == 0) throw std::logic_error("charge conjugation: C γ^(k) has no transpose symmetry");
        // redundancy: every index set of the same degree must agree
        if (D <= 6)
            for (const auto& J : subsets(D, k))
                if (symmetry_of(mul(c_, rep_->product(J))) != d)
                    throw std::logic_error("charge conjugation: Δ_k depends on the index set");
        delta_.push_back(d);
    }
    QMat cg = mul(c_, rep_->gamma(0));
    QMat gtc = mul(rep_->gamma(0).transpose(), c_);
    sign_ = cg == gtc ? 1 : (cg == -gtc ? -1 : 0);
}

Cq ChargeConjugation::pair(const QVec& phi, const QVec& psi) const {
    QVec cpsi = c_.apply(psi);
    Cq s;
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (!phi[i].is_zero() && !cpsi[i].is_zero()) s += phi[i] * cpsi[i];
    return s;
}

std::vector<int> realizable_delta0(const GammaRep& rep) {
    std::vector<int> out;
    for (int s : {1, -1})
        for (const auto& c : intertwiners(rep, s)) {
            int d = symmetry_of(c);
            if (d != 0 && std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

ChargeConjugation build_conjugation(std::shared_ptr<const GammaRep> rep, int delta0) {
    if (delta0 != 1 && delta0 != -1) throw std::invalid_argument("Δ0 must be +1 or -1");
    for (int s : {1, -1}) {
        auto cs = intertwiners(*rep, s);
        if (cs.size() > 1) throw std::logic_error("intertwiner space is not one-dimensional");
        if (!cs.empty() && symmetry_of(cs.front()) == delta0) return ChargeConjugation(rep, cs.front());
    }
    std::ostringstream os;
    os << "Δ0 = " << (delta0 > 0 ? "+1" : "-1") << " is not realizable for signature ("
       << rep->signature().t << "," << rep->signature().s << "); realizable:";
    for (int d : realizable_delta0(*rep)) os << " " << (d > 0 ? "+1" : "-1");
    throw UnavailableError(os.str());
}

QMat adjoint(const ChargeConjugation& conj, const QMat& phi) {
    if (phi.rows() != conj.c().rows() || phi.cols() != conj.c().cols())
        throw std::invalid_argument("adjoint: dimension mismatch");
    return conj.c_inv() * phi.transpose() * conj.c();
}

int delta_k(const ChargeConjugation& conj, int k) { return conj.delta(k); }

int delta_formula(int d0, int d1, int k) {
    int s = ((k * (k - 1)) / 2) % 2 ? -1 : 1;
    if ((k + 1) % 2) s *= d0;
    if (k % 2) s *= d1;
    return s;
}

AdjointSplit adjoint_split(const ChargeConjugation& conj) {
    AdjointSplit a;
    for (int k = 0; k <= conj.rep().D(); ++k)
        (conj.delta0() * conj.delta(k) > 0 ? a.plus : a.minus).push_back(k);
    return a;
}

SymChirTable symmetry_chirality_table(const ChargeConjugation& conj) {
    const GammaRep& rep = conj.rep();
    if (!rep.has_star()) throw std::invalid_argument("symmetry/chirality table needs even dimension");
    QMat st = rep.star().dense();
    SymChirTable t;
    for (int k = 0; k <= rep.D(); ++k) {
        std::vector<int> I(k);
        for (int a = 0; a < k; ++a) I[a] = a;
        QMat m = mul(conj.c(), rep.product(I));
        // γ*ᵀ M = -M γ* means equal chiralities pair to zero
        bool chiral = st.transpose() * m == -(m * st);
        t.rows.push_back({k, conj.delta(k), chiral});
    }
    t.chiral = t.rows.front().chiral;
    return t;
}

std::vector<int> parallel_span_check(const ChargeConjugation& conj) {
    std::vector<int> out;
    for (int k = 0; k <= conj.rep().D(); ++k)
        if (conj.delta(k) * conj.delta0() == -1) out.push_back(k);
    return out;
}

int TwistedConjugation::delta(int k) const { return pauli_set().eps_k[twist] * base.delta(k); }

TwistedConjugation twist_conjugation(const ChargeConjugation& conj, int i) {
    if (i < 0 || i > 3) throw std::invalid_argument("twist label must be 0..3");
    return TwistedConjugation{conj, i, kron(conj.c(), pauli_set().tau[i])};
}

QMat adjoint(const TwistedConjugation& conj, const QMat& phi) {
    QMat cinv = kron(conj.base.c_inv(), inverse(pauli_set().tau[conj.twist]));
    return cinv * phi.transpose() * conj.c;
}

}  // namespace spt
