#include "spintorsion/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace spt {

QMat QMat::identity(std::size_t n) {
    QMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Cq(1);
    return m;
}

bool QMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Cq& x) { return x.is_zero(); });
}

QMat QMat::transpose() const {
    QMat t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Cq QMat::trace() const {
    Cq s;
    for (std::size_t i = 0; i < std::min(r_, c_); ++i) s += (*this)(i, i);
    return s;
}

QVec QMat::apply(const QVec& v) const {
    if (v.size() != c_) throw std::invalid_argument("QMat::apply: dimension mismatch");
    QVec out(r_);
    for (std::size_t i = 0; i < r_; ++i) {
        Cq s;
        for (std::size_t j = 0; j < c_; ++j) {
            const Cq& x = (*this)(i, j);
            if (!x.is_zero() && !v[j].is_zero()) s += x * v[j];
        }
        out[i] = s;
    }
    return out;
}

QMat& QMat::operator+=(const QMat& o) {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("QMat +: dimension mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (!o.a_[k].is_zero()) a_[k] += o.a_[k];
    return *this;
}

QMat& QMat::operator-=(const QMat& o) {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("QMat -: dimension mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (!o.a_[k].is_zero()) a_[k] -= o.a_[k];
    return *this;
}

QMat& QMat::operator*=(const Cq& s) {
    for (auto& x : a_)
        if (!x.is_zero()) x *= s;
    return *this;
}

QMat operator*(const QMat& a, const QMat& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("QMat *: dimension mismatch");
    QMat out(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
        for (std::size_t k = 0; k < a.c_; ++k) {
            const Cq& x = a(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.c_; ++j) {
                const Cq& y = b(k, j);
                if (!y.is_zero()) out(i, j) += x * y;
            }
        }
    return out;
}

std::string QMat::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < r_; ++i) {
        for (std::size_t j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j);
        os << "\n";
    }
    return os.str();
}

QMat kron(const QMat& a, const QMat& b) {
    QMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (!b(k, l).is_zero()) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return out;
}

QMat commutator(const QMat& a, const QMat& b) { return a * b - b * a; }
QMat anticommutator(const QMat& a, const QMat& b) { return a * b + b * a; }

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Cq inv = Cq(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j)
            if (!m(row, j).is_zero()) m(row, j) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            Cq f = m(r, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) m(r, j) -= f * m(row, j);
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

}  // namespace

std::size_t rank(const QMat& m) {
    QMat w = m;
    return rref(w).size();
}

std::vector<QVec> nullspace(const QMat& m) {
    QMat w = m;
    auto piv = rref(w);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<QVec> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_piv[free]) continue;
        QVec v(m.cols());
        v[free] = Cq(1);
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -w(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

QMat inverse(const QMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square");
    std::size_t n = m.rows();
    QMat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = Cq(1);
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
    QMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

bool solve(const QMat& m, const QVec& b, QVec& x) {
    std::size_t n = m.cols();
    QMat aug(m.rows(), n + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == n) return false;
    x.assign(n, Cq());
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, n);
    return true;
}

CMat to_complex(const QMat& m) {
    CMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = {m(i, j).re.to_double(), m(i, j).im.to_double()};
    return out;
}

CVec to_complex(const QVec& v) {
    CVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out(i) = {v[i].re.to_double(), v[i].im.to_double()};
    return out;
}

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::size_t rank_tol(const CMat& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(m);
    cod.setThreshold(tol);
    return cod.rank();
}

CMat nullspace_tol(const CMat& m, double tol) {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    double scale = s.size() ? std::max(1.0, s(0)) : 1.0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * scale) ++r;
    return svd.matrixV().rightCols(m.cols() - r);
}

QVec axpy(const Cq& a, const QVec& x, const QVec& y) {
    QVec out = y;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) out[i] += a * x[i];
    return out;
}

bool is_zero(const QVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Cq& x) { return x.is_zero(); });
}

Mono Mono::identity(std::size_t n) {
    Mono m;
    m.col.resize(n);
    m.ph.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) m.col[i] = static_cast<int>(i);
    return m;
}

Mono Mono::transpose() const {
    Mono t;
    t.col.resize(dim());
    t.ph.resize(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        t.col[col[i]] = static_cast<int>(i);
        t.ph[col[i]] = ph[i];
    }
    return t;
}

Mono Mono::times_phase(int k) const {
    Mono m = *this;
    for (auto& p : m.ph) p = static_cast<unsigned char>((p + ((k % 4) + 4)) % 4);
    return m;
}

QMat Mono::dense() const {
    QMat m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) m(i, col[i]) = ipow(ph[i]);
    return m;
}

CMat Mono::cdense() const {
    static const std::complex<double> u[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    CMat m = CMat::Zero(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) m(i, col[i]) = u[ph[i]];
    return m;
}

QVec Mono::apply(const QVec& v) const {
    QVec out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = ipow(ph[i]) * v[col[i]];
    return out;
}

Cq Mono::entry(std::size_t i, std::size_t j) const {
    return static_cast<std::size_t>(col[i]) == j ? ipow(ph[i]) : Cq();
}

Mono operator*(const Mono& a, const Mono& b) {
    Mono m;
    m.col.resize(a.dim());
    m.ph.resize(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        int k = a.col[i];
        m.col[i] = b.col[k];
        m.ph[i] = static_cast<unsigned char>((a.ph[i] + b.ph[k]) % 4);
    }
    return m;
}

QMat mul(const Mono& a, const QMat& b) {
    QMat out(a.dim(), b.cols());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Cq u = ipow(a.ph[i]);
        for (std::size_t j = 0; j < b.cols(); ++j) {
            const Cq& y = b(a.col[i], j);
            if (!y.is_zero()) out(i, j) = u * y;
        }
    }
    return out;
}

QMat mul(const QMat& a, const Mono& b) {
    QMat out(a.rows(), b.dim());
    for (std::size_t k = 0; k < b.dim(); ++k) {
        Cq u = ipow(b.ph[k]);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const Cq& x = a(i, k);
            if (!x.is_zero()) out(i, b.col[k]) = x * u;
        }
    }
    return out;
}

void add_scaled(QMat& acc, const Cq& s, const Mono& m) {
    if (s.is_zero()) return;
    for (std::size_t i = 0; i < m.dim(); ++i) acc(i, m.col[i]) += s * ipow(m.ph[i]);
}

std::optional<Mono> as_mono(const QMat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    Mono out;
    out.col.assign(m.rows(), -1);
    out.ph.assign(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Cq& x = m(i, j);
            if (x.is_zero()) continue;
            if (out.col[i] >= 0) return std::nullopt;
            int k = 0;
            while (k < 4 && !(ipow(k) == x)) ++k;
            if (k == 4) return std::nullopt;
            out.col[i] = static_cast<int>(j);
            out.ph[i] = static_cast<unsigned char>(k);
        }
    for (int c : out.col)
        if (c < 0) return std::nullopt;
    return out;
}

Mono kron(const Mono& a, const Mono& b) {
    const std::size_t nb = b.dim();
    Mono m;
    m.col.resize(a.dim() * nb);
    m.ph.resize(a.dim() * nb);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < nb; ++k) {
            m.col[i * nb + k] = static_cast<int>(a.col[i] * nb + b.col[k]);
            m.ph[i * nb + k] = static_cast<unsigned char>((a.ph[i] + b.ph[k]) % 4);
        }
    return m;
}

}  // namespace spt
