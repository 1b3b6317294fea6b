#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spintorsion/rational.hpp"

namespace spt {

using QVec = std::vector<Cq>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Dense exact matrix over Gaussian rationals, row-major.
class QMat {
public:
    QMat() = default;
    QMat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}

    static QMat identity(std::size_t n);
    static QMat zero(std::size_t r, std::size_t c) { return QMat(r, c); }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Cq& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Cq& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool is_zero() const;
    QMat transpose() const;
    Cq trace() const;
    QVec apply(const QVec& v) const;

    QMat& operator+=(const QMat& o);
    QMat& operator-=(const QMat& o);
    QMat& operator*=(const Cq& s);
    friend QMat operator+(QMat a, const QMat& b) { return a += b; }
    friend QMat operator-(QMat a, const QMat& b) { return a -= b; }
    friend QMat operator*(QMat a, const Cq& s) { return a *= s; }
    friend QMat operator*(const Cq& s, QMat a) { return a *= s; }
    friend QMat operator*(const QMat& a, const QMat& b);
    QMat operator-() const { return *this * Cq(-1); }
    friend bool operator==(const QMat& a, const QMat& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    friend bool operator!=(const QMat& a, const QMat& b) { return !(a == b); }

    std::string str() const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Cq> a_;
};

QMat kron(const QMat& a, const QMat& b);
QMat commutator(const QMat& a, const QMat& b);
QMat anticommutator(const QMat& a, const QMat& b);

// Gaussian elimination helpers
std::size_t rank(const QMat& m);
// columns of the result span the right nullspace
std::vector<QVec> nullspace(const QMat& m);
QMat inverse(const QMat& m);  // throws on singular input
// Solve m x = b, nullopt-like: returns false if inconsistent
bool solve(const QMat& m, const QVec& b, QVec& x);

CMat to_complex(const QMat& m);
CVec to_complex(const QVec& v);
double max_abs(const CMat& m);

// Float nullspace / rank via complete orthogonal decomposition
std::size_t rank_tol(const CMat& m, double tol);
CMat nullspace_tol(const CMat& m, double tol);

// v ∈ span? helpers on vector lists
QVec axpy(const Cq& a, const QVec& x, const QVec& y);  // a x + y
bool is_zero(const QVec& v);

// Signed permutation with phases i^ph: row i has its single entry in column col[i].
struct Mono {
    std::vector<int> col;
    std::vector<unsigned char> ph;

    static Mono identity(std::size_t n);
    std::size_t dim() const { return col.size(); }
    Mono transpose() const;
    Mono times_phase(int k) const;  // multiply by i^k
    QMat dense() const;
    CMat cdense() const;
    QVec apply(const QVec& v) const;
    Cq entry(std::size_t i, std::size_t j) const;
    friend Mono operator*(const Mono& a, const Mono& b);
    friend bool operator==(const Mono& a, const Mono& b) { return a.col == b.col && a.ph == b.ph; }
};

// m * mono and mono * m without densifying the monomial
QMat mul(const Mono& a, const QMat& b);
QMat mul(const QMat& a, const Mono& b);
// acc += s * mono
void add_scaled(QMat& acc, const Cq& s, const Mono& m);
// nullopt unless every row has exactly one entry and it is a power of i
std::optional<Mono> as_mono(const QMat& m);
Mono kron(const Mono& a, const Mono& b);

}  // namespace spt
