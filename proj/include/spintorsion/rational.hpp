#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spt {

// Exact rational with 64-bit numerator/denominator. Intermediate products
// go through __int128; anything that does not fit back throws.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : n_(n), d_(1) {}
    Rational(std::int64_t n, std::int64_t d) { set(n, d); }

    std::int64_t num() const { return n_; }
    std::int64_t den() const { return d_; }
    bool is_zero() const { return n_ == 0; }
    double to_double() const { return static_cast<double>(n_) / static_cast<double>(d_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.d_ == 1 && b.d_ == 1) return from128(static_cast<__int128>(a.n_) + b.n_, 1);
        return from128(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                       static_cast<__int128>(a.d_) * b.d_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        if (a.d_ == 1 && b.d_ == 1) return from128(static_cast<__int128>(a.n_) - b.n_, 1);
        return from128(static_cast<__int128>(a.n_) * b.d_ - static_cast<__int128>(b.n_) * a.d_,
                       static_cast<__int128>(a.d_) * b.d_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.n_ == 0 || b.n_ == 0) return Rational();
        if (a.d_ == 1 && b.d_ == 1) return from128(static_cast<__int128>(a.n_) * b.n_, 1);
        return from128(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.n_ == 0) throw std::domain_error("Rational: division by zero");
        return from128(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
    }
    Rational operator-() const { return from128(-static_cast<__int128>(n_), d_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
    }

    std::string str() const {
        return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    std::int64_t n_ = 0;
    std::int64_t d_ = 1;

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Rational from128(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (d != 1) {
            __int128 g = gcd128(n, d);
            if (g > 1) {
                n /= g;
                d /= g;
            }
        }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: 64-bit overflow");
        Rational r;
        r.n_ = static_cast<std::int64_t>(n);
        r.d_ = n == 0 ? 1 : static_cast<std::int64_t>(d);
        return r;
    }
    void set(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        *this = from128(n, d);
    }
};

// Gaussian rational a + b i.
struct Cq {
    Rational re, im;

    constexpr Cq() = default;
    constexpr Cq(std::int64_t r) : re(r) {}
    Cq(Rational r) : re(r) {}
    Cq(Rational r, Rational i) : re(r), im(i) {}

    static Cq i() { return Cq(Rational(0), Rational(1)); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend Cq operator+(const Cq& a, const Cq& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cq operator-(const Cq& a, const Cq& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cq operator*(const Cq& a, const Cq& b) {
        if (a.im.is_zero() && b.im.is_zero()) return {a.re * b.re, Rational()};
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cq operator/(const Cq& a, const Cq& b) {
        Rational nrm = b.re * b.re + b.im * b.im;
        if (nrm.is_zero()) throw std::domain_error("Cq: division by zero");
        Cq num = a * b.conj();
        return {num.re / nrm, num.im / nrm};
    }
    Cq operator-() const { return {-re, -im}; }
    Cq conj() const { return {re, -im}; }
    Cq& operator+=(const Cq& o) { return *this = *this + o; }
    Cq& operator-=(const Cq& o) { return *this = *this - o; }
    Cq& operator*=(const Cq& o) { return *this = *this * o; }
    Cq& operator/=(const Cq& o) { return *this = *this / o; }
    friend bool operator==(const Cq& a, const Cq& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cq& a, const Cq& b) { return !(a == b); }

    std::string str() const {
        if (im.is_zero()) return re.str();
        if (re.is_zero()) return im.str() + "i";
        return "(" + re.str() + (im < Rational(0) ? "" : "+") + im.str() + "i)";
    }
    friend std::ostream& operator<<(std::ostream& os, const Cq& c) { return os << c.str(); }
};

// i^k for k mod 4
inline Cq ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return Cq(1);
        case 1: return Cq::i();
        case 2: return Cq(-1);
        default: return -Cq::i();
    }
}

}  // namespace spt
