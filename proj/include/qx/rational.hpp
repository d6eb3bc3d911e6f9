#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qx {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Thin wrapper over GMP's mpq_class that guards division by
/// zero and adds parsing of "A/B", integer and decimal strings.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<long>(n)) {}
    Rational(long long n) : v_(mpz_class(std::to_string(n))) {}
    Rational(const mpz_class& n) : v_(n) {}

    Rational(long long num, long long den)
        : Rational(mpz_class(std::to_string(num)), mpz_class(std::to_string(den))) {}

    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    /// Accepts "A/B", a plain integer, or a decimal such as "0.99".
    static Rational from_string(const std::string& s);

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(mpq_class(v_ / o.v_));
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

    Rational inverse() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1 / v_));
    }

    /// Integer power; negative exponents invert (zero base then throws).
    Rational pow(long long e) const;

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    double to_double() const { return v_.get_d(); }

    /// "A/B" with positive B, or just "A" when B == 1.
    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

private:
    explicit Rational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;
};

/// Extended natural number: a nonnegative integer or +infinity. Used for
/// letter multiplicities, height-function values and q-exponents.
class ExtNat {
public:
    ExtNat() : v_(0) {}
    ExtNat(std::int64_t v) : v_(v) {
        if (v < 0) throw std::domain_error("ExtNat: negative value");
    }
    static ExtNat infinity() { ExtNat e; e.v_ = kInf; return e; }

    bool is_infinite() const { return v_ == kInf; }
    std::int64_t value() const {
        if (is_infinite()) throw std::domain_error("ExtNat: value() of infinity");
        return v_;
    }

    ExtNat operator+(const ExtNat& o) const {
        if (is_infinite() || o.is_infinite()) return infinity();
        return ExtNat(v_ + o.v_);
    }
    ExtNat& operator+=(const ExtNat& o) { *this = *this + o; return *this; }

    /// Saturating subtraction: inf - finite = inf; finite - finite must be
    /// nonnegative; inf - inf is rejected (see height_increment for the one
    /// place that convention is needed).
    ExtNat operator-(const ExtNat& o) const {
        if (o.is_infinite()) {
            throw std::domain_error("ExtNat: cannot subtract infinity");
        }
        if (is_infinite()) return infinity();
        if (v_ < o.v_) throw std::domain_error("ExtNat: negative difference");
        return ExtNat(v_ - o.v_);
    }

    bool operator==(const ExtNat& o) const { return v_ == o.v_; }
    bool operator!=(const ExtNat& o) const { return v_ != o.v_; }
    bool operator<(const ExtNat& o) const {
        if (is_infinite()) return false;
        if (o.is_infinite()) return true;
        return v_ < o.v_;
    }
    bool operator<=(const ExtNat& o) const { return *this == o || *this < o; }
    bool operator>(const ExtNat& o) const { return o < *this; }
    bool operator>=(const ExtNat& o) const { return o <= *this; }

    std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

private:
    static constexpr std::int64_t kInf = -1;
    std::int64_t v_;
};

/// h(a) - h(a-1) with the convention inf - inf = 0.
inline ExtNat height_increment(const ExtNat& hi, const ExtNat& lo) {
    if (hi.is_infinite() && lo.is_infinite()) return ExtNat(0);
    return hi - lo;
}

/// q^e for an extended-natural exponent, with q^inf defined as exactly 0.
Rational q_pow(const Rational& q, const ExtNat& e);

}  // namespace qx
