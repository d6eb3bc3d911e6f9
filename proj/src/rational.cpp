#include "qx/rational.hpp"

#include <cctype>

namespace qx {

Rational Rational::from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 ||
            den.set_str(s.substr(slash + 1), 10) != 0) {
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        }
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        // Sign handling falls out of mpz parsing of the integer part.
        size_t frac_len = s.size() - dot - 1;
        if (frac_len == 0) throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        mpz_class num;
        if (num.set_str(digits, 10) != 0) {
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        }
        mpz_class den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rational(num, den);
    }
    mpz_class n;
    if (n.set_str(s, 10) != 0) {
        throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    }
    return Rational(n);
}

Rational Rational::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    Rational base = *this;
    Rational acc(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Rational q_pow(const Rational& q, const ExtNat& e) {
    if (e.is_infinite()) return Rational(0);
    return q.pow(e.value());
}

}  // namespace qx
