#include "qx/qkernel.hpp"

#include <stdexcept>

namespace qx {

Rational q_int(std::int64_t n, const Rational& q) {
    if (n < 0) throw std::invalid_argument("q_int: negative n");
    Rational sum(0);
    Rational p(1);
    for (std::int64_t i = 0; i < n; ++i) {
        sum += p;
        p *= q;
    }
    return sum;
}

Rational q_factorial(std::int64_t n, const Rational& q) {
    if (n < 0) throw std::invalid_argument("q_factorial: negative n");
    Rational acc(1);
    for (std::int64_t k = 1; k <= n; ++k) acc *= q_int(k, q);
    return acc;
}

Rational gaussian_multinomial(const std::vector<std::int64_t>& parts, const Rational& q) {
    if (parts.empty()) throw std::invalid_argument("gaussian_multinomial: empty parts");
    std::int64_t n = 0;
    for (auto p : parts) {
        if (p < 0) throw std::invalid_argument("gaussian_multinomial: negative part");
        n += p;
    }
    Rational acc = q_factorial(n, q);
    for (auto p : parts) acc /= q_factorial(p, q);
    return acc;
}

Rational q_pochhammer(const Rational& x, const Rational& base, const ExtNat& k) {
    if (k.is_infinite()) {
        if (x.is_zero()) return Rational(1);
        throw std::invalid_argument("q_pochhammer: infinite k supported only for x = 0");
    }
    Rational acc(1);
    Rational xb = x;
    for (std::int64_t i = 0; i < k.value(); ++i) {
        acc *= Rational(1) - xb;
        xb *= base;
    }
    return acc;
}

QParam::QParam(Rational q, NumericMode mode) : q_(std::move(q)), mode_(mode) {
    if (q_.sign() <= 0 || q_ >= Rational(1)) {
        throw std::invalid_argument("QParam: q must satisfy 0 < q < 1 (got " + q_.str() + ")");
    }
    qf_ = q_.to_double();
}

QParam QParam::parse(const std::string& s, NumericMode mode) {
    return QParam(Rational::from_string(s), mode);
}

QReversal q_reversal_guard(const Rational& q) {
    if (q.sign() <= 0) throw std::invalid_argument("q must be positive");
    if (q.is_one()) {
        throw std::invalid_argument(
            "q = 1 is classical exchangeability and is not supported");
    }
    if (q > Rational(1)) return {q.inverse(), true};
    return {q, false};
}

}  // namespace qx
