#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qx/rational.hpp"

namespace qx {

/// [n]_q = 1 + q + ... + q^(n-1); zero for n = 0.
Rational q_int(std::int64_t n, const Rational& q);

/// [n]_q! = [1]_q [2]_q ... [n]_q; one for n = 0.
Rational q_factorial(std::int64_t n, const Rational& q);

/// Gaussian multinomial [n; n_1,...,n_d]_q with n = sum of parts.
/// Defined for any rational q (evaluated exactly as a polynomial value).
Rational gaussian_multinomial(const std::vector<std::int64_t>& parts, const Rational& q);

/// q-Pochhammer (x; base)_k = prod_{i=0}^{k-1} (1 - x * base^i).
/// base may be q or q^{-1}. Infinite k is supported only for x = 0 (value 1).
Rational q_pochhammer(const Rational& x, const Rational& base, const ExtNat& k);

enum class NumericMode { exact, floating };

/// The deformation parameter. Exact rational q with 0 < q < 1 strictly;
/// float mode carries a double image of q for Monte-Carlo paths while the
/// exact value stays available for identity checks.
class QParam {
public:
    explicit QParam(Rational q, NumericMode mode = NumericMode::exact);
    static QParam parse(const std::string& s, NumericMode mode = NumericMode::exact);

    const Rational& value() const { return q_; }
    double value_f() const { return qf_; }
    NumericMode mode() const { return mode_; }
    bool exact() const { return mode_ == NumericMode::exact; }

private:
    Rational q_;
    double qf_;
    NumericMode mode_;
};

struct QReversal {
    Rational q;          // normalized into (0,1)
    bool order_reversed; // true when the alphabet order must be flipped
};

/// Normalizes q > 1 to 1/q with an order-reversal flag; rejects q = 1 and
/// nonpositive q.
QReversal q_reversal_guard(const Rational& q);

}  // namespace qx
