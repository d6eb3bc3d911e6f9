#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qx/inversion_free.hpp"
#include "qx/qkernel.hpp"
#include "qx/rational.hpp"

namespace qx {

/// A probability measure on the reals with finite rational support, given by
/// its atoms; the step CDF and the generalized inverse are exact.
class FinitePmf {
public:
    explicit FinitePmf(std::vector<std::pair<Rational, Rational>> atoms);
    static FinitePmf parse(const std::string& spec);  // "0:1/2,1:1/2"

    const std::vector<std::pair<Rational, Rational>>& atoms() const { return atoms_; }

    Rational cdf(const Rational& x) const;
    /// inf{x : F(x) >= p} for p in (0, 1].
    Rational quantile(const Rational& p) const;

private:
    std::vector<std::pair<Rational, Rational>> atoms_;  // sorted by value
};

/// Quantiles alpha_k = F^{-1}(1 - q^k), k = 1..k_max; weakly increasing.
std::vector<Rational> quantile_word(const FinitePmf& F, const QParam& q, std::int64_t k_max);

/// The discretized measure: mass of x is the geometric mass of
/// {k : alpha_k = x}, with the tail summed in closed form. Returned on the
/// support of F (some atoms may carry zero mass).
std::vector<std::pair<Rational, Rational>> quantized_pmf(const FinitePmf& F, const QParam& q);

struct QuantileEncoding {
    InversionFreeWord word;             // letters 1..s, finite support
    std::vector<Rational> letter_values;  // value represented by each letter
};

/// Letter encoding of the quantile word: distinct alpha-values become
/// letters, run lengths become multiplicities, the last run is infinite.
QuantileEncoding encode_quantile_word(const FinitePmf& F, const QParam& q,
                                      std::int64_t cap = 1000000);

struct QuantizeRow {
    Rational q;
    double tv;            // exact n-letter marginal vs the product measure
    double tv_empirical;  // only when samples > 0
    bool has_empirical;
};

/// For each q in the grid: TV between the exact n-letter marginal of the
/// q-shuffle of the quantile word (mapped back to real values) and the
/// n-fold product of F. Optionally adds an empirical column.
std::vector<QuantizeRow> convergence_table(const FinitePmf& F, int n,
                                           const std::vector<Rational>& q_grid,
                                           std::int64_t samples = 0, std::uint64_t seed = 1);

}  // namespace qx
