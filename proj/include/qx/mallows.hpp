#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qx/qkernel.hpp"
#include "qx/rational.hpp"
#include "qx/rng.hpp"
#include "qx/words.hpp"

namespace qx {

/// Truncated geometric law G_{q,n}(i) = q^(i-1)/[n]_q on {1..n}. Sampling
/// uses exact cumulative inversion against a 64-bit uniform fraction in
/// exact mode (granularity 2^-64, far below any test tolerance) and a
/// double inverse-CDF in float mode.
class TruncatedGeometric {
public:
    TruncatedGeometric(int n, const QParam& q);
    int n() const { return n_; }
    Rational pmf(int i) const;
    int sample(RngStream& rng) const;

private:
    int n_;
    bool exact_;
    std::vector<Rational> cdf_;   // cdf_[i] = P(X <= i+1)
    std::vector<double> cdf_f_;
};

/// Unbounded geometric law G_q(i) = (1-q) q^(i-1) on {1,2,...}.
class Geometric {
public:
    explicit Geometric(const QParam& q) : q_(q) {}
    Rational pmf(std::int64_t i) const;
    std::int64_t sample(RngStream& rng) const;

private:
    QParam q_;
};

/// Mallows probability q^inv(sigma) / [n]_q!.
Rational mallows_pmf(const Permutation& sigma, const QParam& q);

/// beta_j = #{i <= j : sigma(i) <= sigma(j)}; a bijection onto N_1 x...x N_n.
std::vector<int> backward_ranks(const Permutation& sigma);
Permutation permutation_from_backward_ranks(const std::vector<int>& beta);

/// Samples Mallows-distributed permutations via independent backward ranks,
/// j - beta_j + 1 ~ G_{q,j}.
Permutation sample_mallows_by_ranks(int n, const QParam& q, RngStream& rng);

/// The n-step q-shuffle: at step m a truncated geometric G_{q,n-m+1} picks
/// which remaining letter (in position order) is emitted next. The input
/// need not be inversion-free; the algorithm is applied as stated.
Word q_shuffle(const Word& v, const QParam& q, RngStream& rng);

/// Exact distribution of q_shuffle(v) by aggregating selection sequences per
/// output word. Throws on |v| > budget.
std::map<Word, Rational> shuffle_distribution(const Word& v, const QParam& q, int budget = 8);

struct ExchangeabilityWitness {
    Word word;
    int position = 0;  // adjacent transposition (position, position+1)
};

struct ExchangeabilityReport {
    bool ok = true;
    std::optional<ExchangeabilityWitness> witness;
};

/// Checks P(T w) = q^(inv(T w) - inv(w)) P(w) exactly for every adjacent
/// transposition T and every word of positive mass. `pmf` must sum to 1.
ExchangeabilityReport verify_finite_q_exchangeable(const std::map<Word, Rational>& pmf,
                                                   const Rational& q);

/// All of S_n as permutations, in lexicographic word order (n <= 9).
std::vector<Permutation> symmetric_group(int n);

/// Exact Mallows law on S_n as a pmf keyed by permutation words.
std::map<Word, Rational> mallows_law(int n, const QParam& q);

}  // namespace qx
