#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qx/inversion_free.hpp"
#include "qx/qkernel.hpp"
#include "qx/rng.hpp"
#include "qx/words.hpp"

namespace qx {

/// The growing prefix of an infinite q-shuffle of v: tracks how many copies
/// of each letter have been emitted.
class PrefixState {
public:
    explicit PrefixState(InversionFreeWord v) : v_(std::move(v)) {}

    const InversionFreeWord& word() const { return v_; }
    const Word& emitted() const { return emitted_; }
    std::int64_t length() const { return static_cast<std::int64_t>(emitted_.size()); }

    std::int64_t consumed(int letter) const;
    /// Residual multiplicity l_a - mu_a (infinite stays infinite).
    ExtNat residual(int letter) const;
    /// Sum of consumed counts over letters strictly below `letter`.
    std::int64_t consumed_below(int letter) const;

    void emit(int letter);

private:
    InversionFreeWord v_;
    std::map<int, std::int64_t> consumed_;
    Word emitted_;
};

/// Probability that the next emitted letter is `letter`:
/// q^(sum_{b<a} residual_b) * (1 - q^residual_a), with q^inf = 0.
/// Depends on the state only through its multiplicity vector.
Rational transition_probability(const PrefixState& state, int letter, const QParam& q);

/// Closed-form probability of the n-letter prefix u under the q-shuffle of v.
/// Exactly zero when u uses a letter outside the support or beyond its
/// multiplicity. Equals the telescoping product of transition probabilities.
Rational marginal_probability(const InversionFreeWord& v, const Word& u, const QParam& q);

/// Exact law of the first n letters for a finite-support v (support^n words
/// of positive mass).
std::map<Word, Rational> marginal_law(const InversionFreeWord& v, int n, const QParam& q);

struct TruncatedLaw {
    std::map<Word, Rational> pmf;  // words over letters <= max_letter
    Rational other;                // aggregated mass of everything else
};

/// Exact law of the first n letters restricted to words over {1..max_letter},
/// with the remaining mass aggregated; works for infinite support.
TruncatedLaw marginal_law_truncated(const InversionFreeWord& v, int n, const QParam& q,
                                    int max_letter);

enum class SampleBackend { positional, letterwise };

SampleBackend backend_from_string(const std::string& s);

/// First n letters of the infinite q-shuffle of v.
///  - positional: each step draws xi ~ G_q and takes the xi-th smallest
///    unconsumed position of v;
///  - letterwise: each step inverse-transforms the next-letter distribution
///    directly (iteration capped; the cumulative tail vanishes a.s.).
Word sample_prefix(const InversionFreeWord& v, std::int64_t n, const QParam& q, RngStream& rng,
                   SampleBackend backend = SampleBackend::positional,
                   std::int64_t iteration_cap = 1000000);

/// A 0-1 matrix with at most one 1 per row and per column.
class MonomialMatrix {
public:
    MonomialMatrix(int k, std::vector<std::pair<int, int>> ones);

    /// k x k truncation read off the first k letters of a permutation word:
    /// entry (w_j, j) for every j <= k with w_j <= k. Requires |w| >= k
    /// (otherwise: needs more samples -> nullopt).
    static std::optional<MonomialMatrix> from_word_prefix(const Word& w, int k);

    static MonomialMatrix parse(const std::string& bitspec);  // e.g. "01;00"
    std::string bitspec() const;

    int size() const { return k_; }
    int rank() const { return static_cast<int>(ones_.size()); }
    const std::vector<std::pair<int, int>>& ones() const { return ones_; }
    std::vector<int> occupied_rows() const;  // I, sorted
    std::vector<int> occupied_cols() const;  // J, sorted

    /// Unordered pairs of 1-positions whose row and column differences have
    /// opposite signs.
    std::int64_t inversions() const;

    MonomialMatrix transpose() const;

    bool operator==(const MonomialMatrix& o) const { return k_ == o.k_ && ones_ == o.ones_; }
    bool operator<(const MonomialMatrix& o) const {
        return k_ != o.k_ ? k_ < o.k_ : ones_ < o.ones_;
    }

private:
    int k_;
    std::vector<std::pair<int, int>> ones_;  // sorted by column
};

/// All weakly monomial k x k matrices.
std::vector<MonomialMatrix> enumerate_monomial(int k);

/// Law of the k x k truncation under the infinite Mallows measure:
/// (1-q)^r q^(k^2 - 2kr - r + inv(m) + sum I + sum J).
Rational truncation_pmf(const MonomialMatrix& m, const QParam& q);

/// The full truncation law {m -> truncation_pmf(m)} over M(k).
std::map<MonomialMatrix, Rational> truncation_law(int k, const QParam& q);

/// Exact pushforward of the finite Mallows law Q_n under k x k truncation
/// (enumeration; n <= 8).
std::map<MonomialMatrix, Rational> truncated_mallows_law(int n, int k, const QParam& q);

struct ConvergenceRow {
    std::int64_t n;
    double tv;
    bool exact;  // enumeration (true) or Monte Carlo (false)
};

/// TV distance between the k x k truncation of Q_n and its limit law, per n.
std::vector<ConvergenceRow> weak_convergence_table(int k, const std::vector<std::int64_t>& grid,
                                                   const QParam& q, std::int64_t samples = 100000,
                                                   std::uint64_t seed = 1);

/// Empirical check that the truncation law is transpose-invariant.
bool transpose_invariance_empirical(int k, const QParam& q, std::int64_t samples, RngStream& rng,
                                    double tol = 0.01);

}  // namespace qx
