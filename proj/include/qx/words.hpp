#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qx/rational.hpp"

namespace qx {

/// A finite word over the integer alphabet; positions are 1-based in all
/// documented formulas, letters are >= 1.
using Word = std::vector<int>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

/// Number of inversions (pairs i < j with w_i > w_j), merge-count, O(n log n).
std::int64_t inversions(const Word& w);

/// Quadratic reference implementation kept as the test oracle.
std::int64_t inversions_quadratic(const Word& w);

/// A permutation of {1..n} stored by its images sigma(1..n).
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);
    /// Transposition (i j) inside S_n.
    static Permutation transposition(int n, int i, int j);

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[static_cast<size_t>(i) - 1]; }
    const std::vector<int>& images() const { return img_; }
    Word word() const { return img_; }

    Permutation inverse() const;
    /// (this * other)(i) = this(other(i)).
    Permutation compose(const Permutation& other) const;

    bool operator==(const Permutation& o) const { return img_ == o.img_; }
    bool operator<(const Permutation& o) const { return img_ < o.img_; }

private:
    std::vector<int> img_;
};

/// Position action (T_sigma w)_i = w_{sigma^{-1}(i)}. sigma must fix every
/// position beyond |w|.
Word apply_positions(const Permutation& sigma, const Word& w);

/// The additive inversion cocycle c(sigma, w): the stable value of
/// inv(T_sigma w) - inv(w) over prefixes containing the support of sigma.
std::int64_t inversion_cocycle(const Permutation& sigma, const Word& w);

/// q^(c(sigma, w)), the Radon-Nikodym factor of the position action.
Rational cocycle_density(const Permutation& sigma, const Word& w, const Rational& q);

/// c(sigma*tau, w) == c(sigma, T_tau w) + c(tau, w).
bool cocycle_additivity_holds(const Permutation& sigma, const Permutation& tau, const Word& w);

/// Letterwise pushforward of a word under an alphabet map.
Word pushforward(const Word& w, const std::function<int(int)>& f);

}  // namespace qx
