#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qx/rational.hpp"
#include "qx/words.hpp"

namespace qx {

/// An infinite inversion-free (weakly increasing) word, stored by letter
/// multiplicities. Two shapes exist:
///  - finite support: letters a_1 < ... < a_d, the last multiplicity
///    infinite, all earlier ones finite ("a1:l1,...,ad:inf");
///  - infinite support: a finite explicit prefix plus a tail rule, all
///    multiplicities finite ("a1:l1,...;ones" or "...;const:c"). Tail
///    letters continue consecutively after the last explicit letter.
class InversionFreeWord {
public:
    enum class Tail { none, ones, constant };

    static InversionFreeWord finite(std::vector<std::pair<int, ExtNat>> support);
    static InversionFreeWord with_tail(std::vector<std::pair<int, std::int64_t>> prefix,
                                       Tail rule, std::int64_t c = 1);
    /// The word 1 2 3 ... (all multiplicities one), the parameter of the
    /// infinite Mallows measure.
    static InversionFreeWord naturals() { return with_tail({}, Tail::ones); }

    static InversionFreeWord parse(const std::string& spec);
    std::string str() const;

    bool finite_support() const { return tail_ == Tail::none; }
    Tail tail() const { return tail_; }
    std::int64_t tail_multiplicity() const { return tail_c_; }
    /// First letter produced by the tail rule (only for infinite support).
    int tail_start() const;

    const std::vector<std::pair<int, ExtNat>>& explicit_support() const { return prefix_; }

    /// Multiplicity of a letter (zero when absent).
    ExtNat multiplicity(int letter) const;
    /// Sum of multiplicities of all letters strictly below `letter`.
    ExtNat cumulative_below(int letter) const;
    /// The letter occupying 1-based position `pos` of the word.
    int letter_at_position(std::int64_t pos) const;
    /// 0-based index into the support sequence.
    int support_letter(std::int64_t index) const;

    Word prefix_word(std::int64_t n) const;

    bool operator==(const InversionFreeWord& o) const {
        return prefix_ == o.prefix_ && tail_ == o.tail_ && tail_c_ == o.tail_c_;
    }

private:
    InversionFreeWord() = default;
    std::vector<std::pair<int, ExtNat>> prefix_;  // strictly increasing letters
    Tail tail_ = Tail::none;
    std::int64_t tail_c_ = 1;
};

/// Pushforward under the clamp a -> min(a, d); letters >= d merge into d.
InversionFreeWord clamp_pushforward(const InversionFreeWord& v, int d);

/// Generating function of inversions over the orbit of the length-n prefix:
/// sum of q^inv over all rearrangements. Evaluated by the Gaussian
/// multinomial and, for n <= 8, cross-checked against brute-force
/// enumeration (throws std::logic_error on mismatch).
Rational orbit_inversion_polynomial(const InversionFreeWord& v, std::int64_t n, const Rational& q);

/// A weakly increasing height function h with h(0) = 0, on the finite
/// domain {1..d} (where h(d) must be infinite) or on all of N (where the
/// explicit prefix is extended by a constant increment, or is eventually
/// infinite). h(a) -> infinity is enforced at construction.
class HeightFunction {
public:
    static HeightFunction finite_domain(std::vector<ExtNat> values);
    static HeightFunction on_naturals(std::vector<ExtNat> prefix, std::int64_t tail_increment);

    static HeightFunction parse(const std::string& spec);  // e.g. "1,inf"
    std::string str() const;

    bool has_finite_domain() const { return finite_; }
    int domain_size() const;  // d for finite domain
    std::int64_t explicit_prefix_size() const { return static_cast<std::int64_t>(values_.size()); }
    std::int64_t tail_increment_value() const { return tail_inc_; }

    ExtNat value(std::int64_t a) const;      // h(a), with h(0) = 0
    ExtNat increment(std::int64_t a) const;  // h(a) - h(a-1), inf - inf = 0

    bool operator==(const HeightFunction& o) const {
        return finite_ == o.finite_ && values_ == o.values_ && tail_inc_ == o.tail_inc_;
    }

private:
    HeightFunction() = default;
    bool finite_ = true;
    std::vector<ExtNat> values_;
    std::int64_t tail_inc_ = 0;  // naturals domain only
};

/// The bijection h <-> v: letter a appears h(a) - h(a-1) times, with the
/// convention that the increment is zero when h(a) = h(a-1) = infinity.
InversionFreeWord height_to_word(const HeightFunction& h);

/// Inverse bijection. domain_d > 0 requests the finite domain {1..d} (d must
/// cover the support of a finite-support word); domain_d = 0 requests N.
HeightFunction word_to_height(const InversionFreeWord& v, int domain_d = 0);

}  // namespace qx
