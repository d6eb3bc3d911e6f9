#include "qx/inversion_free.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qx/qkernel.hpp"

namespace qx {

namespace {

void check_prefix_shape(const std::vector<std::pair<int, ExtNat>>& prefix) {
    int prev = 0;
    for (const auto& [letter, mult] : prefix) {
        if (letter < 1) throw std::invalid_argument("InversionFreeWord: letters must be >= 1");
        if (letter <= prev) {
            throw std::invalid_argument("InversionFreeWord: letters must strictly increase");
        }
        if (!mult.is_infinite() && mult.value() <= 0) {
            throw std::invalid_argument("InversionFreeWord: multiplicities must be positive");
        }
        prev = letter;
    }
}

}  // namespace

InversionFreeWord InversionFreeWord::finite(std::vector<std::pair<int, ExtNat>> support) {
    check_prefix_shape(support);
    if (support.empty()) {
        throw std::invalid_argument("InversionFreeWord: finite-support word needs letters");
    }
    for (size_t i = 0; i + 1 < support.size(); ++i) {
        if (support[i].second.is_infinite()) {
            throw std::invalid_argument(
                "InversionFreeWord: only the last letter may have infinite multiplicity");
        }
    }
    if (!support.back().second.is_infinite()) {
        throw std::invalid_argument(
            "InversionFreeWord: finite-support word must end with infinite multiplicity");
    }
    InversionFreeWord v;
    v.prefix_ = std::move(support);
    v.tail_ = Tail::none;
    return v;
}

InversionFreeWord InversionFreeWord::with_tail(std::vector<std::pair<int, std::int64_t>> prefix,
                                               Tail rule, std::int64_t c) {
    if (rule == Tail::none) throw std::invalid_argument("InversionFreeWord: tail rule required");
    if (rule == Tail::ones) c = 1;
    if (c < 1) throw std::invalid_argument("InversionFreeWord: tail multiplicity must be >= 1");
    InversionFreeWord v;
    for (const auto& [letter, mult] : prefix) v.prefix_.emplace_back(letter, ExtNat(mult));
    check_prefix_shape(v.prefix_);
    v.tail_ = rule;
    v.tail_c_ = c;
    return v;
}

int InversionFreeWord::tail_start() const {
    if (finite_support()) throw std::logic_error("InversionFreeWord: no tail");
    return prefix_.empty() ? 1 : prefix_.back().first + 1;
}

InversionFreeWord InversionFreeWord::parse(const std::string& spec) {
    auto semi = spec.find(';');
    std::string head = semi == std::string::npos ? spec : spec.substr(0, semi);

    std::vector<std::pair<int, ExtNat>> prefix;
    if (!head.empty()) {
        std::stringstream ss(head);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) {
                throw std::invalid_argument("InversionFreeWord: expected letter:mult in '" + tok + "'");
            }
            int letter = std::stoi(tok.substr(0, colon));
            std::string m = tok.substr(colon + 1);
            ExtNat mult = (m == "inf") ? ExtNat::infinity() : ExtNat(std::stoll(m));
            prefix.emplace_back(letter, mult);
        }
    }

    if (semi == std::string::npos) return finite(std::move(prefix));

    std::string tail = spec.substr(semi + 1);
    std::vector<std::pair<int, std::int64_t>> fin;
    for (const auto& [letter, mult] : prefix) {
        if (mult.is_infinite()) {
            throw std::invalid_argument("InversionFreeWord: infinite multiplicity with a tail rule");
        }
        fin.emplace_back(letter, mult.value());
    }
    if (tail == "ones") return with_tail(std::move(fin), Tail::ones);
    if (tail.rfind("const:", 0) == 0) {
        return with_tail(std::move(fin), Tail::constant, std::stoll(tail.substr(6)));
    }
    throw std::invalid_argument("InversionFreeWord: unknown tail rule '" + tail + "'");
}

std::string InversionFreeWord::str() const {
    std::string out;
    for (size_t i = 0; i < prefix_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(prefix_[i].first) + ":" + prefix_[i].second.str();
    }
    if (tail_ == Tail::ones) out += ";ones";
    if (tail_ == Tail::constant) out += ";const:" + std::to_string(tail_c_);
    return out;
}

ExtNat InversionFreeWord::multiplicity(int letter) const {
    for (const auto& [l, m] : prefix_) {
        if (l == letter) return m;
        if (l > letter) return ExtNat(0);
    }
    if (!finite_support() && letter >= tail_start()) return ExtNat(tail_c_);
    return ExtNat(0);
}

ExtNat InversionFreeWord::cumulative_below(int letter) const {
    ExtNat acc(0);
    for (const auto& [l, m] : prefix_) {
        if (l >= letter) return acc;
        acc += m;
    }
    if (!finite_support() && letter > tail_start()) {
        acc += ExtNat(tail_c_ * (letter - tail_start()));
    }
    return acc;
}

int InversionFreeWord::letter_at_position(std::int64_t pos) const {
    if (pos < 1) throw std::invalid_argument("letter_at_position: positions are 1-based");
    std::int64_t before = 0;
    for (const auto& [l, m] : prefix_) {
        if (m.is_infinite()) return l;
        before += m.value();
        if (pos <= before) return l;
    }
    // pos lies in the tail region.
    std::int64_t r = pos - before;
    return tail_start() + static_cast<int>((r - 1) / tail_c_);
}

int InversionFreeWord::support_letter(std::int64_t index) const {
    if (index < static_cast<std::int64_t>(prefix_.size())) {
        return prefix_[static_cast<size_t>(index)].first;
    }
    if (finite_support()) throw std::out_of_range("support_letter: index beyond finite support");
    return tail_start() + static_cast<int>(index - static_cast<std::int64_t>(prefix_.size()));
}

Word InversionFreeWord::prefix_word(std::int64_t n) const {
    Word w;
    w.reserve(static_cast<size_t>(n));
    std::int64_t remaining = n;
    for (const auto& [l, m] : prefix_) {
        std::int64_t take = m.is_infinite() ? remaining : std::min(remaining, m.value());
        for (std::int64_t i = 0; i < take; ++i) w.push_back(l);
        remaining -= take;
        if (remaining == 0) return w;
    }
    int letter = tail_start();
    while (remaining > 0) {
        std::int64_t take = std::min(remaining, tail_c_);
        for (std::int64_t i = 0; i < take; ++i) w.push_back(letter);
        remaining -= take;
        ++letter;
    }
    return w;
}

InversionFreeWord clamp_pushforward(const InversionFreeWord& v, int d) {
    if (d < 1) throw std::invalid_argument("clamp_pushforward: d must be >= 1");
    std::vector<std::pair<int, ExtNat>> support;
    ExtNat merged(0);
    bool any_merged = false;
    for (const auto& [l, m] : v.explicit_support()) {
        if (l < d) {
            support.emplace_back(l, m);
        } else {
            merged += m;
            any_merged = true;
        }
    }
    if (!v.finite_support()) {
        // Tail letters below the clamp stay distinct; the rest (infinitely
        // many) pile onto d.
        for (int l = v.tail_start(); l < d; ++l) {
            support.emplace_back(l, ExtNat(v.tail_multiplicity()));
        }
        merged = ExtNat::infinity();
        any_merged = true;
    }
    if (!any_merged) return v;  // nothing reaches the clamp: word unchanged
    support.emplace_back(d, merged);
    return InversionFreeWord::finite(std::move(support));
}

Rational orbit_inversion_polynomial(const InversionFreeWord& v, std::int64_t n, const Rational& q) {
    if (n < 1) throw std::invalid_argument("orbit_inversion_polynomial: n must be >= 1");
    Word w = v.prefix_word(n);
    std::vector<std::int64_t> parts;
    for (size_t i = 0; i < w.size();) {
        size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        parts.push_back(static_cast<std::int64_t>(j - i));
        i = j;
    }
    Rational formula = gaussian_multinomial(parts, q);
    if (n <= 8) {
        Word sorted = w;
        std::sort(sorted.begin(), sorted.end());
        Rational brute(0);
        do {
            brute += q.pow(inversions_quadratic(sorted));
        } while (std::next_permutation(sorted.begin(), sorted.end()));
        if (brute != formula) {
            throw std::logic_error("orbit_inversion_polynomial: enumeration disagrees with formula");
        }
    }
    return formula;
}

HeightFunction HeightFunction::finite_domain(std::vector<ExtNat> values) {
    if (values.empty()) throw std::invalid_argument("HeightFunction: empty domain");
    ExtNat prev(0);
    for (const auto& h : values) {
        if (h < prev) throw std::invalid_argument("HeightFunction: must be weakly increasing");
        prev = h;
    }
    if (!values.back().is_infinite()) {
        throw std::invalid_argument("HeightFunction: h(d) must be infinite on a finite domain");
    }
    HeightFunction h;
    h.finite_ = true;
    h.values_ = std::move(values);
    return h;
}

HeightFunction HeightFunction::on_naturals(std::vector<ExtNat> prefix, std::int64_t tail_increment) {
    ExtNat prev(0);
    for (const auto& h : prefix) {
        if (h < prev) throw std::invalid_argument("HeightFunction: must be weakly increasing");
        prev = h;
    }
    bool ends_infinite = !prefix.empty() && prefix.back().is_infinite();
    if (!ends_infinite && tail_increment < 1) {
        throw std::invalid_argument("HeightFunction: h must tend to infinity");
    }
    HeightFunction h;
    h.finite_ = false;
    h.values_ = std::move(prefix);
    h.tail_inc_ = ends_infinite ? 0 : tail_increment;
    return h;
}

HeightFunction HeightFunction::parse(const std::string& spec) {
    auto semi = spec.find(';');
    std::string head = semi == std::string::npos ? spec : spec.substr(0, semi);
    std::vector<ExtNat> values;
    if (!head.empty()) {
        std::stringstream ss(head);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            values.push_back(tok == "inf" ? ExtNat::infinity() : ExtNat(std::stoll(tok)));
        }
    }
    if (semi == std::string::npos) return finite_domain(std::move(values));
    std::string tail = spec.substr(semi + 1);
    if (tail.empty() || tail[0] != '+') {
        throw std::invalid_argument("HeightFunction: tail must be '+c'");
    }
    return on_naturals(std::move(values), std::stoll(tail.substr(1)));
}

std::string HeightFunction::str() const {
    std::string out;
    for (size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ',';
        out += values_[i].str();
    }
    if (!finite_) out += ";+" + std::to_string(tail_inc_);
    return out;
}

int HeightFunction::domain_size() const {
    if (!finite_) throw std::logic_error("HeightFunction: domain is N");
    return static_cast<int>(values_.size());
}

ExtNat HeightFunction::value(std::int64_t a) const {
    if (a < 0) throw std::invalid_argument("HeightFunction: a must be >= 0");
    if (a == 0) return ExtNat(0);
    if (a <= static_cast<std::int64_t>(values_.size())) {
        return values_[static_cast<size_t>(a) - 1];
    }
    if (finite_) throw std::out_of_range("HeightFunction: a beyond finite domain");
    ExtNat last = values_.empty() ? ExtNat(0) : values_.back();
    if (last.is_infinite()) return last;
    return last + ExtNat(tail_inc_ * (a - static_cast<std::int64_t>(values_.size())));
}

ExtNat HeightFunction::increment(std::int64_t a) const {
    return height_increment(value(a), value(a - 1));
}

InversionFreeWord height_to_word(const HeightFunction& h) {
    std::vector<std::pair<int, ExtNat>> support;
    if (h.has_finite_domain()) {
        for (int a = 1; a <= h.domain_size(); ++a) {
            ExtNat inc = h.increment(a);
            if (inc.is_infinite()) {
                support.emplace_back(a, ExtNat::infinity());
                return InversionFreeWord::finite(std::move(support));
            }
            if (inc.value() > 0) support.emplace_back(a, inc);
        }
        throw std::logic_error("height_to_word: finite-domain height never reached infinity");
    }

    // Domain N: explicit prefix of stored values, then constant increments.
    std::int64_t m = h.explicit_prefix_size();
    std::vector<std::pair<int, std::int64_t>> fin;
    for (std::int64_t a = 1; a <= m; ++a) {
        ExtNat inc = h.increment(a);
        if (inc.is_infinite()) {
            std::vector<std::pair<int, ExtNat>> sup;
            for (auto& [l, mult] : fin) sup.emplace_back(l, ExtNat(mult));
            sup.emplace_back(static_cast<int>(a), ExtNat::infinity());
            return InversionFreeWord::finite(std::move(sup));
        }
        if (inc.value() > 0) fin.emplace_back(static_cast<int>(a), inc.value());
    }
    std::int64_t c = h.increment(m + 1).value();
    // The tail starts at letter m+1; the representation has it follow the
    // last explicit letter (or letter 1 for an empty prefix), so materialize
    // letter m+1 when the prefix stops short of it.
    std::int64_t rep_tail_start = fin.empty() ? 1 : fin.back().first + 1;
    if (rep_tail_start != m + 1) {
        fin.emplace_back(static_cast<int>(m + 1), c);
    }
    return InversionFreeWord::with_tail(
        std::move(fin), c == 1 ? InversionFreeWord::Tail::ones : InversionFreeWord::Tail::constant, c);
}

HeightFunction word_to_height(const InversionFreeWord& v, int domain_d) {
    if (domain_d > 0) {
        if (!v.finite_support()) {
            throw std::invalid_argument("word_to_height: infinite support needs domain N");
        }
        if (v.explicit_support().back().first > domain_d) {
            throw std::invalid_argument("word_to_height: domain too small for the support");
        }
        std::vector<ExtNat> values;
        ExtNat acc(0);
        for (int a = 1; a <= domain_d; ++a) {
            acc += v.multiplicity(a);
            values.push_back(acc);
        }
        return HeightFunction::finite_domain(std::move(values));
    }
    std::vector<ExtNat> values;
    ExtNat acc(0);
    int upto = v.explicit_support().empty() ? 0 : v.explicit_support().back().first;
    for (int a = 1; a <= upto; ++a) {
        acc += v.multiplicity(a);
        values.push_back(acc);
    }
    std::int64_t inc = v.finite_support() ? 0 : v.tail_multiplicity();
    return HeightFunction::on_naturals(std::move(values), inc);
}

}  // namespace qx
