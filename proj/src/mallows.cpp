#include "qx/mallows.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace qx {

namespace {

Rational u64_fraction(std::uint64_t k) {
    mpz_class num(std::to_string(k));
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, 64);
    return Rational(num, den);
}

// Fenwick tree over {1..n} supporting k-th smallest selection and removal.
class OrderStatTree {
public:
    explicit OrderStatTree(int n) : n_(n), tree_(static_cast<size_t>(n) + 1, 0) {
        for (int i = 1; i <= n; ++i) add(i, 1);
        log_ = 1;
        while ((1 << log_) <= n_) ++log_;
    }

    int size() const { return count_; }

    /// k-th smallest present value (1-based), removed from the tree.
    int take(int k) {
        if (k < 1 || k > count_) throw std::out_of_range("OrderStatTree: rank out of range");
        int pos = 0;
        int rem = k;
        for (int step = 1 << (log_ - 1); step > 0; step >>= 1) {
            if (pos + step <= n_ && tree_[static_cast<size_t>(pos + step)] < rem) {
                pos += step;
                rem -= tree_[static_cast<size_t>(pos)];
            }
        }
        int value = pos + 1;
        add(value, -1);
        return value;
    }

private:
    void add(int i, int delta) {
        count_ += delta;
        for (; i <= n_; i += i & (-i)) tree_[static_cast<size_t>(i)] += delta;
    }

    int n_;
    int log_ = 1;
    int count_ = 0;
    std::vector<int> tree_;
};

}  // namespace

TruncatedGeometric::TruncatedGeometric(int n, const QParam& q)
    : n_(n), exact_(q.exact()) {
    if (n < 1) throw std::invalid_argument("TruncatedGeometric: n must be >= 1");
    const Rational& qq = q.value();
    Rational norm = q_int(n, qq);
    Rational acc(0);
    Rational p(1);
    cdf_.reserve(static_cast<size_t>(n));
    cdf_f_.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        acc += p / norm;
        cdf_.push_back(acc);
        cdf_f_.push_back(acc.to_double());
        p *= qq;
    }
}

Rational TruncatedGeometric::pmf(int i) const {
    if (i < 1 || i > n_) return Rational(0);
    return i == 1 ? cdf_[0] : cdf_[static_cast<size_t>(i) - 1] - cdf_[static_cast<size_t>(i) - 2];
}

int TruncatedGeometric::sample(RngStream& rng) const {
    if (exact_) {
        Rational u = u64_fraction(rng.next_u64());
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;  // u < 1 = cdf back, only reachable by rounding
        return static_cast<int>(it - cdf_.begin()) + 1;
    }
    double u = rng.next_unit();
    auto it = std::upper_bound(cdf_f_.begin(), cdf_f_.end(), u);
    if (it == cdf_f_.end()) --it;
    return static_cast<int>(it - cdf_f_.begin()) + 1;
}

Rational Geometric::pmf(std::int64_t i) const {
    if (i < 1) return Rational(0);
    const Rational& q = q_.value();
    return (Rational(1) - q) * q.pow(i - 1);
}

std::int64_t Geometric::sample(RngStream& rng) const {
    // Smallest i >= 1 with q^i < 1 - U, i.e. the inverse transform of the
    // geometric CDF 1 - q^i.
    if (q_.exact()) {
        Rational u = u64_fraction(rng.next_u64());
        Rational bound = Rational(1) - u;  // > 0 since u < 1
        const Rational& q = q_.value();
        Rational p = q;
        std::int64_t i = 1;
        while (p >= bound) {
            p *= q;
            ++i;
        }
        return i;
    }
    double u = rng.next_unit();
    double bound = 1.0 - u;
    double q = q_.value_f();
    double p = q;
    std::int64_t i = 1;
    while (p >= bound) {
        p *= q;
        ++i;
    }
    return i;
}

Rational mallows_pmf(const Permutation& sigma, const QParam& q) {
    return q.value().pow(inversions(sigma.word())) / q_factorial(sigma.size(), q.value());
}

std::vector<int> backward_ranks(const Permutation& sigma) {
    const int n = sigma.size();
    std::vector<int> beta(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j) {
        int count = 0;
        for (int i = 1; i <= j; ++i) {
            if (sigma(i) <= sigma(j)) ++count;
        }
        beta[static_cast<size_t>(j) - 1] = count;
    }
    return beta;
}

Permutation permutation_from_backward_ranks(const std::vector<int>& beta) {
    const int n = static_cast<int>(beta.size());
    for (int j = 1; j <= n; ++j) {
        int b = beta[static_cast<size_t>(j) - 1];
        if (b < 1 || b > j) throw std::invalid_argument("backward ranks must satisfy 1 <= beta_j <= j");
    }
    // sigma(j) is the beta_j-th smallest of the values not used by later
    // positions; peel from the right.
    OrderStatTree values(n);
    std::vector<int> img(static_cast<size_t>(n));
    for (int j = n; j >= 1; --j) {
        img[static_cast<size_t>(j) - 1] = values.take(beta[static_cast<size_t>(j) - 1]);
    }
    return Permutation(std::move(img));
}

Permutation sample_mallows_by_ranks(int n, const QParam& q, RngStream& rng) {
    std::vector<int> beta(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j) {
        TruncatedGeometric g(j, q);
        int draw = g.sample(rng);          // j - beta_j + 1 ~ G_{q,j}
        beta[static_cast<size_t>(j) - 1] = j - draw + 1;
    }
    return permutation_from_backward_ranks(beta);
}

Word q_shuffle(const Word& v, const QParam& q, RngStream& rng) {
    const int n = static_cast<int>(v.size());
    OrderStatTree positions(n);
    Word out;
    out.reserve(v.size());
    for (int m = 1; m <= n; ++m) {
        TruncatedGeometric g(n - m + 1, q);
        int pos = positions.take(g.sample(rng));
        out.push_back(v[static_cast<size_t>(pos) - 1]);
    }
    return out;
}

namespace {

using Dist = std::map<Word, Rational>;

// Distribution of the shuffle suffix given the set of remaining positions.
// The future only depends on which positions remain, so memoize on the mask.
Dist shuffle_suffix(std::uint32_t mask, const Word& v,
                    const std::vector<std::vector<Rational>>& step_pmf,
                    std::unordered_map<std::uint32_t, Dist>& memo) {
    if (mask == 0) return {{Word{}, Rational(1)}};
    auto found = memo.find(mask);
    if (found != memo.end()) return found->second;

    const int k = std::popcount(mask);
    Dist out;
    int rank = 0;
    for (int p = 0; p < static_cast<int>(v.size()); ++p) {
        if (!(mask & (1u << p))) continue;
        ++rank;
        const Rational& prob = step_pmf[static_cast<size_t>(k)][static_cast<size_t>(rank)];
        Dist sub = shuffle_suffix(mask & ~(1u << p), v, step_pmf, memo);
        for (const auto& [word, mass] : sub) {
            Word w;
            w.reserve(word.size() + 1);
            w.push_back(v[static_cast<size_t>(p)]);
            w.insert(w.end(), word.begin(), word.end());
            auto [it, inserted] = out.try_emplace(std::move(w), prob * mass);
            if (!inserted) it->second += prob * mass;
        }
    }
    memo.emplace(mask, out);
    return out;
}

}  // namespace

std::map<Word, Rational> shuffle_distribution(const Word& v, const QParam& q, int budget) {
    const int n = static_cast<int>(v.size());
    if (n > budget || n > 20) {
        throw std::invalid_argument("shuffle_distribution: word length exceeds enumeration budget");
    }
    if (n == 0) return {{Word{}, Rational(1)}};
    // step_pmf[k][r] = G_{q,k}(r): probability that the r-th of k remaining
    // positions is selected.
    std::vector<std::vector<Rational>> step_pmf(static_cast<size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) {
        step_pmf[static_cast<size_t>(k)].resize(static_cast<size_t>(k) + 1);
        Rational norm = q_int(k, q.value());
        Rational p(1);
        for (int r = 1; r <= k; ++r) {
            step_pmf[static_cast<size_t>(k)][static_cast<size_t>(r)] = p / norm;
            p *= q.value();
        }
    }
    std::unordered_map<std::uint32_t, Dist> memo;
    return shuffle_suffix((1u << n) - 1, v, step_pmf, memo);
}

ExchangeabilityReport verify_finite_q_exchangeable(const std::map<Word, Rational>& pmf,
                                                   const Rational& q) {
    if (pmf.empty()) throw std::invalid_argument("verify_finite_q_exchangeable: empty pmf");
    const size_t len = pmf.begin()->first.size();
    Rational total(0);
    for (const auto& [w, p] : pmf) {
        if (w.size() != len) {
            throw std::invalid_argument("verify_finite_q_exchangeable: words of mixed length");
        }
        if (p.sign() < 0) throw std::invalid_argument("verify_finite_q_exchangeable: negative mass");
        total += p;
    }
    if (!total.is_one()) {
        throw std::invalid_argument("verify_finite_q_exchangeable: masses do not sum to 1");
    }

    for (const auto& [w, p] : pmf) {
        if (p.is_zero()) continue;
        for (size_t i = 0; i + 1 < len; ++i) {
            if (w[i] == w[i + 1]) continue;
            Word swapped = w;
            std::swap(swapped[i], swapped[i + 1]);
            Rational expected = w[i] < w[i + 1] ? p * q : p / q;
            auto it = pmf.find(swapped);
            Rational actual = it == pmf.end() ? Rational(0) : it->second;
            if (actual != expected) {
                return {false, ExchangeabilityWitness{w, static_cast<int>(i) + 1}};
            }
        }
    }
    return {true, std::nullopt};
}

std::vector<Permutation> symmetric_group(int n) {
    std::vector<int> img(static_cast<size_t>(n));
    std::iota(img.begin(), img.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

std::map<Word, Rational> mallows_law(int n, const QParam& q) {
    std::map<Word, Rational> law;
    for (const auto& sigma : symmetric_group(n)) {
        law.emplace(sigma.word(), mallows_pmf(sigma, q));
    }
    return law;
}

}  // namespace qx
