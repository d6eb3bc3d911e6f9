#include "qx/pv.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qx/mallows.hpp"
#include "qx/stats.hpp"

namespace qx {

std::int64_t PrefixState::consumed(int letter) const {
    auto it = consumed_.find(letter);
    return it == consumed_.end() ? 0 : it->second;
}

ExtNat PrefixState::residual(int letter) const {
    return v_.multiplicity(letter) - ExtNat(consumed(letter));
}

std::int64_t PrefixState::consumed_below(int letter) const {
    std::int64_t acc = 0;
    for (const auto& [l, c] : consumed_) {
        if (l >= letter) break;
        acc += c;
    }
    return acc;
}

void PrefixState::emit(int letter) {
    if (residual(letter) == ExtNat(0)) {
        throw std::invalid_argument("PrefixState: letter multiplicity exhausted");
    }
    ++consumed_[letter];
    emitted_.push_back(letter);
}

Rational transition_probability(const PrefixState& state, int letter, const QParam& q) {
    // Exponent of the leading factor: residual mass strictly below `letter`.
    ExtNat below = state.word().cumulative_below(letter) - ExtNat(state.consumed_below(letter));
    Rational lead = q_pow(q.value(), below);
    Rational tail = Rational(1) - q_pow(q.value(), state.residual(letter));
    return lead * tail;
}

Rational marginal_probability(const InversionFreeWord& v, const Word& u, const QParam& q) {
    const Rational& qq = q.value();

    std::map<int, std::int64_t> mult;
    for (int a : u) ++mult[a];

    // Pairwise product sum over b < a of mu_b * mu_a.
    std::int64_t total = static_cast<std::int64_t>(u.size());
    std::int64_t sq = 0;
    for (const auto& [a, m] : mult) sq += m * m;
    std::int64_t pair_sum = (total * total - sq) / 2;

    Rational acc = qq.pow(inversions(u)) * qq.pow(-pair_sum);
    for (const auto& [a, m] : mult) {
        Rational x = q_pow(qq, v.multiplicity(a));  // q^{l_a}; 0 when l_a infinite
        acc *= q_pochhammer(x, qq.inverse(), ExtNat(m));
        // q^{mu_a * sum_{b<a} l_b}; an infinite cumulative sum forces 0, and
        // then the letter is unreachable anyway.
        acc *= q_pow(qq, v.cumulative_below(a)).pow(m);
        if (acc.is_zero()) return acc;
    }
    return acc;
}

std::map<Word, Rational> marginal_law(const InversionFreeWord& v, int n, const QParam& q) {
    if (!v.finite_support()) {
        throw std::invalid_argument("marginal_law: infinite support needs marginal_law_truncated");
    }
    int max_letter = v.explicit_support().back().first;
    TruncatedLaw t = marginal_law_truncated(v, n, q, max_letter);
    if (!t.other.is_zero()) {
        throw std::logic_error("marginal_law: finite support left uncovered mass");
    }
    return t.pmf;
}

TruncatedLaw marginal_law_truncated(const InversionFreeWord& v, int n, const QParam& q,
                                    int max_letter) {
    if (n < 0) throw std::invalid_argument("marginal_law: negative length");
    // Iterative breadth-first expansion; supports both support shapes.
    std::map<Word, Rational> frontier{{Word{}, Rational(1)}};
    for (int step = 0; step < n; ++step) {
        std::map<Word, Rational> next;
        for (const auto& [u, mass] : frontier) {
            PrefixState state(v);
            for (int a : u) state.emit(a);
            for (int idx = 0;; ++idx) {
                if (v.finite_support() && idx >= static_cast<int>(v.explicit_support().size())) {
                    break;
                }
                int letter = v.support_letter(idx);
                if (letter > max_letter) break;
                Rational p = transition_probability(state, letter, q);
                if (p.is_zero()) continue;
                Word ua = u;
                ua.push_back(letter);
                next.emplace(std::move(ua), mass * p);
            }
        }
        frontier = std::move(next);
    }
    TruncatedLaw out;
    Rational covered(0);
    for (auto& [w, p] : frontier) covered += p;
    out.pmf = std::move(frontier);
    out.other = Rational(1) - covered;
    return out;
}

SampleBackend backend_from_string(const std::string& s) {
    if (s == "positional") return SampleBackend::positional;
    if (s == "letterwise") return SampleBackend::letterwise;
    throw std::invalid_argument("unknown backend '" + s + "' (positional|letterwise)");
}

namespace {

// Smallest unconsumed position p with exactly (xi - 1) unconsumed positions
// before it; `consumed` is kept sorted.
std::int64_t select_unconsumed(const std::vector<std::int64_t>& consumed, std::int64_t xi) {
    std::int64_t p = xi;
    for (;;) {
        auto it = std::upper_bound(consumed.begin(), consumed.end(), p);
        std::int64_t below = it - consumed.begin();
        std::int64_t candidate = xi + below;
        if (candidate == p) return p;
        p = candidate;
    }
}

Word sample_positional(const InversionFreeWord& v, std::int64_t n, const QParam& q,
                       RngStream& rng) {
    Geometric g(q);
    std::vector<std::int64_t> consumed;
    Word out;
    out.reserve(static_cast<size_t>(n));
    for (std::int64_t step = 0; step < n; ++step) {
        std::int64_t xi = g.sample(rng);
        std::int64_t pos = select_unconsumed(consumed, xi);
        consumed.insert(std::upper_bound(consumed.begin(), consumed.end(), pos), pos);
        out.push_back(v.letter_at_position(pos));
    }
    return out;
}

Word sample_letterwise(const InversionFreeWord& v, std::int64_t n, const QParam& q,
                       RngStream& rng, std::int64_t cap) {
    PrefixState state(v);
    const bool exact = q.exact();
    for (std::int64_t step = 0; step < n; ++step) {
        if (exact) {
            mpz_class num(std::to_string(rng.next_u64()));
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 2, 64);
            Rational bound = Rational(1) - Rational(num, den);  // 1 - U > 0
            Rational x(1);
            for (std::int64_t idx = 0;; ++idx) {
                if (idx >= cap) {
                    throw std::runtime_error("sample_prefix: letterwise iteration cap exceeded");
                }
                int letter = v.support_letter(idx);
                x *= q_pow(q.value(), state.residual(letter));
                if (x < bound) {
                    state.emit(letter);
                    break;
                }
            }
        } else {
            double bound = 1.0 - rng.next_unit();
            double x = 1.0;
            for (std::int64_t idx = 0;; ++idx) {
                if (idx >= cap) {
                    throw std::runtime_error("sample_prefix: letterwise iteration cap exceeded");
                }
                int letter = v.support_letter(idx);
                ExtNat r = state.residual(letter);
                x *= r.is_infinite() ? 0.0 : std::pow(q.value_f(), static_cast<double>(r.value()));
                if (x < bound) {
                    state.emit(letter);
                    break;
                }
            }
        }
    }
    return state.emitted();
}

}  // namespace

Word sample_prefix(const InversionFreeWord& v, std::int64_t n, const QParam& q, RngStream& rng,
                   SampleBackend backend, std::int64_t iteration_cap) {
    if (n < 1) throw std::invalid_argument("sample_prefix: n must be >= 1");
    return backend == SampleBackend::positional ? sample_positional(v, n, q, rng)
                                                : sample_letterwise(v, n, q, rng, iteration_cap);
}

MonomialMatrix::MonomialMatrix(int k, std::vector<std::pair<int, int>> ones)
    : k_(k), ones_(std::move(ones)) {
    if (k < 0) throw std::invalid_argument("MonomialMatrix: negative size");
    std::sort(ones_.begin(), ones_.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<bool> row(static_cast<size_t>(k) + 1, false), col(static_cast<size_t>(k) + 1, false);
    for (const auto& [i, j] : ones_) {
        if (i < 1 || i > k || j < 1 || j > k) {
            throw std::invalid_argument("MonomialMatrix: entry out of range");
        }
        if (row[static_cast<size_t>(i)] || col[static_cast<size_t>(j)]) {
            throw std::invalid_argument("MonomialMatrix: more than one 1 in a row or column");
        }
        row[static_cast<size_t>(i)] = col[static_cast<size_t>(j)] = true;
    }
}

std::optional<MonomialMatrix> MonomialMatrix::from_word_prefix(const Word& w, int k) {
    if (static_cast<int>(w.size()) < k) return std::nullopt;
    std::vector<std::pair<int, int>> ones;
    for (int j = 1; j <= k; ++j) {
        int letter = w[static_cast<size_t>(j) - 1];
        if (letter <= k) ones.emplace_back(letter, j);
    }
    return MonomialMatrix(k, std::move(ones));
}

MonomialMatrix MonomialMatrix::parse(const std::string& bitspec) {
    std::vector<std::pair<int, int>> ones;
    std::stringstream ss(bitspec);
    std::string rowtext;
    int k = -1;
    int i = 0;
    while (std::getline(ss, rowtext, ';')) {
        ++i;
        if (k == -1) k = static_cast<int>(rowtext.size());
        if (static_cast<int>(rowtext.size()) != k) {
            throw std::invalid_argument("MonomialMatrix: ragged bitspec");
        }
        for (int j = 1; j <= k; ++j) {
            char c = rowtext[static_cast<size_t>(j) - 1];
            if (c == '1') {
                ones.emplace_back(i, j);
            } else if (c != '0') {
                throw std::invalid_argument("MonomialMatrix: bitspec must be 0/1");
            }
        }
    }
    if (i != k) throw std::invalid_argument("MonomialMatrix: bitspec must be square");
    return MonomialMatrix(k, std::move(ones));
}

std::string MonomialMatrix::bitspec() const {
    std::vector<std::string> rows(static_cast<size_t>(k_), std::string(static_cast<size_t>(k_), '0'));
    for (const auto& [i, j] : ones_) rows[static_cast<size_t>(i) - 1][static_cast<size_t>(j) - 1] = '1';
    std::string out;
    for (int i = 0; i < k_; ++i) {
        if (i) out += ';';
        out += rows[static_cast<size_t>(i)];
    }
    return out;
}

std::vector<int> MonomialMatrix::occupied_rows() const {
    std::vector<int> out;
    for (const auto& [i, j] : ones_) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> MonomialMatrix::occupied_cols() const {
    std::vector<int> out;
    for (const auto& [i, j] : ones_) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t MonomialMatrix::inversions() const {
    std::int64_t inv = 0;
    for (size_t a = 0; a < ones_.size(); ++a) {
        for (size_t b = a + 1; b < ones_.size(); ++b) {
            std::int64_t di = ones_[a].first - ones_[b].first;
            std::int64_t dj = ones_[a].second - ones_[b].second;
            if (di * dj < 0) ++inv;
        }
    }
    return inv;
}

MonomialMatrix MonomialMatrix::transpose() const {
    std::vector<std::pair<int, int>> ones;
    ones.reserve(ones_.size());
    for (const auto& [i, j] : ones_) ones.emplace_back(j, i);
    return MonomialMatrix(k_, std::move(ones));
}

namespace {

void enumerate_rank(int k, int r, std::vector<MonomialMatrix>& out) {
    // Choose r rows, r columns and a bijection between them.
    std::string row_mask(static_cast<size_t>(k), '\0');
    std::string col_mask(static_cast<size_t>(k), '\0');
    std::fill(row_mask.end() - r, row_mask.end(), 1);
    do {
        std::fill(col_mask.begin(), col_mask.end(), 0);
        std::fill(col_mask.end() - r, col_mask.end(), 1);
        std::vector<int> I, J;
        for (int i = 0; i < k; ++i) {
            if (row_mask[static_cast<size_t>(i)]) I.push_back(i + 1);
        }
        do {
            J.clear();
            for (int j = 0; j < k; ++j) {
                if (col_mask[static_cast<size_t>(j)]) J.push_back(j + 1);
            }
            std::vector<int> perm(static_cast<size_t>(r));
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<std::pair<int, int>> ones;
                for (int t = 0; t < r; ++t) {
                    ones.emplace_back(I[static_cast<size_t>(perm[static_cast<size_t>(t)])],
                                      J[static_cast<size_t>(t)]);
                }
                out.emplace_back(k, std::move(ones));
            } while (std::next_permutation(perm.begin(), perm.end()));
        } while (std::next_permutation(col_mask.begin(), col_mask.end()));
    } while (std::next_permutation(row_mask.begin(), row_mask.end()));
}

}  // namespace

std::vector<MonomialMatrix> enumerate_monomial(int k) {
    std::vector<MonomialMatrix> out;
    for (int r = 0; r <= k; ++r) enumerate_rank(k, r, out);
    std::sort(out.begin(), out.end());
    return out;
}

Rational truncation_pmf(const MonomialMatrix& m, const QParam& q) {
    const std::int64_t k = m.size();
    const std::int64_t r = m.rank();
    std::int64_t exponent = k * k - 2 * k * r - r + m.inversions();
    for (int i : m.occupied_rows()) exponent += i;
    for (int j : m.occupied_cols()) exponent += j;
    return (Rational(1) - q.value()).pow(r) * q.value().pow(exponent);
}

std::map<MonomialMatrix, Rational> truncation_law(int k, const QParam& q) {
    std::map<MonomialMatrix, Rational> law;
    for (const auto& m : enumerate_monomial(k)) law.emplace(m, truncation_pmf(m, q));
    return law;
}

std::map<MonomialMatrix, Rational> truncated_mallows_law(int n, int k, const QParam& q) {
    if (n < k) throw std::invalid_argument("truncated_mallows_law: n < k");
    if (n > 8) throw std::invalid_argument("truncated_mallows_law: enumeration budget is n <= 8");
    std::map<MonomialMatrix, Rational> law;
    for (const auto& sigma : symmetric_group(n)) {
        auto m = MonomialMatrix::from_word_prefix(sigma.word(), k);
        auto [it, inserted] = law.try_emplace(*m, mallows_pmf(sigma, q));
        if (!inserted) it->second += mallows_pmf(sigma, q);
    }
    return law;
}

std::vector<ConvergenceRow> weak_convergence_table(int k, const std::vector<std::int64_t>& grid,
                                                   const QParam& q, std::int64_t samples,
                                                   std::uint64_t seed) {
    auto limit = truncation_law(k, q);
    std::map<MonomialMatrix, double> limit_f;
    for (const auto& [m, p] : limit) limit_f.emplace(m, p.to_double());

    std::vector<ConvergenceRow> rows;
    std::uint64_t stream = 0;
    for (std::int64_t n : grid) {
        if (n < k) throw std::invalid_argument("weak_convergence_table: n < k in grid");
        if (n <= 8) {
            auto pushed = truncated_mallows_law(static_cast<int>(n), k, q);
            Rational tv = tv_distance_exact(pushed, limit);
            rows.push_back({n, tv.to_double(), true});
        } else {
            RngStream rng(seed, stream++);
            std::map<MonomialMatrix, double> empirical;
            for (std::int64_t s = 0; s < samples; ++s) {
                Permutation sigma = sample_mallows_by_ranks(static_cast<int>(n), q, rng);
                auto m = MonomialMatrix::from_word_prefix(sigma.word(), k);
                empirical[*m] += 1.0 / static_cast<double>(samples);
            }
            rows.push_back({n, tv_distance(empirical, limit_f), false});
        }
    }
    return rows;
}

bool transpose_invariance_empirical(int k, const QParam& q, std::int64_t samples, RngStream& rng,
                                    double tol) {
    InversionFreeWord naturals = InversionFreeWord::naturals();
    std::map<MonomialMatrix, double> law, law_t;
    double unit = 1.0 / static_cast<double>(samples);
    for (std::int64_t s = 0; s < samples; ++s) {
        Word w = sample_prefix(naturals, k, q, rng);
        auto m = MonomialMatrix::from_word_prefix(w, k);
        law[*m] += unit;
        law_t[m->transpose()] += unit;
    }
    return tv_distance(law, law_t) <= tol;
}

}  // namespace qx
