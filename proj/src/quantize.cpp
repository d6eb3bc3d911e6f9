#include "qx/quantize.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qx/pv.hpp"
#include "qx/rng.hpp"
#include "qx/stats.hpp"

namespace qx {

FinitePmf::FinitePmf(std::vector<std::pair<Rational, Rational>> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("FinitePmf: no atoms");
    std::sort(atoms_.begin(), atoms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Rational total(0);
    for (size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0 && atoms_[i].first == atoms_[i - 1].first) {
            throw std::invalid_argument("FinitePmf: duplicate atom");
        }
        if (atoms_[i].second.sign() <= 0) {
            throw std::invalid_argument("FinitePmf: masses must be positive");
        }
        total += atoms_[i].second;
    }
    if (!total.is_one()) throw std::invalid_argument("FinitePmf: masses must sum to 1");
}

FinitePmf FinitePmf::parse(const std::string& spec) {
    std::vector<std::pair<Rational, Rational>> atoms;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("FinitePmf: expected value:mass in '" + tok + "'");
        }
        atoms.emplace_back(Rational::from_string(tok.substr(0, colon)),
                           Rational::from_string(tok.substr(colon + 1)));
    }
    return FinitePmf(std::move(atoms));
}

Rational FinitePmf::cdf(const Rational& x) const {
    Rational acc(0);
    for (const auto& [v, m] : atoms_) {
        if (v > x) break;
        acc += m;
    }
    return acc;
}

Rational FinitePmf::quantile(const Rational& p) const {
    if (p.sign() <= 0 || p > Rational(1)) {
        throw std::invalid_argument("FinitePmf: quantile needs p in (0,1]");
    }
    Rational acc(0);
    for (const auto& [v, m] : atoms_) {
        acc += m;
        if (acc >= p) return v;
    }
    return atoms_.back().first;  // p == 1 lands here after exact summation
}

std::vector<Rational> quantile_word(const FinitePmf& F, const QParam& q, std::int64_t k_max) {
    if (k_max < 1) throw std::invalid_argument("quantile_word: k_max must be >= 1");
    std::vector<Rational> out;
    out.reserve(static_cast<size_t>(k_max));
    Rational p = q.value();
    for (std::int64_t k = 1; k <= k_max; ++k) {
        out.push_back(F.quantile(Rational(1) - p));
        p *= q.value();
    }
    return out;
}

namespace {

// Largest k >= 0 with q^k >= 1 - F(x_i), i.e. the last quantile index still
// at or below atom i.
std::int64_t last_index_at_or_below(const FinitePmf& F, const Rational& q, size_t i,
                                    std::int64_t cap) {
    Rational tail = Rational(1) - F.cdf(F.atoms()[i].first);  // > 0 below the top atom
    Rational p(1);
    std::int64_t k = 0;
    while (p >= tail) {
        p *= q;
        ++k;
        if (k > cap) throw std::runtime_error("quantize: iteration cap exceeded");
    }
    return k - 1;
}

}  // namespace

std::vector<std::pair<Rational, Rational>> quantized_pmf(const FinitePmf& F, const QParam& q) {
    const auto& atoms = F.atoms();
    std::vector<std::pair<Rational, Rational>> out;
    out.reserve(atoms.size());
    std::int64_t prev = 0;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i + 1 == atoms.size()) {
            // Geometric tail from index prev+1 onward: total mass q^prev.
            out.emplace_back(atoms[i].first, q.value().pow(prev));
        } else {
            std::int64_t m = last_index_at_or_below(F, q.value(), i, 1000000);
            Rational mass = q.value().pow(prev) - q.value().pow(m);  // sum over prev < k <= m
            out.emplace_back(atoms[i].first, mass);
            prev = m;
        }
    }
    return out;
}

QuantileEncoding encode_quantile_word(const FinitePmf& F, const QParam& q, std::int64_t cap) {
    const auto& atoms = F.atoms();
    std::vector<std::pair<int, ExtNat>> support;
    std::vector<Rational> values;
    std::int64_t prev = 0;
    int letter = 0;
    for (size_t i = 0; i + 1 < atoms.size(); ++i) {
        std::int64_t m = last_index_at_or_below(F, q.value(), i, cap);
        if (m > prev) {
            support.emplace_back(++letter, ExtNat(m - prev));
            values.push_back(atoms[i].first);
            prev = m;
        }
    }
    support.emplace_back(++letter, ExtNat::infinity());
    values.push_back(atoms.back().first);
    return {InversionFreeWord::finite(std::move(support)), std::move(values)};
}

std::vector<QuantizeRow> convergence_table(const FinitePmf& F, int n,
                                           const std::vector<Rational>& q_grid,
                                           std::int64_t samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("convergence_table: n must be >= 1");
    // Product measure F^n on value tuples.
    std::map<std::vector<Rational>, Rational> target{{{}, Rational(1)}};
    for (int step = 0; step < n; ++step) {
        std::map<std::vector<Rational>, Rational> next;
        for (const auto& [tuple, mass] : target) {
            for (const auto& [v, m] : F.atoms()) {
                auto t = tuple;
                t.push_back(v);
                next.emplace(std::move(t), mass * m);
            }
        }
        target = std::move(next);
    }

    std::vector<QuantizeRow> rows;
    std::uint64_t stream = 0;
    for (const auto& qr : q_grid) {
        QParam q(qr);
        QuantileEncoding enc = encode_quantile_word(F, q);
        auto law = marginal_law(enc.word, n, q);
        std::map<std::vector<Rational>, Rational> mapped;
        for (const auto& [w, p] : law) {
            std::vector<Rational> t;
            t.reserve(w.size());
            for (int a : w) t.push_back(enc.letter_values[static_cast<size_t>(a) - 1]);
            mapped.emplace(std::move(t), p);
        }
        QuantizeRow row{qr, tv_distance_exact(mapped, target).to_double(), 0.0, false};
        if (samples > 0) {
            std::map<std::vector<Rational>, double> empirical;
            std::map<std::vector<Rational>, double> target_f;
            for (const auto& [t, m] : target) target_f.emplace(t, m.to_double());
            double unit = 1.0 / static_cast<double>(samples);
            RngStream rng(seed, stream++);
            for (std::int64_t s = 0; s < samples; ++s) {
                Word w = sample_prefix(enc.word, n, q, rng);
                std::vector<Rational> t;
                for (int a : w) t.push_back(enc.letter_values[static_cast<size_t>(a) - 1]);
                empirical[t] += unit;
            }
            row.tv_empirical = tv_distance(empirical, target_f);
            row.has_empirical = true;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qx
