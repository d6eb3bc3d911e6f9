// Acceptance suite: one check per criterion, exact arithmetic wherever the
// contract is exact, fixed seeds for every Monte-Carlo figure. Prints one
// PASS/FAIL line per criterion; exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qx/flags.hpp"
#include "qx/inversion_free.hpp"
#include "qx/mallows.hpp"
#include "qx/pv.hpp"
#include "qx/pyramid.hpp"
#include "qx/quantize.hpp"
#include "qx/rng.hpp"
#include "qx/stats.hpp"
#include "qx/words.hpp"

using namespace qx;

namespace {

const std::vector<Rational> kMacMahonQ = {Rational(1, 3), Rational(1, 2), Rational(7, 10)};
const std::vector<Rational> kSamplerQ = {Rational(1, 3), Rational(1, 2), Rational(9, 10)};

Rational orbit_sum_bruteforce(Word word, const Rational& q) {
    std::sort(word.begin(), word.end());
    Rational acc(0);
    do {
        acc += q.pow(inversions_quadratic(word));
    } while (std::next_permutation(word.begin(), word.end()));
    return acc;
}

std::vector<Word> weakly_increasing_words(int max_len, int alphabet) {
    std::vector<Word> out;
    std::function<void(Word&, int)> rec = [&](Word& acc, int lo) {
        if (!acc.empty()) out.push_back(acc);
        if (static_cast<int>(acc.size()) == max_len) return;
        for (int a = lo; a <= alphabet; ++a) {
            acc.push_back(a);
            rec(acc, a);
            acc.pop_back();
        }
    };
    Word acc;
    rec(acc, 1);
    return out;
}

// ---- criteria ----

bool criterion1_macmahon(std::string& detail) {
    std::int64_t checked = 0;
    for (const auto& q : kMacMahonQ) {
        for (int d = 1; d <= 3; ++d) {
            for (int n = 1; n <= 8; ++n) {
                for (const auto& la : vertices_at_level(d, n)) {
                    Word word;
                    for (int a = 1; a <= d; ++a) {
                        for (int c = 0; c < la[static_cast<size_t>(a) - 1]; ++c) {
                            word.push_back(a);
                        }
                    }
                    std::vector<std::int64_t> parts(la.begin(), la.end());
                    if (orbit_sum_bruteforce(word, q) != gaussian_multinomial(parts, q)) {
                        detail = "mismatch at lambda level " + std::to_string(n);
                        return false;
                    }
                    ++checked;
                }
            }
        }
    }
    detail = std::to_string(checked) + " multiplicity vectors, 3 q values, exact";
    return true;
}

bool criterion2_mallows(std::string& detail) {
    for (int n = 1; n <= 8; ++n) {
        Rational total(0);
        QParam q(Rational(1, 2));
        for (const auto& sigma : symmetric_group(n)) total += mallows_pmf(sigma, q);
        if (!total.is_one()) {
            detail = "pmf does not sum to 1 at n = " + std::to_string(n);
            return false;
        }
    }

    {
        QParam q(Rational(1, 2));
        auto dist = shuffle_distribution({1, 2, 3, 4}, q);
        for (const auto& [w, p] : mallows_law(4, q)) {
            if (dist.at(w) != p) {
                detail = "shuffle distribution of 1234 differs from the Mallows law";
                return false;
            }
        }
    }

    double worst = 0;
    for (const auto& qq : kSamplerQ) {
        QParam q(qq);
        auto exact = mallows_law(4, q);
        for (int sampler = 0; sampler < 2; ++sampler) {
            RngStream rng(2024, static_cast<std::uint64_t>(sampler));
            std::map<Word, std::int64_t> counts;
            for (int s = 0; s < 100000; ++s) {
                Word w = sampler == 0 ? sample_mallows_by_ranks(4, q, rng).word()
                                      : q_shuffle({1, 2, 3, 4}, q, rng);
                ++counts[w];
            }
            auto rep = compare_counts(counts, 100000, exact, "Q_4");
            worst = std::max(worst, rep.tv);
            if (rep.tv > 0.01) {
                detail = "sampler TV " + std::to_string(rep.tv) + " > 0.01 at q = " + qq.str();
                return false;
            }
        }
    }
    std::ostringstream os;
    os << "pmf exact to n = 8; both samplers worst TV " << worst << " <= 0.01 at 1e5 samples";
    detail = os.str();
    return true;
}

bool criterion3_exchangeability(std::string& detail) {
    QParam q(Rational(1, 2));
    std::int64_t passed = 0, reversed_failed = 0;
    for (const auto& v : weakly_increasing_words(6, 3)) {
        auto dist = shuffle_distribution(v, q);
        if (!verify_finite_q_exchangeable(dist, q.value()).ok) {
            detail = "shuffle of " + word_to_string(v) + " is not q-exchangeable";
            return false;
        }
        ++passed;
        Word rev(v.rbegin(), v.rend());
        if (rev != v) {
            auto bad = verify_finite_q_exchangeable(shuffle_distribution(rev, q), q.value());
            if (bad.ok || !bad.witness.has_value()) {
                detail = "reversed word " + word_to_string(rev) + " unexpectedly passed";
                return false;
            }
            ++reversed_failed;
        }
    }
    detail = std::to_string(passed) + " inversion-free words pass; " +
             std::to_string(reversed_failed) + " reversed words fail with witnesses";
    return true;
}

bool criterion4_pv_consistency(std::string& detail) {
    QParam q(Rational(1, 2));
    std::int64_t checked = 0;
    for (const std::string spec :
         {"1:2,2:inf", "1:1,2:2,3:inf", "1:1,2:1,3:1,4:1,5:1,6:inf"}) {
        auto v = InversionFreeWord::parse(spec);
        int support = static_cast<int>(v.explicit_support().size());
        // Every u with |u| <= 5 over the support, plus its prefixes' states.
        std::vector<Word> frontier{{}};
        for (int len = 0; len < 5; ++len) {
            std::vector<Word> next;
            for (const auto& u : frontier) {
                PrefixState state(v);
                Rational prod(1);
                bool dead = false;
                for (int a : u) {
                    prod *= transition_probability(state, a, q);
                    if (prod.is_zero()) {
                        dead = true;
                        break;
                    }
                    state.emit(a);
                }
                if (!dead) {
                    Rational total(0);
                    for (int idx = 0; idx < support; ++idx) {
                        total += transition_probability(state, v.support_letter(idx), q);
                    }
                    if (!total.is_one()) {
                        detail = "transitions do not sum to 1 after " + word_to_string(u);
                        return false;
                    }
                }
                if (marginal_probability(v, u, q) != prod) {
                    detail = "marginal != transition product at u = " + word_to_string(u);
                    return false;
                }
                ++checked;
                for (int idx = 0; idx < support; ++idx) {
                    Word ua = u;
                    ua.push_back(v.support_letter(idx));
                    next.push_back(std::move(ua));
                }
            }
            frontier = std::move(next);
        }
        for (const auto& u : frontier) {
            Rational prod(1);
            PrefixState state(v);
            for (int a : u) {
                prod *= transition_probability(state, a, q);
                if (prod.is_zero()) break;
                state.emit(a);
            }
            if (marginal_probability(v, u, q) != prod) {
                detail = "marginal != transition product at u = " + word_to_string(u);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " prefixes checked exactly, three word shapes";
    return true;
}

bool criterion5_backends(std::string& detail) {
    // Both backends are generalized-inverse transforms of the same uniform
    // draws, so they are compared with common random numbers: each sample
    // feeds the two backends identical stream states. This estimates the TV
    // between the backend laws with no support-size noise floor (the raw
    // independent-stream estimator has bias ~ sum sqrt(p)/sqrt(pi N) ~ 0.024
    // for the all-ones word, which exceeds the tolerance by itself; it is
    // reported as a diagnostic).
    QParam q(Rational(1, 2));
    double worst = 0, worst_indep = 0;
    const int N = 100000;
    for (const std::string spec : {"1:2,2:inf", ";ones"}) {
        auto v = InversionFreeWord::parse(spec);
        std::map<Word, double> pos, let, pos_i, let_i;
        for (int s = 0; s < N; ++s) {
            RngStream r1(501, static_cast<std::uint64_t>(s));
            RngStream r2(501, static_cast<std::uint64_t>(s));  // common random numbers
            pos[sample_prefix(v, 3, q, r1, SampleBackend::positional)] += 1.0 / N;
            let[sample_prefix(v, 3, q, r2, SampleBackend::letterwise)] += 1.0 / N;
            RngStream r3(777, static_cast<std::uint64_t>(s));
            RngStream r4(778, static_cast<std::uint64_t>(s));
            pos_i[sample_prefix(v, 3, q, r3, SampleBackend::positional)] += 1.0 / N;
            let_i[sample_prefix(v, 3, q, r4, SampleBackend::letterwise)] += 1.0 / N;
        }
        double tv = tv_distance(pos, let);
        worst = std::max(worst, tv);
        worst_indep = std::max(worst_indep, tv_distance(pos_i, let_i));
        if (tv > 0.015) {
            detail = "backend TV " + std::to_string(tv) + " > 0.015 for v = " + spec;
            return false;
        }
    }
    std::ostringstream os;
    os << "worst 3-letter TV " << worst << " <= 0.015 at 1e5 samples (common random numbers; "
       << "independent-stream diagnostic " << worst_indep << ")";
    detail = os.str();
    return true;
}

bool criterion6_pyramid(std::string& detail) {
    const Rational q(1, 2);
    for (int d = 1; d <= 3; ++d) {
        for (int n = 0; n <= 8; ++n) {
            for (const auto& la : vertices_at_level(d, n)) {
                if (dim_vertex(la, q) != dim_by_paths(la, q)) {
                    detail = "dim mismatch";
                    return false;
                }
            }
        }
    }
    for (int d = 2; d <= 3; ++d) {
        for (int n = 0; n <= 8; ++n) {
            for (const auto& la : vertices_at_level(d, n)) {
                for (int m = 0; m <= 4; ++m) {
                    for (const auto& mu : vertices_at_level(d, m)) {
                        if (martin_kernel(mu, la, q) != martin_kernel_ratio(mu, la, q)) {
                            detail = "martin kernel mismatch";
                            return false;
                        }
                    }
                }
            }
        }
    }
    RngStream rng(606);
    for (int trial = 0; trial < 10000; ++trial) {
        int len = 1 + static_cast<int>(rng.next_u64() % 8);
        Word w(static_cast<size_t>(len));
        for (auto& a : w) a = 1 + static_cast<int>(rng.next_u64() % 3);
        word_to_path(w, 3, q);  // throws if the weight differs from q^inv
    }
    detail = "dim and Martin kernel dual routes exact; 1e4 random path weights = q^inv";
    return true;
}

bool criterion7_boundary(std::string& detail) {
    QParam q(Rational(1, 2));
    double last_worst = 0;
    for (const std::string hspec : {"1,inf", "2,inf"}) {
        HeightFunction h = HeightFunction::parse(hspec);
        std::int64_t base = h.value(1).value();
        auto lambda_at = [&](std::int64_t n) {
            return Vertex{static_cast<int>(base), static_cast<int>(n - base)};
        };
        std::vector<std::int64_t> levels;
        for (std::int64_t n = base + 2; n <= 60; ++n) levels.push_back(n);
        for (const Vertex mu : {Vertex{1, 0}, Vertex{0, 1}, Vertex{1, 1}}) {
            auto rows = kernel_convergence_table(mu, h, lambda_at, levels, q);
            for (size_t i = 0; i + 1 < rows.size(); ++i) {
                if (rows[i].abs_err < rows[i + 1].abs_err) {
                    detail = "kernel error not monotone for h = " + hspec;
                    return false;
                }
            }
            if (rows.back().abs_err >= 1e-6) {
                detail = "kernel error at level 60 is " + std::to_string(rows.back().abs_err);
                return false;
            }
            last_worst = std::max(last_worst, rows.back().abs_err);
        }
    }
    std::ostringstream os;
    os << "six (mu, h) pairs monotone; |K_60 - limit| <= " << last_worst << " < 1e-6";
    detail = os.str();
    return true;
}

bool criterion8_matrix_law(std::string& detail) {
    QParam q(Rational(1, 2));
    for (int k = 1; k <= 3; ++k) {
        Rational total(0);
        for (const auto& [m, p] : truncation_law(k, q)) {
            total += p;
            if (truncation_pmf(m.transpose(), q) != p) {
                detail = "transpose symmetry fails at k = " + std::to_string(k);
                return false;
            }
        }
        if (!total.is_one()) {
            detail = "truncation law does not sum to 1 at k = " + std::to_string(k);
            return false;
        }
    }
    for (int n = 1; n <= 6; ++n) {
        auto law = mallows_law(n, q);
        for (const auto& sigma : symmetric_group(n)) {
            if (law.at(sigma.word()) != law.at(sigma.inverse().word())) {
                detail = "Q_n inversion symmetry fails at n = " + std::to_string(n);
                return false;
            }
        }
    }
    auto limit = truncation_law(2, q);
    std::map<MonomialMatrix, std::int64_t> counts;
    RngStream rng(808);
    auto naturals = InversionFreeWord::naturals();
    const int N = 100000;
    for (int s = 0; s < N; ++s) {
        Word w = sample_prefix(naturals, 2, q, rng, SampleBackend::positional);
        ++counts[*MonomialMatrix::from_word_prefix(w, 2)];
    }
    auto rep = compare_counts(counts, N, limit, "theta_2");
    if (rep.tv > 0.01) {
        detail = "empirical theta_2 TV " + std::to_string(rep.tv) + " > 0.01";
        return false;
    }
    std::ostringstream os;
    os << "sums exact, transpose exact, Q_n symmetry exact; theta_2 TV " << rep.tv << " <= 0.01";
    detail = os.str();
    return true;
}

bool criterion9_flags(std::string& detail) {
    GaloisField F(2);
    const Rational q(1, 2);
    for (int n = 0; n <= 4; ++n) {
        std::map<Vertex, std::int64_t> counts;
        for (const auto& flag : enumerate_flags(F, n, 2)) ++counts[flag.type()];
        for (const auto& la : vertices_at_level(2, n)) {
            std::vector<std::int64_t> parts(la.begin(), la.end());
            std::int64_t got = counts.count(la) ? counts.at(la) : 0;
            if (Rational(got) != gaussian_multinomial(parts, Rational(2))) {
                detail = "flag count mismatch at level " + std::to_string(n);
                return false;
            }
        }
    }
    for (int level = 0; level <= 4; ++level) {
        for (const auto& la : vertices_at_level(2, level)) {
            for (int a = 1; a <= 2; ++a) {
                std::int64_t brute = extension_count_bruteforce(F, la, a);
                if (brute != extension_count(la, a, 2)) {
                    detail = "extension count mismatch";
                    return false;
                }
                if (!extension_edge_relation_holds(la, a, q)) {
                    detail = "edge relation fails";
                    return false;
                }
            }
        }
    }
    auto v = InversionFreeWord::parse("1:1,2:inf");  // the word 1 2 2 2 ...
    LevelFunction phi = harmonic_from_word(v, 2, 5, QParam(q));
    LevelFunction psi = gibbs_to_invariant(phi, q);
    auto rep = invariant_measure_check(psi, 4, F);
    if (!rep.ok) {
        detail = "invariant measure check failed: " + rep.detail;
        return false;
    }
    detail = "counts = Gaussian multinomials; brute-force extension counts = closed form "
             "(levels <= 4); phi -> psi passes the brute-force recursion exactly";
    return true;
}

bool criterion10_quantize(std::string& detail) {
    FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
    std::vector<Rational> grid{Rational(3, 5), Rational(9, 10), Rational(99, 100)};
    double tv_at_099 = 0;
    for (int n = 1; n <= 2; ++n) {
        auto rows = convergence_table(F, n, grid);
        if (!(rows[0].tv > rows[1].tv && rows[1].tv > rows[2].tv)) {
            detail = "TV not strictly decreasing at n = " + std::to_string(n);
            return false;
        }
        if (rows[2].tv > 0.02) {
            detail = "TV at q = 0.99 is " + std::to_string(rows[2].tv) + " > 0.02";
            return false;
        }
        tv_at_099 = std::max(tv_at_099, rows[2].tv);
    }
    std::ostringstream os;
    os << "exact TVs strictly decreasing; worst TV at q = 0.99 is " << tv_at_099 << " <= 0.02";
    detail = os.str();
    return true;
}

bool criterion11_pushforward(std::string& detail) {
    QParam q(Rational(1, 2));
    std::int64_t checked = 0;
    for (const auto& v : weakly_increasing_words(5, 4)) {
        auto dist = shuffle_distribution(v, q);
        std::map<Word, Rational> pushed;
        for (const auto& [w, p] : dist) {
            Word image = pushforward(w, [](int a) { return std::min(a, 2); });
            auto [it, inserted] = pushed.try_emplace(std::move(image), p);
            if (!inserted) it->second += p;
        }
        if (!verify_finite_q_exchangeable(pushed, q.value()).ok) {
            detail = "pushforward of " + word_to_string(v) + " fails";
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " words over {1..4}, clamp to {1,2}, all exact";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        bool (*run)(std::string&);
    };
    const std::vector<Criterion> criteria = {
        {1, "exact MacMahon identity (|lambda| <= 8, d <= 3)", criterion1_macmahon},
        {2, "Mallows correctness (pmf, shuffle route, sampler TV)", criterion2_mallows},
        {3, "finite q-exchangeability of shuffles (|v| <= 6)", criterion3_exchangeability},
        {4, "P^(v) marginal/transition consistency (|u| <= 5)", criterion4_pv_consistency},
        {5, "positional vs letterwise sampler agreement", criterion5_backends},
        {6, "pyramid oracle equivalences", criterion6_pyramid},
        {7, "Martin kernel boundary convergence (d = 2)", criterion7_boundary},
        {8, "infinite Mallows matrix law", criterion8_matrix_law},
        {9, "Galois-field flag correspondence (qtilde = 2)", criterion9_flags},
        {10, "quantization marginals approach the product law", criterion10_quantize},
        {11, "monotone pushforward preserves q-exchangeability", criterion11_pushforward},
    };
    const std::map<int, double> budget_seconds = {{1, 30.0}, {9, 60.0}};

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto b = budget_seconds.find(c.id);
        if (ok && b != budget_seconds.end() && secs > b->second) {
            ok = false;
            detail = "runtime budget exceeded: " + std::to_string(secs) + " s";
        }
        std::printf("criterion %2d [%s] %-55s (%.2f s) %s\n", c.id, ok ? "PASS" : "FAIL", c.name,
                    secs, detail.c_str());
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    } else {
        std::printf("acceptance: %d criteria FAILED\n", failures);
    }
    return failures;
}
