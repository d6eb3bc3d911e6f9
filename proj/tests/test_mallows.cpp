#include <doctest.h>

#include <set>

#include "qx/mallows.hpp"
#include "qx/stats.hpp"

using namespace qx;

namespace {
const QParam kHalf{Rational(1, 2)};
}

TEST_CASE("truncated geometric pmf") {
    TruncatedGeometric g(4, kHalf);
    Rational norm = q_int(4, Rational(1, 2));  // 15/8
    CHECK(norm == Rational(15, 8));
    Rational total(0);
    for (int i = 1; i <= 4; ++i) {
        CHECK(g.pmf(i) == Rational(1, 2).pow(i - 1) / norm);
        total += g.pmf(i);
    }
    CHECK(total.is_one());
    CHECK(g.pmf(0) == Rational(0));
    CHECK(g.pmf(5) == Rational(0));
}

TEST_CASE("truncated geometric sampler matches its law") {
    for (NumericMode mode : {NumericMode::exact, NumericMode::floating}) {
        QParam q(Rational(1, 2), mode);
        TruncatedGeometric g(4, q);
        RngStream rng(42, mode == NumericMode::exact ? 0 : 1);
        std::map<int, std::int64_t> counts;
        const std::int64_t N = 40000;
        for (std::int64_t s = 0; s < N; ++s) ++counts[g.sample(rng)];
        std::map<int, Rational> exact;
        for (int i = 1; i <= 4; ++i) exact[i] = g.pmf(i);
        CHECK(compare_counts(counts, N, exact, "G_{q,4}").tv < 0.02);
    }
}

TEST_CASE("mallows pmf") {
    CHECK(mallows_pmf(Permutation::identity(4), kHalf) ==
          Rational(1) / q_factorial(4, Rational(1, 2)));
    CHECK(mallows_pmf(Permutation({3, 2, 1}), kHalf) == Rational(1, 21));
    for (int n = 1; n <= 6; ++n) {
        Rational total(0);
        for (const auto& sigma : symmetric_group(n)) total += mallows_pmf(sigma, kHalf);
        CHECK(total.is_one());
    }
}

TEST_CASE("backward ranks") {
    CHECK(backward_ranks(Permutation({1, 3, 2, 4})) == std::vector<int>{1, 2, 2, 4});
    CHECK(backward_ranks(Permutation::identity(5)) == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(backward_ranks(Permutation({5, 4, 3, 2, 1})) == std::vector<int>{1, 1, 1, 1, 1});

    // Bijection onto N_1 x ... x N_n, exhaustive for n <= 6.
    for (int n = 1; n <= 6; ++n) {
        std::set<std::vector<int>> seen;
        for (const auto& sigma : symmetric_group(n)) {
            auto beta = backward_ranks(sigma);
            CHECK(permutation_from_backward_ranks(beta) == sigma);
            seen.insert(beta);
        }
        std::int64_t expected = 1;
        for (int j = 1; j <= n; ++j) expected *= j;
        CHECK(static_cast<std::int64_t>(seen.size()) == expected);
    }

    // inv decomposes as sum of (j - beta_j).
    for (const auto& sigma : symmetric_group(5)) {
        auto beta = backward_ranks(sigma);
        std::int64_t sum = 0;
        for (int j = 1; j <= 5; ++j) sum += j - beta[static_cast<size_t>(j) - 1];
        CHECK(sum == inversions(sigma.word()));
    }
}

TEST_CASE("rank sampler: degenerate case and inversion decomposition") {
    RngStream rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        CHECK(sample_mallows_by_ranks(1, kHalf, rng) == Permutation::identity(1));
    }
    for (int trial = 0; trial < 200; ++trial) {
        Permutation sigma = sample_mallows_by_ranks(5, kHalf, rng);
        auto beta = backward_ranks(sigma);
        std::int64_t sum = 0;
        for (int j = 1; j <= 5; ++j) sum += j - beta[static_cast<size_t>(j) - 1];
        CHECK(sum == inversions(sigma.word()));
    }
}

TEST_CASE("rank sampler matches the exact law (smoke; acceptance pins the full TV)") {
    RngStream rng(11);
    std::map<Word, std::int64_t> counts;
    const std::int64_t N = 20000;
    for (std::int64_t s = 0; s < N; ++s) ++counts[sample_mallows_by_ranks(3, kHalf, rng).word()];
    CHECK(compare_counts(counts, N, mallows_law(3, kHalf), "Q_3").tv < 0.03);
}

TEST_CASE("q-shuffle basics") {
    RngStream rng(3);
    CHECK(q_shuffle({7}, kHalf, rng) == Word{7});

    auto dist = shuffle_distribution({1, 1, 2}, kHalf);
    // Oracle values: the orbit law is q^inv / (1+q+q^2); at q=1/2 the
    // normalizer is 7/4.
    CHECK(dist.at({1, 1, 2}) == Rational(4, 7));
    CHECK(dist.at({1, 2, 1}) == Rational(2, 7));
    CHECK(dist.at({2, 1, 1}) == Rational(1, 7));

    auto pair = shuffle_distribution({1, 2}, kHalf);
    CHECK(pair.at({1, 2}) == Rational(1) / (Rational(1) + Rational(1, 2)));
    CHECK(pair.at({2, 1}) == Rational(1, 2) / (Rational(1) + Rational(1, 2)));

    CHECK_THROWS(shuffle_distribution({1, 2, 3, 4, 5, 6, 7, 8, 9}, kHalf));
}

TEST_CASE("q-shuffle of 1..n is the Mallows law (exact, n <= 5)") {
    for (int n = 1; n <= 5; ++n) {
        Word base(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) base[static_cast<size_t>(i)] = i + 1;
        auto dist = shuffle_distribution(base, kHalf);
        auto law = mallows_law(n, kHalf);
        REQUIRE(dist.size() == law.size());
        for (const auto& [w, p] : law) CHECK(dist.at(w) == p);
    }
}

TEST_CASE("finite q-exchangeability verifier") {
    // Q_n passes.
    for (int n = 2; n <= 5; ++n) {
        CHECK(verify_finite_q_exchangeable(mallows_law(n, kHalf), Rational(1, 2)).ok);
    }
    // The uniform law fails for q != 1, with a witness.
    {
        std::map<Word, Rational> uniform;
        for (const auto& sigma : symmetric_group(3)) uniform[sigma.word()] = Rational(1, 6);
        auto rep = verify_finite_q_exchangeable(uniform, Rational(1, 2));
        CHECK_FALSE(rep.ok);
        REQUIRE(rep.witness.has_value());
        Word w = rep.witness->word;
        int i = rep.witness->position;
        CHECK(w[static_cast<size_t>(i) - 1] != w[static_cast<size_t>(i)]);
    }
    // Shuffles of inversion-free words pass; the reversed input fails.
    CHECK(verify_finite_q_exchangeable(shuffle_distribution({1, 1, 2, 2}, kHalf), Rational(1, 2)).ok);
    auto bad = verify_finite_q_exchangeable(shuffle_distribution({2, 2, 1, 1}, kHalf), Rational(1, 2));
    CHECK_FALSE(bad.ok);
    CHECK(bad.witness.has_value());
    // Malformed inputs are rejected.
    CHECK_THROWS(verify_finite_q_exchangeable({{Word{1, 2}, Rational(1, 2)}}, Rational(1, 2)));
}

TEST_CASE("Mallows law is invariant under inversion and the anti-diagonal reflection") {
    for (int n = 2; n <= 5; ++n) {
        auto law = mallows_law(n, kHalf);
        for (const auto& sigma : symmetric_group(n)) {
            CHECK(law.at(sigma.word()) == law.at(sigma.inverse().word()));
            // Reflection across the secondary diagonal: (i,j) -> (n+1-j, n+1-i).
            std::vector<int> img(static_cast<size_t>(n));
            for (int j = 1; j <= n; ++j) {
                img[static_cast<size_t>(n - sigma(j))] = n + 1 - j;
            }
            CHECK(law.at(sigma.word()) == law.at(Permutation(img).word()));
        }
    }
}

TEST_CASE("near q = 1 the Mallows law approaches the uniform law") {
    // q = 1 itself is excluded; at q = 1 - 1e-6 every probability is within
    // 1e-4 of 1/24.
    QParam q(Rational(999999, 1000000));
    for (const auto& sigma : symmetric_group(4)) {
        double p = mallows_pmf(sigma, q).to_double();
        CHECK(p == doctest::Approx(1.0 / 24.0).epsilon(1e-4));
    }
}

TEST_CASE("q-shuffle agrees with a linear-scan selection oracle") {
    // Same stream, same truncated-geometric draws: selecting the xi-th
    // remaining letter by linear scan must emit the same word as the
    // order-statistic tree.
    QParam q(Rational(1, 3));
    Word v{1, 1, 2, 3, 3, 3, 4};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream r1(99, seed), r2(99, seed);
        Word fast = q_shuffle(v, q, r1);
        // linear-scan re-implementation
        std::vector<int> remaining(v.begin(), v.end());
        Word slow;
        int n = static_cast<int>(v.size());
        for (int m = 1; m <= n; ++m) {
            TruncatedGeometric g(n - m + 1, q);
            int xi = g.sample(r2);
            slow.push_back(remaining[static_cast<size_t>(xi) - 1]);
            remaining.erase(remaining.begin() + (xi - 1));
        }
        CHECK(fast == slow);
    }
}
