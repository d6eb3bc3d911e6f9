#include <doctest.h>

#include "qx/quantize.hpp"

using namespace qx;

TEST_CASE("quantiles of a step distribution") {
    FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
    CHECK(F.quantile(Rational(2, 5)) == Rational(0));
    CHECK(F.quantile(Rational(1, 2)) == Rational(0));
    CHECK(F.quantile(Rational(16, 25)) == Rational(1));
    CHECK(F.quantile(Rational(1)) == Rational(1));
    CHECK_THROWS(F.quantile(Rational(0)));
    CHECK_THROWS(FinitePmf::parse("0:1/2,1:1/3"));  // masses must sum to 1
}

TEST_CASE("quantile words") {
    QParam q35(Rational(3, 5));
    FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
    auto w = quantile_word(F, q35, 5);
    CHECK(w == std::vector<Rational>{Rational(0), Rational(1), Rational(1), Rational(1), Rational(1)});

    // Point mass: constant word.
    FinitePmf point = FinitePmf::parse("7:1");
    for (const auto& a : quantile_word(point, q35, 4)) CHECK(a == Rational(7));

    // q = 9/10: alpha_k = 0 exactly for k <= 6.
    QParam q910(Rational(9, 10));
    auto w2 = quantile_word(F, q910, 8);
    for (int k = 1; k <= 8; ++k) {
        CHECK(w2[static_cast<size_t>(k) - 1] == (k <= 6 ? Rational(0) : Rational(1)));
    }

    // Weak monotonicity holds for an asymmetric distribution too.
    FinitePmf G = FinitePmf::parse("-1:1/4,0:1/4,2:1/2");
    auto w3 = quantile_word(G, q910, 30);
    for (size_t i = 0; i + 1 < w3.size(); ++i) CHECK(w3[i] <= w3[i + 1]);
}

TEST_CASE("quantized measure") {
    FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
    auto nu = quantized_pmf(F, QParam(Rational(3, 5)));
    REQUIRE(nu.size() == 2);
    CHECK(nu[0] == std::pair{Rational(0), Rational(2, 5)});
    CHECK(nu[1] == std::pair{Rational(1), Rational(3, 5)});

    auto point = quantized_pmf(FinitePmf::parse("7:1"), QParam(Rational(1, 2)));
    REQUIRE(point.size() == 1);
    CHECK(point[0].second.is_one());

    // Masses always sum to 1 exactly.
    auto nu3 = quantized_pmf(FinitePmf::parse("-1:1/4,0:1/4,2:1/2"), QParam(Rational(9, 10)));
    Rational total(0);
    for (const auto& [x, m] : nu3) total += m;
    CHECK(total.is_one());
}

TEST_CASE("letter encoding of the quantile word") {
    FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
    auto enc = encode_quantile_word(F, QParam(Rational(9, 10)));
    CHECK(enc.word.str() == "1:6,2:inf");
    CHECK(enc.letter_values == std::vector<Rational>{Rational(0), Rational(1)});

    auto enc2 = encode_quantile_word(F, QParam(Rational(3, 5)));
    CHECK(enc2.word.str() == "1:1,2:inf");

    // An atom the quantile sequence never reaches disappears from the word.
    FinitePmf G = FinitePmf::parse("0:1/10,1:9/10");
    auto enc3 = encode_quantile_word(G, QParam(Rational(1, 2)));
    CHECK(enc3.word.str() == "1:inf");
    CHECK(enc3.letter_values == std::vector<Rational>{Rational(1)});
}

TEST_CASE("marginals converge to the product measure along the grid") {
    FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
    std::vector<Rational> grid{Rational(3, 5), Rational(9, 10), Rational(99, 100)};
    for (int n = 1; n <= 2; ++n) {
        auto rows = convergence_table(F, n, grid);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].tv > rows[1].tv);
        CHECK(rows[1].tv > rows[2].tv);
        CHECK(rows[2].tv <= 0.02);
    }
    // Point mass: zero distance at every q.
    auto rows = convergence_table(FinitePmf::parse("3:1"), 2, grid);
    for (const auto& r : rows) CHECK(r.tv == 0.0);
    // The empirical column lands near the exact one.
    auto with_mc = convergence_table(F, 1, {Rational(3, 5)}, 20000, 5);
    CHECK(with_mc[0].has_empirical);
    CHECK(with_mc[0].tv_empirical == doctest::Approx(with_mc[0].tv).epsilon(0.05));
}
