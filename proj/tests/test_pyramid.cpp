#include <doctest.h>

#include <algorithm>

#include "qx/pyramid.hpp"
#include "qx/rng.hpp"

using namespace qx;

namespace {
const Rational kQ{1, 2};
const QParam kHalf{kQ};
}  // namespace

TEST_CASE("edge weights") {
    CHECK(edge_weight({3, 1, 4}, 3, kQ) == Rational(1));
    CHECK(edge_weight({0, 0}, 1, kQ) == Rational(1));
    CHECK(edge_weight({1, 2, 3}, 1, kQ) == kQ.pow(5));
    CHECK_THROWS(edge_weight({1, 2}, 3, kQ));
}

TEST_CASE("dim: closed form and path enumeration") {
    CHECK(dim_vertex({5, 0, 0}, kQ) == Rational(1));
    CHECK(dim_vertex({2, 2}, kQ) ==
          Rational(1) + kQ + Rational(2) * kQ.pow(2) + kQ.pow(3) + kQ.pow(4));
    CHECK(dim_vertex({1, 1, 1}, kQ) == (Rational(1) + kQ) * (Rational(1) + kQ + kQ.pow(2)));
    for (const auto& q : {Rational(1, 3), Rational(1, 2)}) {
        for (int n = 0; n <= 6; ++n) {
            for (const auto& la : vertices_at_level(3, n)) {
                CHECK(dim_vertex(la, q) == dim_by_paths(la, q));
            }
        }
    }
}

TEST_CASE("dim_pair") {
    CHECK(dim_pair({0, 0}, {2, 2}, kQ) == dim_vertex({2, 2}, kQ));
    CHECK(dim_pair({1, 1}, {2, 2}, kQ) == kQ * (Rational(1) + kQ));
    CHECK(dim_pair({2, 0}, {1, 1}, kQ) == Rational(0));
    CHECK(dim_pair({1, 1}, {1, 1}, kQ) == Rational(1));
}

TEST_CASE("path concatenation consistency") {
    // dim(la) = sum over level-m vertices mu of dim(mu) * dim_pair(mu, la).
    for (int n = 1; n <= 6; ++n) {
        for (const auto& la : vertices_at_level(2, n)) {
            for (int m = 0; m <= n; ++m) {
                Rational total(0);
                for (const auto& mu : vertices_at_level(2, m)) {
                    total += dim_vertex(mu, kQ) * dim_pair(mu, la, kQ);
                }
                CHECK(total == dim_vertex(la, kQ));
            }
        }
    }
}

TEST_CASE("martin kernel: closed form equals the direct ratio") {
    CHECK(martin_kernel({0, 0}, {3, 2}, kQ) == Rational(1));
    CHECK(martin_kernel({2, 0}, {1, 4}, kQ) == Rational(0));  // la_1 < mu_1
    for (int n = 0; n <= 6; ++n) {
        for (const auto& la : vertices_at_level(3, n)) {
            for (int m = 0; m <= 4; ++m) {
                for (const auto& mu : vertices_at_level(3, m)) {
                    CHECK(martin_kernel(mu, la, kQ) == martin_kernel_ratio(mu, la, kQ));
                }
            }
        }
    }
}

TEST_CASE("boundary kernel values") {
    auto h = HeightFunction::parse("1,inf");
    CHECK(boundary_kernel({0, 0}, h, kQ) == Rational(1));
    CHECK(boundary_kernel({1, 0}, h, kQ) == Rational(1) - kQ);
    CHECK(boundary_kernel({0, 1}, h, kQ) == kQ);
    // h(1) = h(2) finite would not be a valid height function on N_2; use
    // d = 3 with a flat finite stretch: letter 2 never occurs.
    auto flat = HeightFunction::parse("1,1,inf");
    CHECK(boundary_kernel({0, 1, 0}, flat, kQ) == Rational(0));
    CHECK(boundary_kernel({1, 0, 0}, flat, kQ) == Rational(1) - kQ);
}

TEST_CASE("boundary kernel is the limit of the Martin kernel") {
    auto h = HeightFunction::parse("1,inf");
    auto lambda_at = [](std::int64_t n) {
        return Vertex{1, static_cast<int>(n) - 1};
    };
    std::vector<std::int64_t> levels{4, 8, 16, 32, 48, 60};
    for (const Vertex mu : {Vertex{1, 0}, Vertex{0, 1}, Vertex{1, 1}}) {
        auto rows = kernel_convergence_table(mu, h, lambda_at, levels, kHalf);
        for (size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows[i].abs_err >= rows[i + 1].abs_err);
        CHECK(rows.back().abs_err < 1e-6);
    }
}

TEST_CASE("normalization of boundary values against dim") {
    // sum over |mu| = n of dim(mu) * boundary_kernel(mu, h) = 1: these are the
    // level masses of the Gibbs measure attached to h.
    for (const std::string spec : {"1,inf", "2,inf", "0,inf", "3,inf"}) {
        auto h = HeightFunction::parse(spec);
        for (int n = 0; n <= 5; ++n) {
            Rational total(0);
            for (const auto& mu : vertices_at_level(2, n)) {
                total += dim_vertex(mu, kQ) * boundary_kernel(mu, h, kQ);
            }
            CHECK(total.is_one());
        }
    }
}

TEST_CASE("word to path bijection") {
    auto path = word_to_path({1, 1, 1}, 2, kQ);
    CHECK(path.size() == 4);
    CHECK(path.back() == Vertex{3, 0});
    auto p2 = word_to_path({2, 1}, 2, kQ);
    CHECK(p2[1] == Vertex{0, 1});
    CHECK(p2[2] == Vertex{1, 1});
    // Random words: the weight assertion runs inside word_to_path.
    RngStream rng(17);
    for (int trial = 0; trial < 2000; ++trial) {
        Word w(6);
        for (auto& a : w) a = 1 + static_cast<int>(rng.next_u64() % 3);
        CHECK(word_to_path(w, 3, kQ).back() ==
              Vertex{static_cast<int>(std::count(w.begin(), w.end(), 1)),
                     static_cast<int>(std::count(w.begin(), w.end(), 2)),
                     static_cast<int>(std::count(w.begin(), w.end(), 3))});
    }
}

TEST_CASE("gibbs check on measure-derived functions") {
    auto v = InversionFreeWord::parse("1:2,2:inf");
    LevelFunction phi = harmonic_from_word(v, 2, 4, kHalf);
    CHECK(gibbs_check(phi, kQ).ok);

    // The boundary construction gives the same function.
    auto h = word_to_height(v, 2);
    LevelFunction phi_b = harmonic_from_boundary(h, 2, 4, kQ);
    for (const auto& [la, value] : phi.values()) CHECK(phi_b.at(la) == value);

    // A convex combination of two Gibbs functions stays Gibbs.
    LevelFunction psi = harmonic_from_word(InversionFreeWord::parse("1:1,2:inf"), 2, 4, kHalf);
    LevelFunction mix(2, 4);
    for (const auto& [la, value] : phi.values()) {
        mix.set(la, (value + psi.at(la)) / Rational(2));
    }
    CHECK(gibbs_check(mix, kQ).ok);

    // Arbitrary values fail with a witness.
    LevelFunction junk(2, 2);
    for (int n = 0; n <= 2; ++n) {
        for (const auto& la : vertices_at_level(2, n)) junk.set(la, Rational(1, 7));
    }
    auto rep = gibbs_check(junk, kQ);
    CHECK_FALSE(rep.ok);
}

TEST_CASE("embedding into one more dimension is consistent") {
    for (int n = 0; n <= 5; ++n) {
        for (const auto& la : vertices_at_level(2, n)) {
            Vertex la3 = la;
            la3.push_back(0);
            CHECK(dim_vertex(la, kQ) == dim_vertex(la3, kQ));
            for (const auto& mu : vertices_at_level(2, 2)) {
                Vertex mu3 = mu;
                mu3.push_back(0);
                CHECK(martin_kernel(mu, la, kQ) == martin_kernel(mu3, la3, kQ));
            }
        }
    }
    auto h2 = HeightFunction::parse("1,inf");
    auto h3 = HeightFunction::parse("1,inf,inf");
    for (const auto& mu : vertices_at_level(2, 3)) {
        Vertex mu3 = mu;
        mu3.push_back(0);
        CHECK(boundary_kernel(mu, h2, kQ) == boundary_kernel(mu3, h3, kQ));
    }
}
