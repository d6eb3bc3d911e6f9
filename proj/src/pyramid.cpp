#include "qx/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qx/pv.hpp"

namespace qx {

std::int64_t degree(const Vertex& la) {
    std::int64_t n = 0;
    for (int c : la) {
        if (c < 0) throw std::invalid_argument("Vertex: negative coordinate");
        n += c;
    }
    return n;
}

std::vector<Vertex> vertices_at_level(int d, int n) {
    std::vector<Vertex> out;
    Vertex cur(static_cast<size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == d - 1) {
            cur[static_cast<size_t>(idx)] = left;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[static_cast<size_t>(idx)] = v;
            rec(idx + 1, left - v);
        }
    };
    if (d < 1) throw std::invalid_argument("vertices_at_level: d must be >= 1");
    rec(0, n);
    return out;
}

Rational edge_weight(const Vertex& la, int a, const Rational& q) {
    const int d = static_cast<int>(la.size());
    if (a < 1 || a > d) throw std::invalid_argument("edge_weight: direction out of range");
    std::int64_t tail = 0;
    for (int b = a + 1; b <= d; ++b) tail += la[static_cast<size_t>(b) - 1];
    return q.pow(tail);
}

Rational dim_vertex(const Vertex& la, const Rational& q) {
    std::vector<std::int64_t> parts;
    parts.reserve(la.size());
    for (int c : la) {
        if (c < 0) throw std::invalid_argument("dim_vertex: negative coordinate");
        parts.push_back(c);
    }
    if (parts.empty()) throw std::invalid_argument("dim_vertex: empty vertex");
    return gaussian_multinomial(parts, q);
}

namespace {

Rational dim_paths_rec(const Vertex& la, const Rational& q, std::map<Vertex, Rational>& memo) {
    if (degree(la) == 0) return Rational(1);
    auto it = memo.find(la);
    if (it != memo.end()) return it->second;
    Rational acc(0);
    Vertex prev = la;
    for (int a = 1; a <= static_cast<int>(la.size()); ++a) {
        if (la[static_cast<size_t>(a) - 1] == 0) continue;
        --prev[static_cast<size_t>(a) - 1];
        acc += edge_weight(prev, a, q) * dim_paths_rec(prev, q, memo);
        ++prev[static_cast<size_t>(a) - 1];
    }
    memo.emplace(la, acc);
    return acc;
}

}  // namespace

Rational dim_by_paths(const Vertex& la, const Rational& q) {
    std::map<Vertex, Rational> memo;
    return dim_paths_rec(la, q, memo);
}

Rational dim_pair(const Vertex& mu, const Vertex& la, const Rational& q) {
    if (mu.size() != la.size()) throw std::invalid_argument("dim_pair: dimension mismatch");
    const int d = static_cast<int>(la.size());
    Vertex diff(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        diff[static_cast<size_t>(i)] = la[static_cast<size_t>(i)] - mu[static_cast<size_t>(i)];
        if (diff[static_cast<size_t>(i)] < 0) return Rational(0);
    }
    std::int64_t expo = 0;  // N(mu, la) = sum_{b<a} la_b mu_a - sum_{b<a} mu_b mu_a
    for (int b = 1; b <= d; ++b) {
        for (int a = b + 1; a <= d; ++a) {
            expo += static_cast<std::int64_t>(la[static_cast<size_t>(b) - 1] -
                                              mu[static_cast<size_t>(b) - 1]) *
                    mu[static_cast<size_t>(a) - 1];
        }
    }
    return q.pow(expo) * dim_vertex(diff, q);
}

Rational martin_kernel(const Vertex& mu, const Vertex& la, const Rational& q) {
    if (mu.size() != la.size()) throw std::invalid_argument("martin_kernel: dimension mismatch");
    const int d = static_cast<int>(la.size());
    const std::int64_t n = degree(la);
    const std::int64_t m = degree(mu);
    if (m > n) return Rational(0);

    std::int64_t pair_sum = 0;  // sum_{b<a} mu_b mu_a
    for (int b = 1; b <= d; ++b)
        for (int a = b + 1; a <= d; ++a)
            pair_sum += static_cast<std::int64_t>(mu[static_cast<size_t>(b) - 1]) *
                        mu[static_cast<size_t>(a) - 1];

    Rational acc = q.pow(-pair_sum) *
                   q_pochhammer(q, q, ExtNat(n - m)) / q_pochhammer(q, q, ExtNat(n));
    std::int64_t partial = 0;  // lambda_1 + ... + lambda_{a-1}
    for (int a = 1; a <= d; ++a) {
        std::int64_t la_a = la[static_cast<size_t>(a) - 1];
        std::int64_t mu_a = mu[static_cast<size_t>(a) - 1];
        acc *= q_pochhammer(q.pow(la_a), q.inverse(), ExtNat(mu_a));
        acc *= q.pow(partial * mu_a);
        partial += la_a;
        if (acc.is_zero()) return acc;
    }
    return acc;
}

Rational martin_kernel_ratio(const Vertex& mu, const Vertex& la, const Rational& q) {
    return dim_pair(mu, la, q) / dim_vertex(la, q);
}

Rational boundary_kernel(const Vertex& mu, const HeightFunction& h, const Rational& q) {
    const int d = static_cast<int>(mu.size());
    if (!h.has_finite_domain() || h.domain_size() != d) {
        throw std::invalid_argument("boundary_kernel: h must live on N_d with d = |mu|");
    }
    std::int64_t pair_sum = 0;
    for (int b = 1; b <= d; ++b)
        for (int a = b + 1; a <= d; ++a)
            pair_sum += static_cast<std::int64_t>(mu[static_cast<size_t>(b) - 1]) *
                        mu[static_cast<size_t>(a) - 1];

    Rational acc = q.pow(-pair_sum);
    for (int a = 1; a <= d; ++a) {
        std::int64_t mu_a = mu[static_cast<size_t>(a) - 1];
        // (q^{h(a)-h(a-1)}; q^{-1})_{mu_a} * q^{mu_a h(a-1)}, with q^inf = 0.
        acc *= q_pochhammer(q_pow(q, h.increment(a)), q.inverse(), ExtNat(mu_a));
        acc *= q_pow(q, h.value(a - 1)).pow(mu_a);
        if (acc.is_zero()) return acc;
    }
    return acc;
}

std::vector<KernelRow> kernel_convergence_table(
    const Vertex& mu, const HeightFunction& h,
    const std::function<Vertex(std::int64_t)>& lambda_at,
    const std::vector<std::int64_t>& levels, const QParam& q) {
    Rational limit = boundary_kernel(mu, h, q.value());
    double limit_f = limit.to_double();
    std::vector<KernelRow> rows;
    rows.reserve(levels.size());
    for (std::int64_t n : levels) {
        Vertex la = lambda_at(n);
        if (degree(la) != n) {
            throw std::invalid_argument("kernel_convergence_table: sequence level mismatch");
        }
        double k = martin_kernel(mu, la, q.value()).to_double();
        rows.push_back({n, k, limit_f, std::fabs(k - limit_f)});
    }
    return rows;
}

std::vector<Vertex> word_to_path(const Word& w, int d, const Rational& q) {
    std::vector<Vertex> path;
    Vertex cur(static_cast<size_t>(d), 0);
    path.push_back(cur);
    Rational weight(1);
    for (int a : w) {
        if (a < 1 || a > d) throw std::invalid_argument("word_to_path: letter outside {1..d}");
        weight *= edge_weight(cur, a, q);
        ++cur[static_cast<size_t>(a) - 1];
        path.push_back(cur);
    }
    if (weight != q.pow(inversions(w))) {
        throw std::logic_error("word_to_path: path weight does not match q^inv");
    }
    return path;
}

void LevelFunction::set(const Vertex& la, Rational value) {
    if (static_cast<int>(la.size()) != d_) {
        throw std::invalid_argument("LevelFunction: wrong vertex dimension");
    }
    if (degree(la) > max_) throw std::invalid_argument("LevelFunction: vertex above max level");
    values_[la] = std::move(value);
}

const Rational& LevelFunction::at(const Vertex& la) const {
    auto it = values_.find(la);
    if (it == values_.end()) throw std::out_of_range("LevelFunction: vertex not set");
    return it->second;
}

GibbsReport gibbs_recursion_check(const LevelFunction& phi, const Rational& q) {
    const int d = phi.dims();
    Vertex origin(static_cast<size_t>(d), 0);
    if (!phi.has(origin) || !phi.at(origin).is_one()) {
        return {false, origin, "phi(origin) != 1"};
    }
    for (const auto& [la, value] : phi.values()) {
        if (value.sign() < 0) return {false, la, "negative value"};
        if (degree(la) >= phi.max_level()) continue;
        Rational rhs(0);
        Vertex up = la;
        for (int a = 1; a <= d; ++a) {
            ++up[static_cast<size_t>(a) - 1];
            rhs += edge_weight(la, a, q) * phi.at(up);
            --up[static_cast<size_t>(a) - 1];
        }
        if (rhs != value) return {false, la, "recursion fails"};
    }
    return {};
}

GibbsReport gibbs_check(const LevelFunction& phi, const Rational& q) {
    GibbsReport rec = gibbs_recursion_check(phi, q);
    if (!rec.ok) return rec;
    for (int n = 0; n <= phi.max_level(); ++n) {
        Rational mass(0);
        for (const auto& la : vertices_at_level(phi.dims(), n)) {
            mass += dim_vertex(la, q) * phi.at(la);
        }
        if (!mass.is_one()) {
            return {false, Vertex(static_cast<size_t>(n)), "level mass != 1 at level " + std::to_string(n)};
        }
    }
    return {};
}

LevelFunction harmonic_from_word(const InversionFreeWord& v, int d, int max_level,
                                 const QParam& q) {
    LevelFunction phi(d, max_level);
    for (int n = 0; n <= max_level; ++n) {
        for (const auto& la : vertices_at_level(d, n)) {
            Word sorted;
            for (int a = 1; a <= d; ++a) {
                for (int c = 0; c < la[static_cast<size_t>(a) - 1]; ++c) sorted.push_back(a);
            }
            phi.set(la, marginal_probability(v, sorted, q));
        }
    }
    return phi;
}

LevelFunction harmonic_from_boundary(const HeightFunction& h, int d, int max_level,
                                     const Rational& q) {
    LevelFunction phi(d, max_level);
    for (int n = 0; n <= max_level; ++n) {
        for (const auto& la : vertices_at_level(d, n)) {
            phi.set(la, boundary_kernel(la, h, q));
        }
    }
    return phi;
}

}  // namespace qx
