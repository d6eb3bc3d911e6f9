#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "qx/rational.hpp"

namespace qx {

struct DistanceReport {
    double tv = 0.0;
    double chi_square = 0.0;
    std::int64_t dof = 0;
    std::int64_t samples = 0;
    std::string law;  // identifier of the exact law compared against
};

namespace detail {
inline void check_pmf_sum(double s) {
    if (std::fabs(s - 1.0) > 1e-12) {
        throw std::invalid_argument("tv_distance: pmf does not sum to 1");
    }
}
}  // namespace detail

/// Total variation distance (1/2) sum |p - r| over the union of supports.
template <class K>
double tv_distance(const std::map<K, double>& p, const std::map<K, double>& r) {
    double sp = 0, sr = 0;
    for (const auto& [k, v] : p) sp += v;
    for (const auto& [k, v] : r) sr += v;
    detail::check_pmf_sum(sp);
    detail::check_pmf_sum(sr);
    double acc = 0;
    auto it = r.begin();
    for (const auto& [k, v] : p) {
        while (it != r.end() && it->first < k) {
            acc += std::fabs(it->second);
            ++it;
        }
        if (it != r.end() && it->first == k) {
            acc += std::fabs(v - it->second);
            ++it;
        } else {
            acc += std::fabs(v);
        }
    }
    for (; it != r.end(); ++it) acc += std::fabs(it->second);
    return acc / 2.0;
}

/// Exact-arithmetic total variation between exact pmfs.
template <class K>
Rational tv_distance_exact(const std::map<K, Rational>& p, const std::map<K, Rational>& r) {
    Rational sp(0), sr(0);
    for (const auto& [k, v] : p) sp += v;
    for (const auto& [k, v] : r) sr += v;
    if (!sp.is_one() || !sr.is_one()) {
        throw std::invalid_argument("tv_distance_exact: pmf does not sum to 1");
    }
    Rational acc(0);
    auto it = r.begin();
    for (const auto& [k, v] : p) {
        while (it != r.end() && it->first < k) {
            acc += it->second.abs();
            ++it;
        }
        if (it != r.end() && it->first == k) {
            acc += (v - it->second).abs();
            ++it;
        } else {
            acc += v.abs();
        }
    }
    for (; it != r.end(); ++it) acc += it->second.abs();
    return acc / Rational(2);
}

/// Compares empirical counts against an exact law: TV gates, chi-square is
/// reported as a diagnostic only.
template <class K>
DistanceReport compare_counts(const std::map<K, std::int64_t>& counts, std::int64_t total,
                              const std::map<K, Rational>& exact, std::string law) {
    if (total <= 0) throw std::invalid_argument("compare_counts: no samples");
    DistanceReport rep;
    rep.samples = total;
    rep.law = std::move(law);
    double tv = 0.0;
    double chi = 0.0;
    std::int64_t cells = 0;
    for (const auto& [k, p] : exact) {
        auto it = counts.find(k);
        double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        double pd = p.to_double();
        tv += std::fabs(observed / static_cast<double>(total) - pd);
        if (pd > 0) {
            double expected = pd * static_cast<double>(total);
            chi += (observed - expected) * (observed - expected) / expected;
            ++cells;
        }
    }
    for (const auto& [k, c] : counts) {
        if (exact.find(k) == exact.end()) {
            tv += static_cast<double>(c) / static_cast<double>(total);
        }
    }
    rep.tv = tv / 2.0;
    rep.chi_square = chi;
    rep.dof = cells > 0 ? cells - 1 : 0;
    return rep;
}

}  // namespace qx
