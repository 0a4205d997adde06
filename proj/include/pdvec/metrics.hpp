#pragma once

#include <pdvec/diagram.hpp>
#include <pdvec/matching.hpp>
#include <pdvec/viete.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdvec {

enum class MetricKind { d1, d2, d3, bottleneck };

inline MetricKind parse_metric_kind(std::string_view s) {
    if (s == "d1")
        return MetricKind::d1;
    if (s == "d2")
        return MetricKind::d2;
    if (s == "d3")
        return MetricKind::d3;
    if (s == "bottleneck")
        return MetricKind::bottleneck;
    throw std::invalid_argument("unknown metric '" + std::string(s) + "' (expected d1, d2, d3 or bottleneck)");
}

inline const char* to_string(MetricKind k) noexcept {
    switch (k) {
    case MetricKind::d1: return "d1";
    case MetricKind::d2: return "d2";
    case MetricKind::d3: return "d3";
    case MetricKind::bottleneck: return "bottleneck";
    }
    return "?";
}

inline bool is_coefficient_metric(MetricKind k) noexcept { return k != MetricKind::bottleneck; }

/// d1 = sum |a_j - b_j|, d2 = sum |a_j - b_j| / j, d3 = sum |a_j - b_j|^(1/j),
/// with j running from 1.
inline double coeff_distance(std::span<const complex> a, std::span<const complex> b, MetricKind kind) {
    if (a.size() != b.size())
        throw std::invalid_argument("coefficient vectors differ in length (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    double sum = 0.0;
    switch (kind) {
    case MetricKind::d1:
        for (std::size_t i = 0; i < a.size(); ++i)
            sum += std::abs(a[i] - b[i]);
        break;
    case MetricKind::d2:
        for (std::size_t i = 0; i < a.size(); ++i)
            sum += std::abs(a[i] - b[i]) / static_cast<double>(i + 1);
        break;
    case MetricKind::d3:
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double t = std::abs(a[i] - b[i]);
            sum += i == 0 ? t : std::pow(t, 1.0 / static_cast<double>(i + 1));
        }
        break;
    case MetricKind::bottleneck:
        throw std::invalid_argument("bottleneck is not a coefficient metric");
    }
    return sum;
}

inline double coeff_distance(const CoefficientVector& a, const CoefficientVector& b, MetricKind kind) {
    return coeff_distance(std::span<const complex>(a.coefficients), std::span<const complex>(b.coefficients), kind);
}

/// A point of the closed half-plane u <= v.
struct PlanePoint {
    double u = 0.0;
    double v = 0.0;
};

/// Cost of pairing two points: the cheaper of moving one onto the other
/// (sup norm) and sending both to the diagonal.
inline double point_distance(PlanePoint p, PlanePoint q) {
    if (!std::isfinite(p.u) || !std::isfinite(p.v) || !std::isfinite(q.u) || !std::isfinite(q.v) || p.u > p.v ||
        q.u > q.v)
        throw std::invalid_argument("point_distance requires finite points with u <= v");
    const double move = std::max(std::abs(p.u - q.u), std::abs(p.v - q.v));
    const double kill = std::max((p.v - p.u) / 2.0, (q.v - q.u) / 2.0);
    return std::min(move, kill);
}

namespace detail {

inline std::vector<PlanePoint> unit_copies(const PersistenceDiagram& d) {
    std::vector<PlanePoint> out;
    out.reserve(total_multiplicity(d));
    for (const auto& p : d.points())
        for (std::uint64_t i = 0; i < p.multiplicity; ++i)
            out.push_back({p.birth, p.death});
    return out;
}

inline double diagonal_cost(PlanePoint p) { return (p.v - p.u) / 2.0; }

}  // namespace detail

/// Exact bottleneck distance.
///
/// Both sides are completed with one diagonal partner per proper point of the
/// other side; a proper point may go to its own partner at half its
/// persistence, and partners pair with each other for free. The answer is the
/// smallest pairwise cost t for which the graph of pairs costing <= t has a
/// perfect matching, found by binary search over the sorted costs.
inline double bottleneck(const PersistenceDiagram& d, const PersistenceDiagram& e) {
    const auto a = detail::unit_copies(d);
    const auto b = detail::unit_copies(e);
    const std::size_t r = a.size();
    const std::size_t s = b.size();
    const std::size_t n = r + s;
    if (n == 0)
        return 0.0;

    // Left: a[0..r) then diagonal partners of b. Right: b[0..s) then partners of a.
    constexpr double absent = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n * n, absent);
    auto at = [&](std::size_t l, std::size_t rr) -> double& { return cost[l * n + rr]; };
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j)
            at(i, j) = point_distance(a[i], b[j]);
        at(i, s + i) = detail::diagonal_cost(a[i]);
    }
    for (std::size_t j = 0; j < s; ++j) {
        at(r + j, j) = detail::diagonal_cost(b[j]);
        for (std::size_t i = 0; i < r; ++i)
            at(r + j, s + i) = 0.0;
    }

    std::vector<double> candidates;
    candidates.reserve(n * n);
    for (double c : cost)
        if (c != absent)
            candidates.push_back(c);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto feasible = [&](double t) {
        BipartiteMatcher m(n, n);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t rr = 0; rr < n; ++rr)
                if (cost[l * n + rr] <= t)
                    m.add_edge(l, rr);
        return m.solve() == n;
    };

    // The largest candidate always admits the all-to-diagonal matching.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

inline constexpr std::size_t bruteforce_cap = 8;

/// min over bijections of max pair cost, by enumerating every bijection of
/// the two diagonal-completed point lists. Test oracle; total multiplicity of
/// both diagrams together must not exceed bruteforce_cap.
inline double bottleneck_bruteforce(const PersistenceDiagram& d, const PersistenceDiagram& e) {
    const auto a = detail::unit_copies(d);
    const auto b = detail::unit_copies(e);
    if (a.size() + b.size() > bruteforce_cap)
        throw std::invalid_argument("bottleneck_bruteforce is capped at " + std::to_string(bruteforce_cap) +
                                    " points in total");

    // Each side gains as many diagonal points as the other side has proper
    // points. A proper point reaches the diagonal at best at half its
    // persistence; two diagonal points are at distance 0.
    struct Slot {
        bool diagonal;
        PlanePoint p;
    };
    std::vector<Slot> left;
    std::vector<Slot> right;
    for (const auto& p : a)
        left.push_back({false, p});
    for (std::size_t j = 0; j < b.size(); ++j)
        left.push_back({true, {}});
    for (const auto& q : b)
        right.push_back({false, q});
    for (std::size_t i = 0; i < a.size(); ++i)
        right.push_back({true, {}});

    auto pair_cost = [](const Slot& x, const Slot& y) {
        if (x.diagonal && y.diagonal)
            return 0.0;
        if (x.diagonal)
            return detail::diagonal_cost(y.p);
        if (y.diagonal)
            return detail::diagonal_cost(x.p);
        return point_distance(x.p, y.p);
    };

    const std::size_t n = left.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    if (n == 0)
        return 0.0;
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < n && worst < best; ++i)
            worst = std::max(worst, pair_cost(left[i], right[perm[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace pdvec
