#pragma once

#include <pdvec/diagram.hpp>
#include <pdvec/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pdvec {

using Edge = std::pair<std::size_t, std::size_t>;

/// 1-skeleton of a mesh. Degree-0 persistence of a triangle mesh only depends
/// on this graph, so everything below works on graphs directly.
struct EdgeGraph {
    std::size_t vertex_count = 0;
    std::vector<Edge> edges;  // (a, b) with a < b, unique
};

inline EdgeGraph edge_graph(const TriangleMesh& mesh) {
    EdgeGraph g;
    g.vertex_count = mesh.vertices.size();
    g.edges.reserve(mesh.triangles.size() * 3);
    for (const auto& t : mesh.triangles) {
        for (std::size_t k = 0; k < 3; ++k) {
            auto a = t[k];
            auto b = t[(k + 1) % 3];
            if (a > b)
                std::swap(a, b);
            g.edges.emplace_back(a, b);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Links the two roots; returns the surviving root.
    std::size_t link(std::size_t ra, std::size_t rb) {
        if (rank_[ra] < rank_[rb])
            std::swap(ra, rb);
        parent_[rb] = ra;
        if (rank_[ra] == rank_[rb])
            ++rank_[ra];
        return ra;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

inline void check_function(const EdgeGraph& g, std::span<const double> f) {
    if (f.size() != g.vertex_count)
        throw std::invalid_argument("vertex function length does not match vertex count");
    for (double x : f)
        if (!std::isfinite(x))
            throw std::invalid_argument("vertex function has a non-finite value");
    for (const auto& [a, b] : g.edges)
        if (a >= g.vertex_count || b >= g.vertex_count)
            throw std::invalid_argument("edge index out of range");
}

}  // namespace detail

/// Ordinary 0th persistence diagram of the lower-star filtration.
///
/// Vertices enter at their value, edges at the larger endpoint value. When two
/// components meet, the one whose oldest vertex has the smaller (value, index)
/// survives and the other dies at the edge value. Zero-length pairs are not
/// stored; every surviving component becomes an essential class.
inline PersistenceDiagram zero_persistence(const EdgeGraph& g, std::span<const double> f) {
    detail::check_function(g, f);
    const std::size_t n = g.vertex_count;

    struct Weighted {
        double value;
        Edge e;
    };
    std::vector<Weighted> order;
    order.reserve(g.edges.size());
    for (const auto& e : g.edges)
        order.push_back({std::max(f[e.first], f[e.second]), e});
    std::sort(order.begin(), order.end(), [](const Weighted& a, const Weighted& b) {
        if (a.value != b.value)
            return a.value < b.value;
        return a.e < b.e;
    });

    auto older = [&](std::size_t a, std::size_t b) {
        return f[a] < f[b] || (f[a] == f[b] && a < b);
    };

    detail::UnionFind uf(n);
    std::vector<std::size_t> oldest(n);
    std::iota(oldest.begin(), oldest.end(), std::size_t{0});

    std::vector<PersistencePoint> points;
    for (const auto& [value, e] : order) {
        const auto ra = uf.find(e.first);
        const auto rb = uf.find(e.second);
        if (ra == rb)
            continue;
        auto survivor = oldest[ra];
        auto victim = oldest[rb];
        if (older(victim, survivor))
            std::swap(survivor, victim);
        if (f[victim] < value)
            points.push_back({f[victim], value, 1});
        oldest[uf.link(ra, rb)] = survivor;
    }

    std::vector<EssentialPoint> essential;
    for (std::size_t v = 0; v < n; ++v)
        if (uf.find(v) == v)
            essential.push_back({f[oldest[v]], 1});
    return PersistenceDiagram(std::move(points), std::move(essential));
}

inline PersistenceDiagram zero_persistence(const TriangleMesh& mesh, const VertexFunction& f) {
    return zero_persistence(edge_graph(mesh), f.values);
}

/// Rank of H0(X_u) -> H0(X_v): components of the sublevel graph at u that
/// stay distinct at v. Brute force, one union-find per level.
inline std::size_t beta0(const EdgeGraph& g, std::span<const double> f, double u, double v) {
    detail::check_function(g, f);
    if (u > v)
        throw std::invalid_argument("beta0 requires u <= v");
    const std::size_t n = g.vertex_count;

    auto sublevel = [&](double level) {
        detail::UnionFind uf(n);
        for (const auto& [a, b] : g.edges)
            if (f[a] <= level && f[b] <= level) {
                const auto ra = uf.find(a);
                const auto rb = uf.find(b);
                if (ra != rb)
                    uf.link(ra, rb);
            }
        return uf;
    };
    auto at_u = sublevel(u);
    auto at_v = sublevel(v);

    // One representative per component at u, then count distinct images at v.
    std::vector<std::size_t> images;
    std::vector<bool> seen(n, false);
    for (std::size_t x = 0; x < n; ++x) {
        if (!(f[x] <= u))
            continue;
        const auto r = at_u.find(x);
        if (seen[r])
            continue;
        seen[r] = true;
        images.push_back(at_v.find(x));
    }
    std::sort(images.begin(), images.end());
    return static_cast<std::size_t>(std::unique(images.begin(), images.end()) - images.begin());
}

inline std::size_t beta0(const TriangleMesh& mesh, const VertexFunction& f, double u, double v) {
    return beta0(edge_graph(mesh), f.values, u, v);
}

/// A quarter of the smallest positive gap between distinct function values;
/// 1 when the function takes fewer than two values.
inline double default_eps(std::span<const double> f) {
    std::vector<double> sorted(f.begin(), f.end());
    std::sort(sorted.begin(), sorted.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double d = sorted[i] - sorted[i - 1];
        if (d > 0.0 && (gap == 0.0 || d < gap))
            gap = d;
    }
    return gap > 0.0 ? gap / 4.0 : 1.0;
}

/// Four-term alternating sum of beta0 ranks around (u, v) at offset eps.
///
/// eps must isolate both coordinates: no function value other than u itself
/// may lie within eps of u (same for v), and u + eps < v - eps. Otherwise the
/// finite-eps value need not equal the limit and std::invalid_argument is thrown.
inline std::int64_t multiplicity0(const EdgeGraph& g, std::span<const double> f, double u, double v,
                                  double eps) {
    detail::check_function(g, f);
    if (!(u < v))
        throw std::invalid_argument("multiplicity0 requires u < v");
    if (!(eps > 0.0))
        throw std::invalid_argument("multiplicity0 requires eps > 0");
    if (!(u + eps < v - eps))
        throw std::invalid_argument("eps too large: u + eps must stay below v - eps");
    for (double x : f) {
        if (x != u && std::abs(x - u) <= eps)
            throw std::invalid_argument("eps too large to isolate the birth coordinate");
        if (x != v && std::abs(x - v) <= eps)
            throw std::invalid_argument("eps too large to isolate the death coordinate");
    }
    auto b = [&](double a, double c) { return static_cast<std::int64_t>(beta0(g, f, a, c)); };
    return b(u + eps, v - eps) - b(u - eps, v - eps) - b(u + eps, v + eps) + b(u - eps, v + eps);
}

inline std::int64_t multiplicity0(const TriangleMesh& mesh, const VertexFunction& f, double u, double v,
                                  double eps) {
    return multiplicity0(edge_graph(mesh), f.values, u, v, eps);
}

inline std::int64_t multiplicity0(const TriangleMesh& mesh, const VertexFunction& f, double u, double v) {
    return multiplicity0(mesh, f, u, v, default_eps(f.values));
}

}  // namespace pdvec
