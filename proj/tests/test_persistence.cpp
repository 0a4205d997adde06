#include <pdvec/persistence.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

using namespace pdvec;

namespace {

EdgeGraph path_graph(std::size_t n) {
    EdgeGraph g;
    g.vertex_count = n;
    for (std::size_t i = 0; i + 1 < n; ++i)
        g.edges.emplace_back(i, i + 1);
    return g;
}

// Four minima born at levels 0 (c), 1, 1, 1 (a) and one at 1.5. Two of the
// level-1 components die at 2 (b), the third at 3, the level-1.5 one at 2.5.
struct FigureOne {
    EdgeGraph g = path_graph(9);
    std::vector<double> f = {0, 2, 1, 2, 1, 3, 1, 2.5, 1.5};
    double a = 1, b = 2;
};

// All (u, v) grid points of distinct function values with their
// multiplicity0, keeping the positive ones.
PersistenceDiagram recovered_by_multiplicity(const EdgeGraph& g, const std::vector<double>& f) {
    std::vector<double> levels(f);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const double eps = default_eps(f);
    std::vector<PersistencePoint> pts;
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = i + 1; j < levels.size(); ++j) {
            const auto mu = multiplicity0(g, f, levels[i], levels[j], eps);
            EXPECT_GE(mu, 0);
            if (mu > 0)
                pts.push_back({levels[i], levels[j], static_cast<std::uint64_t>(mu)});
        }
    return PersistenceDiagram(std::move(pts));
}

}  // namespace

TEST(ZeroPersistence, PathGraph) {
    const auto d = zero_persistence(path_graph(3), std::vector<double>{0, 2, 1});
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points()[0], (PersistencePoint{1, 2, 1}));
    EXPECT_EQ(d.essential_count(), 1u);
    EXPECT_EQ(d.essential()[0].birth, 0.0);
}

TEST(ZeroPersistence, PathGraphMatchesSublevelCounting) {
    // brute force: number of sublevel components at each level
    const auto g = path_graph(3);
    const std::vector<double> f{0, 2, 1};
    EXPECT_EQ(beta0(g, f, 0.5, 0.5), 1u);
    EXPECT_EQ(beta0(g, f, 1.5, 1.5), 2u);
    EXPECT_EQ(beta0(g, f, 2.5, 2.5), 1u);
}

TEST(ZeroPersistence, ConstantFunction) {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    m.triangles = {{0, 1, 2}, {1, 3, 2}};
    VertexFunction f{{0, 0, 0, 0}, true};
    const auto d = zero_persistence(m, f);
    EXPECT_TRUE(d.empty());
    EXPECT_EQ(d.essential_count(), 1u);
}

TEST(ZeroPersistence, OneEssentialPerComponent) {
    EdgeGraph g;
    g.vertex_count = 5;
    g.edges = {{0, 1}, {2, 3}};
    const auto d = zero_persistence(g, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});
    EXPECT_TRUE(d.empty());
    EXPECT_EQ(d.essential_count(), 3u);
}

TEST(ZeroPersistence, FigureOneConfiguration) {
    const FigureOne fig;
    const auto d = zero_persistence(fig.g, fig.f);
    const PersistenceDiagram want({{1, 2, 2}, {1, 3, 1}, {1.5, 2.5, 1}}, {{0, 1}});
    EXPECT_EQ(d, want);
}

TEST(ZeroPersistence, EqualBirthTieKeepsLowerIndex) {
    // Two minima at 0 meet at 1; the one with the larger index dies.
    const auto d = zero_persistence(path_graph(3), std::vector<double>{0, 1, 0});
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points()[0], (PersistencePoint{0, 1, 1}));
    EXPECT_EQ(d.essential()[0].birth, 0.0);
}

TEST(ZeroPersistence, RejectsBadFunction) {
    EXPECT_THROW(zero_persistence(path_graph(3), std::vector<double>{0, 1}), std::invalid_argument);
    EXPECT_THROW(zero_persistence(path_graph(2), std::vector<double>{0, NAN}), std::invalid_argument);
}

TEST(Beta0, Examples) {
    test::Rng rng(1);
    const auto m = test::random_mesh(rng, 12, 30);
    const auto g = edge_graph(m);
    const auto f = test::distinct_values(rng, 12);
    const double top = *std::max_element(f.begin(), f.end());
    const double bottom = *std::min_element(f.begin(), f.end());
    const auto components = zero_persistence(g, f).essential_count();
    EXPECT_EQ(beta0(g, f, top, top), components);
    EXPECT_EQ(beta0(g, f, bottom - 0.1, top), 0u);
    EXPECT_THROW(beta0(g, f, 0.6, 0.5), std::invalid_argument);
}

TEST(Beta0, FigureOneRanks) {
    const FigureOne fig;
    const double e = 0.1;
    EXPECT_EQ(beta0(fig.g, fig.f, fig.a + e, fig.b - e), 4u);
    EXPECT_EQ(beta0(fig.g, fig.f, fig.a + e, fig.b + e), 2u);
    EXPECT_EQ(beta0(fig.g, fig.f, fig.a - e, fig.b - e), 1u);
    EXPECT_EQ(beta0(fig.g, fig.f, fig.a - e, fig.b + e), 1u);
}

TEST(Multiplicity0, FigureOne) {
    const FigureOne fig;
    EXPECT_EQ(multiplicity0(fig.g, fig.f, 1, 2, 0.1), 2);  // 4 - 1 - 2 + 1
    EXPECT_EQ(multiplicity0(fig.g, fig.f, 1, 3, 0.1), 1);
    EXPECT_EQ(multiplicity0(fig.g, fig.f, 1.5, 2.5, 0.1), 1);
    EXPECT_EQ(multiplicity0(fig.g, fig.f, 0, 2, 0.1), 0);  // not a diagram point
    EXPECT_EQ(multiplicity0(fig.g, fig.f, 1, 2.5, 0.1), 0);
}

TEST(Multiplicity0, RejectsEpsThatDoesNotIsolate) {
    const FigureOne fig;
    EXPECT_THROW(multiplicity0(fig.g, fig.f, 1, 2, 0.5), std::invalid_argument);
    EXPECT_THROW(multiplicity0(fig.g, fig.f, 1, 2, 0.0), std::invalid_argument);
    EXPECT_THROW(multiplicity0(fig.g, fig.f, 2, 1, 0.1), std::invalid_argument);
    EXPECT_DOUBLE_EQ(default_eps(fig.f), 0.125);
}

TEST(Multiplicity0, OracleEquivalenceOnRandomMeshes) {
    test::Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng() % 28;
        const auto m = test::random_mesh(rng, n, rng() % (2 * n));
        const VertexFunction f{test::distinct_values(rng, n), false};
        const auto d = zero_persistence(m, f);
        const auto oracle = recovered_by_multiplicity(edge_graph(m), f.values);
        EXPECT_EQ(PersistenceDiagram(std::vector<PersistencePoint>(d.points().begin(), d.points().end())), oracle)
            << "trial " << trial;
        for (const auto& p : d.points())
            EXPECT_EQ(multiplicity0(m, f, p.birth, p.death), static_cast<std::int64_t>(p.multiplicity));
    }
}

TEST(ZeroPersistence, LocalMinimaSumRule) {
    test::Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 29;
        const auto g = edge_graph(test::random_mesh(rng, n, rng() % (2 * n)));
        const auto f = test::distinct_values(rng, n);
        std::vector<bool> has_lower(n, false);
        for (const auto& [a, b] : g.edges)
            has_lower[f[a] < f[b] ? b : a] = true;
        const auto minima = static_cast<std::uint64_t>(std::count(has_lower.begin(), has_lower.end(), false));
        const auto d = zero_persistence(g, f);
        EXPECT_EQ(total_multiplicity(d) + d.essential_count(), minima);
    }
}

TEST(ZeroPersistence, IndependentOfVertexNumbering) {
    test::Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + rng() % 28;
        const auto m = test::random_mesh(rng, n, 2 * n);
        const auto f = test::distinct_values(rng, n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        TriangleMesh pm;
        pm.vertices.resize(n);
        std::vector<double> pf(n);
        for (std::size_t i = 0; i < n; ++i) {
            pm.vertices[perm[i]] = m.vertices[i];
            pf[perm[i]] = f[i];
        }
        for (const auto& t : m.triangles)
            pm.triangles.push_back({perm[t[0]], perm[t[1]], perm[t[2]]});
        EXPECT_EQ(zero_persistence(m, VertexFunction{f, false}), zero_persistence(pm, VertexFunction{pf, false}));
    }
}

TEST(EdgeGraph, UniqueSortedEdges) {
    TriangleMesh m;
    m.vertices.resize(4);
    m.triangles = {{0, 1, 2}, {2, 1, 3}};
    const auto g = edge_graph(m);
    EXPECT_EQ(g.edges, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}));
}
