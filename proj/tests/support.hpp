#pragma once

// Test-only oracles and random generators. Nothing here calls into the code
// paths it is used to check.

#include <pdvec/diagram.hpp>
#include <pdvec/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace pdvec::test {

using Rng = std::mt19937_64;

/// Elementary symmetric values by summing the product of every subset of
/// each size. Exponential; fine up to ~20 roots.
inline std::vector<std::complex<double>> subset_enumeration(const std::vector<std::complex<double>>& z,
                                                            std::size_t k) {
    const std::size_t n = z.size();
    std::vector<std::complex<double>> c(k, 0.0);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto bits = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (bits > k)
            continue;
        std::complex<double> prod = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i))
                prod *= z[i];
        c[bits - 1] += prod;
    }
    return c;
}

/// Kahan-compensated mean of the vertex positions.
inline Vec3 compensated_mean(const std::vector<Vec3>& pts) {
    double s[3] = {0, 0, 0};
    double comp[3] = {0, 0, 0};
    for (const auto& p : pts) {
        const double v[3] = {p.x, p.y, p.z};
        for (int a = 0; a < 3; ++a) {
            const double y = v[a] - comp[a];
            const double t = s[a] + y;
            comp[a] = (t - s[a]) - y;
            s[a] = t;
        }
    }
    const double n = static_cast<double>(pts.size());
    return {s[0] / n, s[1] / n, s[2] / n};
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    const double scale = std::max(1.0, std::abs(want));
    return std::abs(got - want) / scale;
}

/// Random diagram with `points` unit-multiplicity points in [0, 1]^2.
inline PersistenceDiagram random_diagram(Rng& rng, std::size_t points) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PersistencePoint> pts;
    while (pts.size() < points) {
        const double a = unit(rng);
        const double b = unit(rng);
        if (a != b)
            pts.push_back({std::min(a, b), std::max(a, b), 1});
    }
    return PersistenceDiagram(std::move(pts));
}

/// Random diagram whose total multiplicity is exactly `total`, drawn with
/// repeated points so multiplicities above 1 show up.
inline PersistenceDiagram random_multiset_diagram(Rng& rng, std::size_t total) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PersistencePoint> pts;
    std::size_t used = 0;
    while (used < total) {
        const double a = unit(rng);
        const double b = unit(rng);
        if (a == b)
            continue;
        const std::uint64_t m = std::min<std::size_t>(total - used, 1 + rng() % 2);
        pts.push_back({std::min(a, b), std::max(a, b), m});
        used += m;
    }
    return PersistenceDiagram(std::move(pts));
}

/// Random mesh on n vertices in the unit cube with `tris` random triangles.
inline TriangleMesh random_mesh(Rng& rng, std::size_t n, std::size_t tris) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    TriangleMesh m;
    for (std::size_t i = 0; i < n; ++i)
        m.vertices.push_back({unit(rng), unit(rng), unit(rng)});
    if (n >= 3) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        while (m.triangles.size() < tris) {
            const Triangle t{pick(rng), pick(rng), pick(rng)};
            if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
                m.triangles.push_back(t);
        }
    }
    return m;
}

/// n distinct values in [0, 1], in random order.
inline std::vector<double> distinct_values(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::set<double> seen;
    std::vector<double> out;
    while (out.size() < n) {
        const double x = unit(rng);
        if (seen.insert(x).second)
            out.push_back(x);
    }
    return out;
}

/// Rotation matrix from three Euler angles, applied to a vector.
struct Rotation {
    double m[3][3];

    static Rotation random(Rng& rng) {
        std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
        const double a = ang(rng), b = ang(rng), c = ang(rng);
        const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b), cc = std::cos(c),
                     sc = std::sin(c);
        Rotation r{};
        // Rz(a) * Ry(b) * Rx(c)
        r.m[0][0] = ca * cb;
        r.m[0][1] = ca * sb * sc - sa * cc;
        r.m[0][2] = ca * sb * cc + sa * sc;
        r.m[1][0] = sa * cb;
        r.m[1][1] = sa * sb * sc + ca * cc;
        r.m[1][2] = sa * sb * cc - ca * sc;
        r.m[2][0] = -sb;
        r.m[2][1] = cb * sc;
        r.m[2][2] = cb * cc;
        return r;
    }

    Vec3 operator()(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

}  // namespace pdvec::test
