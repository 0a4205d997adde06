#pragma once

#include <pdvec/diagram.hpp>
#include <pdvec/retrieval.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdvec {

/// Parameters of the synthetic labeled database.
///
/// Each class gets a random base diagram of `base_points` points in the unit
/// square above the diagonal. Every member copies it, moves each point by
/// uniform noise in [-jitter, jitter]^2, and adds `noise_points` points lying
/// within `band` of the diagonal.
struct SynthParams {
    std::size_t classes = 12;
    std::size_t per_class = 19;
    std::size_t base_points = 8;
    double jitter = 0.02;
    std::size_t noise_points = 10;
    double band = 0.05;
    std::uint64_t seed = 1;
};

struct SynthModel {
    std::string id;
    std::string label;
    PersistenceDiagram diagram;
};

namespace detail {

inline std::string numbered(const char* prefix, std::size_t i, std::size_t count) {
    const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
    return buf;
}

}  // namespace detail

inline std::vector<SynthModel> synthesize(const SynthParams& p) {
    if (p.classes == 0 || p.per_class == 0)
        throw std::invalid_argument("synthetic database needs at least one class and one member");
    if (!(p.jitter >= 0.0) || !(p.band > 0.0) || p.band > 1.0)
        throw std::invalid_argument("jitter must be >= 0 and band in (0, 1]");

    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<PersistencePoint>> bases(p.classes);
    for (auto& base : bases) {
        for (std::size_t i = 0; i < p.base_points; ++i) {
            const double a = unit(rng);
            const double b = unit(rng);
            if (a == b) {
                --i;
                continue;
            }
            base.push_back({std::min(a, b), std::max(a, b), 1});
        }
    }

    std::uniform_real_distribution<double> shake(-p.jitter, p.jitter);
    std::vector<SynthModel> out;
    out.reserve(p.classes * p.per_class);
    for (std::size_t c = 0; c < p.classes; ++c) {
        const auto label = detail::numbered("class", c, p.classes);
        for (std::size_t m = 0; m < p.per_class; ++m) {
            std::vector<PersistencePoint> pts;
            for (const auto& b : bases[c]) {
                double u = std::clamp(b.birth + (p.jitter > 0 ? shake(rng) : 0.0), 0.0, 1.0);
                double v = std::clamp(b.death + (p.jitter > 0 ? shake(rng) : 0.0), 0.0, 1.0);
                // Back into the open half-plane: reflect across the diagonal,
                // drop points that landed on it.
                if (v < u)
                    std::swap(u, v);
                if (u == v)
                    continue;
                pts.push_back({u, v, 1});
            }
            for (std::size_t k = 0; k < p.noise_points; ++k) {
                const double u = unit(rng) * (1.0 - p.band);
                const double life = p.band * (1.0 - unit(rng));  // (0, band]
                if (!(u < u + life))
                    continue;
                pts.push_back({u, u + life, 1});
            }
            out.push_back({label + "_" + detail::numbered("m", m, p.per_class), label,
                           PersistenceDiagram(std::move(pts))});
        }
    }
    return out;
}

inline LabeledDatabase synthetic_database(const SynthParams& p) {
    LabeledDatabase db;
    for (auto& m : synthesize(p)) {
        DatabaseEntry e;
        e.id = std::move(m.id);
        e.label = std::move(m.label);
        e.diagram = std::move(m.diagram);
        db.add(std::move(e));
    }
    return db;
}

}  // namespace pdvec
