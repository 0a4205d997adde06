#pragma once

#include <pdvec/detail/text.hpp>
#include <pdvec/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace pdvec {

/// A proper point (birth < death) of an ordinary persistence diagram.
struct PersistencePoint {
    double birth = 0.0;
    double death = 0.0;
    std::uint64_t multiplicity = 1;

    double persistence() const noexcept { return death - birth; }

    friend bool operator==(const PersistencePoint&, const PersistencePoint&) = default;
};

/// A class that never dies. Kept for provenance only; no metric looks at it.
struct EssentialPoint {
    double birth = 0.0;
    std::uint64_t multiplicity = 1;

    friend bool operator==(const EssentialPoint&, const EssentialPoint&) = default;
};

/// Multiset of proper points, stored sorted by (birth, death) with coincident
/// points merged into one entry. Immutable once built.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;

    explicit PersistenceDiagram(std::vector<PersistencePoint> points,
                                std::vector<EssentialPoint> essential = {})
        : points_(std::move(points)), essential_(std::move(essential)) {
        for (const auto& p : points_) {
            if (!std::isfinite(p.birth) || !std::isfinite(p.death))
                throw std::invalid_argument("diagram point has a non-finite coordinate");
            if (!(p.birth < p.death))
                throw std::invalid_argument("diagram point must satisfy birth < death");
            if (p.multiplicity < 1)
                throw std::invalid_argument("diagram point multiplicity must be at least 1");
        }
        for (const auto& e : essential_) {
            if (!std::isfinite(e.birth))
                throw std::invalid_argument("essential class has a non-finite birth");
            if (e.multiplicity < 1)
                throw std::invalid_argument("essential class multiplicity must be at least 1");
        }
        normalize();
    }

    std::span<const PersistencePoint> points() const noexcept { return points_; }
    std::span<const EssentialPoint> essential() const noexcept { return essential_; }

    /// Number of distinct (birth, death) locations.
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    std::uint64_t essential_count() const noexcept {
        std::uint64_t n = 0;
        for (const auto& e : essential_)
            n += e.multiplicity;
        return n;
    }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    void normalize() {
        std::sort(points_.begin(), points_.end(), [](const auto& a, const auto& b) {
            return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
        });
        std::vector<PersistencePoint> merged;
        merged.reserve(points_.size());
        for (const auto& p : points_) {
            if (!merged.empty() && merged.back().birth == p.birth && merged.back().death == p.death)
                merged.back().multiplicity += p.multiplicity;
            else
                merged.push_back(p);
        }
        points_ = std::move(merged);

        std::sort(essential_.begin(), essential_.end(),
                  [](const auto& a, const auto& b) { return a.birth < b.birth; });
        std::vector<EssentialPoint> merged_ess;
        for (const auto& e : essential_) {
            if (!merged_ess.empty() && merged_ess.back().birth == e.birth)
                merged_ess.back().multiplicity += e.multiplicity;
            else
                merged_ess.push_back(e);
        }
        essential_ = std::move(merged_ess);
    }

    std::vector<PersistencePoint> points_;
    std::vector<EssentialPoint> essential_;
};

/// Number of proper points counted with multiplicity.
inline std::uint64_t total_multiplicity(const PersistenceDiagram& d) noexcept {
    std::uint64_t n = 0;
    for (const auto& p : d.points())
        n += p.multiplicity;
    return n;
}

/// Multiset union.
inline PersistenceDiagram merge(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    std::vector<PersistencePoint> pts(a.points().begin(), a.points().end());
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    std::vector<EssentialPoint> ess(a.essential().begin(), a.essential().end());
    ess.insert(ess.end(), b.essential().begin(), b.essential().end());
    return PersistenceDiagram(std::move(pts), std::move(ess));
}

/// Reads `birth,death[,multiplicity]` rows. Blank lines and `#` comments are
/// skipped; rows whose death is `inf` are kept as essential classes.
inline PersistenceDiagram parse_diagram(std::string_view text) {
    std::vector<PersistencePoint> points;
    std::vector<EssentialPoint> essential;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        const auto line = detail::trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;

        const auto fields = detail::split(line, ',');
        if (fields.size() < 2 || fields.size() > 3)
            throw parse_error("expected birth,death[,multiplicity]", line_no);
        double birth = 0.0;
        double death = 0.0;
        if (!detail::parse_double(fields[0], birth) || !detail::parse_double(fields[1], death))
            throw parse_error("malformed number", line_no);
        std::uint64_t mult = 1;
        if (fields.size() == 3) {
            if (!detail::parse_uint(fields[2], mult))
                throw parse_error("malformed multiplicity", line_no);
            if (mult < 1)
                throw parse_error("multiplicity must be at least 1", line_no);
        }
        if (!std::isfinite(birth))
            throw parse_error("birth must be finite", line_no);
        if (std::isnan(death))
            throw parse_error("death must be a number", line_no);
        if (death == std::numeric_limits<double>::infinity()) {
            essential.push_back({birth, mult});
            continue;
        }
        if (!std::isfinite(death))
            throw parse_error("death must be finite or inf", line_no);
        if (!(birth < death))
            throw parse_error("birth must be strictly below death", line_no);
        points.push_back({birth, death, mult});
    }
    return PersistenceDiagram(std::move(points), std::move(essential));
}

inline PersistenceDiagram parse_diagram(std::istream& in) {
    return parse_diagram(detail::read_stream(in));
}

/// Rows sorted by (birth, death), essential classes last as `birth,inf,m`.
/// Uses the shortest round-trip decimal form of each coordinate.
inline std::string serialize_diagram(const PersistenceDiagram& d) {
    std::string out = "# birth,death,multiplicity\n";
    for (const auto& p : d.points()) {
        out += detail::format_shortest(p.birth);
        out += ',';
        out += detail::format_shortest(p.death);
        out += ',';
        out += std::to_string(p.multiplicity);
        out += '\n';
    }
    for (const auto& e : d.essential()) {
        out += detail::format_shortest(e.birth);
        out += ",inf,";
        out += std::to_string(e.multiplicity);
        out += '\n';
    }
    return out;
}

inline PersistenceDiagram load_diagram(const std::filesystem::path& path) {
    try {
        return parse_diagram(detail::read_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.what());
    }
}

inline void save_diagram(const std::filesystem::path& path, const PersistenceDiagram& d) {
    detail::write_file_atomic(path, serialize_diagram(d));
}

}  // namespace pdvec
