#pragma once

#include <pdvec/detail/text.hpp>
#include <pdvec/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdvec {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3& operator+=(const Vec3& o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) noexcept { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) noexcept { x *= s; y *= s; z *= s; return *this; }

    friend Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
    friend Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
    friend Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }

using Triangle = std::array<std::size_t, 3>;

/// Vertices plus triangles. Triangles may be empty (a bare point cloud),
/// vertices may not.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;

    /// Throws std::invalid_argument on an out-of-range or repeated index.
    void validate() const {
        if (vertices.empty())
            throw std::invalid_argument("mesh has no vertices");
        for (const auto& v : vertices)
            if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
                throw std::invalid_argument("mesh vertex has a non-finite coordinate");
        for (const auto& t : triangles) {
            for (auto i : t)
                if (i >= vertices.size())
                    throw std::invalid_argument("triangle index out of range");
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
                throw std::invalid_argument("degenerate triangle");
        }
    }
};

/// Center B and unit direction w that define the line and plane filters.
struct MeshFrame {
    Vec3 center;
    Vec3 axis;
};

/// One value per vertex. `constant` is set when the raw values had no spread,
/// in which case all values are 0.
struct VertexFunction {
    std::vector<double> values;
    bool constant = false;
};

/// Reads an ASCII OFF file whose faces are all triangles. Per-face color
/// values after the indices are ignored.
inline TriangleMesh parse_off(std::string_view text) {
    struct Line {
        std::vector<std::string_view> toks;
        std::size_t no;
    };
    std::vector<Line> lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto toks = detail::tokens(line);
        if (!toks.empty())
            lines.push_back({std::move(toks), line_no});
    }

    std::size_t cur = 0;
    if (lines.empty() || lines[0].toks[0] != "OFF")
        throw parse_error("missing OFF header", lines.empty() ? 0 : lines[0].no);
    std::vector<std::string_view> counts(lines[0].toks.begin() + 1, lines[0].toks.end());
    std::size_t counts_line = lines[0].no;
    ++cur;
    if (counts.empty()) {
        if (cur >= lines.size())
            throw parse_error("truncated file: missing counts");
        counts = lines[cur].toks;
        counts_line = lines[cur].no;
        ++cur;
    }
    if (counts.size() < 2)
        throw parse_error("counts line needs vertex and face counts", counts_line);
    std::uint64_t nv = 0;
    std::uint64_t nf = 0;
    if (!detail::parse_uint(counts[0], nv) || !detail::parse_uint(counts[1], nf))
        throw parse_error("malformed counts", counts_line);

    TriangleMesh mesh;
    mesh.vertices.reserve(nv);
    for (std::uint64_t i = 0; i < nv; ++i, ++cur) {
        if (cur >= lines.size())
            throw parse_error("truncated file: expected " + std::to_string(nv) + " vertices");
        const auto& l = lines[cur];
        if (l.toks.size() < 3)
            throw parse_error("vertex needs three coordinates", l.no);
        Vec3 v;
        if (!detail::parse_double(l.toks[0], v.x) || !detail::parse_double(l.toks[1], v.y) ||
            !detail::parse_double(l.toks[2], v.z))
            throw parse_error("malformed vertex coordinate", l.no);
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw parse_error("non-finite vertex coordinate", l.no);
        mesh.vertices.push_back(v);
    }
    if (mesh.vertices.empty())
        throw parse_error("mesh has no vertices", counts_line);

    mesh.triangles.reserve(nf);
    for (std::uint64_t i = 0; i < nf; ++i, ++cur) {
        if (cur >= lines.size())
            throw parse_error("truncated file: expected " + std::to_string(nf) + " faces");
        const auto& l = lines[cur];
        std::uint64_t arity = 0;
        if (!detail::parse_uint(l.toks[0], arity))
            throw parse_error("malformed face", l.no);
        if (arity != 3)
            throw parse_error("only triangular faces are supported", l.no);
        if (l.toks.size() < 4)
            throw parse_error("face lists fewer than 3 indices", l.no);
        Triangle t{};
        for (std::size_t k = 0; k < 3; ++k) {
            std::uint64_t idx = 0;
            if (!detail::parse_uint(l.toks[k + 1], idx))
                throw parse_error("malformed face index", l.no);
            if (idx >= nv)
                throw parse_error("face index out of range", l.no);
            t[k] = static_cast<std::size_t>(idx);
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw parse_error("degenerate triangle", l.no);
        mesh.triangles.push_back(t);
    }
    return mesh;
}

inline TriangleMesh parse_off(std::istream& in) { return parse_off(detail::read_stream(in)); }

inline TriangleMesh load_off(const std::filesystem::path& path) {
    try {
        return parse_off(detail::read_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.what());
    }
}

inline std::string serialize_off(const TriangleMesh& mesh) {
    std::string out = "OFF\n";
    out += std::to_string(mesh.vertices.size()) + ' ' + std::to_string(mesh.triangles.size()) + " 0\n";
    for (const auto& v : mesh.vertices)
        out += detail::format_shortest(v.x) + ' ' + detail::format_shortest(v.y) + ' ' +
               detail::format_shortest(v.z) + '\n';
    for (const auto& t : mesh.triangles)
        out += "3 " + std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' + std::to_string(t[2]) + '\n';
    return out;
}

/// Unweighted mean of the vertex positions.
inline Vec3 center_of_mass(const TriangleMesh& mesh) {
    if (mesh.vertices.empty())
        throw std::invalid_argument("center_of_mass of an empty mesh");
    Vec3 sum;
    for (const auto& v : mesh.vertices)
        sum += v;
    return sum * (1.0 / static_cast<double>(mesh.vertices.size()));
}

struct AxisVector {
    Vec3 raw;   // w exactly as the weighted sum defines it
    Vec3 unit;  // w / |w|
};

inline constexpr double axis_tolerance = 1e-9;

/// w = sum (v_i - B)|v_i - B| / sum |v_i - B|^2.
///
/// Throws geometry_error when every vertex sits on B, or when |w| falls below
/// axis_tolerance (the orientation is then undefined, e.g. point-symmetric
/// shapes).
inline AxisVector axis_vector(const TriangleMesh& mesh, const Vec3& center) {
    Vec3 num;
    double den = 0.0;
    for (const auto& v : mesh.vertices) {
        const Vec3 d = v - center;
        const double r = norm(d);
        num += d * r;
        den += r * r;
    }
    if (!(den > 0.0))
        throw geometry_error("axis undefined: all vertices coincide with the center");
    const Vec3 w = num * (1.0 / den);
    const double len = norm(w);
    if (len < axis_tolerance)
        throw geometry_error("axis undefined: weighted direction vanishes (symmetric shape)");
    return {w, w * (1.0 / len)};
}

/// Translates `center` to the origin and scales so the farthest vertex has norm 1.
inline TriangleMesh normalize_mesh(const TriangleMesh& mesh, const Vec3& center) {
    double radius = 0.0;
    for (const auto& v : mesh.vertices)
        radius = std::max(radius, norm(v - center));
    if (!(radius > 0.0))
        throw geometry_error("cannot normalize: all vertices coincide with the center");
    TriangleMesh out;
    out.triangles = mesh.triangles;
    out.vertices.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices)
        out.vertices.push_back((v - center) * (1.0 / radius));
    return out;
}

/// The frame of a normalized copy of `mesh`: center of mass at the origin,
/// unit axis from axis_vector. Returns the normalized mesh alongside.
struct FramedMesh {
    TriangleMesh mesh;
    MeshFrame frame;
};

inline FramedMesh frame_mesh(const TriangleMesh& mesh) {
    mesh.validate();
    const Vec3 b = center_of_mass(mesh);
    TriangleMesh normalized = normalize_mesh(mesh, b);
    const Vec3 origin{};
    const AxisVector w = axis_vector(normalized, origin);
    return {std::move(normalized), MeshFrame{origin, w.unit}};
}

inline double line_distance(const Vec3& p, const MeshFrame& frame) noexcept {
    return norm(cross(p - frame.center, frame.axis));
}

inline double plane_distance(const Vec3& p, const MeshFrame& frame) noexcept {
    return std::abs(dot(p - frame.center, frame.axis));
}

/// Min-max rescale onto [0, 1]. A constant input maps to all zeros with
/// `constant` set.
inline VertexFunction rescale_unit(std::vector<double> raw) {
    VertexFunction f;
    if (raw.empty())
        return f;
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double min = *lo;
    const double span = *hi - *lo;
    if (!(span > 0.0)) {
        f.values.assign(raw.size(), 0.0);
        f.constant = true;
        return f;
    }
    for (auto& x : raw)
        x = (x - min) / span;
    f.values = std::move(raw);
    return f;
}

/// f_L before rescaling: distance of each vertex from the line through the
/// center along the axis.
inline std::vector<double> raw_line_values(const TriangleMesh& mesh, const MeshFrame& frame) {
    std::vector<double> out;
    out.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices)
        out.push_back(line_distance(v, frame));
    return out;
}

/// f_P before rescaling: distance of each vertex from the plane through the
/// center orthogonal to the axis.
inline std::vector<double> raw_plane_values(const TriangleMesh& mesh, const MeshFrame& frame) {
    std::vector<double> out;
    out.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices)
        out.push_back(plane_distance(v, frame));
    return out;
}

inline VertexFunction filter_line(const TriangleMesh& mesh, const MeshFrame& frame) {
    return rescale_unit(raw_line_values(mesh, frame));
}

inline VertexFunction filter_plane(const TriangleMesh& mesh, const MeshFrame& frame) {
    return rescale_unit(raw_plane_values(mesh, frame));
}

enum class FilterKind { line, plane };

inline FilterKind parse_filter_kind(std::string_view s) {
    if (s == "line")
        return FilterKind::line;
    if (s == "plane")
        return FilterKind::plane;
    throw std::invalid_argument("unknown filter '" + std::string(s) + "' (expected line or plane)");
}

}  // namespace pdvec
