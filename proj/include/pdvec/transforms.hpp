#pragma once

#include <pdvec/diagram.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdvec {

using complex = std::complex<double>;

/// How diagram points are sent to the complex plane.
///   R: identity, (u, v) -> u + iv
///   S: scales u + iv by its distance from the diagonal; the diagonal goes to 0
///   T: rotates by the point's norm and scales by (v - u) / 2; the diagonal goes to 0
enum class TransformKind { R, S, T };

inline constexpr TransformKind all_transforms[] = {TransformKind::R, TransformKind::S, TransformKind::T};

inline TransformKind parse_transform_kind(std::string_view s) {
    if (s == "R")
        return TransformKind::R;
    if (s == "S")
        return TransformKind::S;
    if (s == "T")
        return TransformKind::T;
    throw std::invalid_argument("unknown transform '" + std::string(s) + "' (expected R, S or T)");
}

inline const char* to_string(TransformKind k) noexcept {
    switch (k) {
    case TransformKind::R: return "R";
    case TransformKind::S: return "S";
    case TransformKind::T: return "T";
    }
    return "?";
}

namespace detail {
inline void check_finite(double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v))
        throw std::invalid_argument("transform of a non-finite point");
}
}  // namespace detail

inline complex transform_R(double u, double v) {
    detail::check_finite(u, v);
    return {u, v};
}

inline complex transform_S(double u, double v) {
    detail::check_finite(u, v);
    if (u == 0.0 && v == 0.0)
        return {0.0, 0.0};
    const double alpha = std::sqrt(u * u + v * v);
    const double scale = (v - u) / (alpha * std::sqrt(2.0));
    return {scale * u, scale * v};
}

inline complex transform_T(double u, double v) {
    detail::check_finite(u, v);
    const double alpha = std::sqrt(u * u + v * v);
    const double half = (v - u) / 2.0;
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return {half * (c - s), half * (c + s)};
}

inline complex transform_point(TransformKind kind, double u, double v) {
    switch (kind) {
    case TransformKind::R: return transform_R(u, v);
    case TransformKind::S: return transform_S(u, v);
    case TransformKind::T: return transform_T(u, v);
    }
    throw std::invalid_argument("bad transform kind");
}

struct ComplexRoot {
    complex value;
    std::uint64_t multiplicity = 1;

    friend bool operator==(const ComplexRoot&, const ComplexRoot&) = default;
};

/// Roots with merged multiplicities. `width` is the degree of the polynomial
/// they define, i.e. the total multiplicity including any padding zeros.
struct ComplexRootList {
    std::vector<ComplexRoot> roots;
    std::uint64_t width = 0;

    /// Builds a list from raw roots, merging exactly equal values.
    static ComplexRootList from_roots(std::vector<ComplexRoot> roots) {
        std::sort(roots.begin(), roots.end(), [](const ComplexRoot& a, const ComplexRoot& b) {
            if (a.value.real() != b.value.real())
                return a.value.real() < b.value.real();
            return a.value.imag() < b.value.imag();
        });
        ComplexRootList out;
        for (const auto& r : roots) {
            if (r.multiplicity == 0)
                continue;
            out.width += r.multiplicity;
            if (!out.roots.empty() && out.roots.back().value == r.value)
                out.roots.back().multiplicity += r.multiplicity;
            else
                out.roots.push_back(r);
        }
        return out;
    }

    friend bool operator==(const ComplexRootList&, const ComplexRootList&) = default;
};

/// Image of the diagram's proper points; points with identical images are
/// merged by summing multiplicities. width == total_multiplicity(d).
inline ComplexRootList transform_diagram(const PersistenceDiagram& d, TransformKind kind) {
    std::vector<ComplexRoot> roots;
    roots.reserve(d.size());
    for (const auto& p : d.points())
        roots.push_back({transform_point(kind, p.birth, p.death), p.multiplicity});
    return ComplexRootList::from_roots(std::move(roots));
}

}  // namespace pdvec
