#pragma once

#include <pdvec/diagram.hpp>
#include <pdvec/error.hpp>
#include <pdvec/transforms.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdvec {

/// c_1..c_k, the first k elementary symmetric values of a root list of
/// degree `width`. These are the coefficients a_j of the monic polynomial
/// t^n - a_1 t^(n-1) + ... + (-1)^n a_n, without the alternating signs.
struct CoefficientVector {
    std::vector<complex> coefficients;
    std::uint64_t width = 0;

    std::size_t k() const noexcept { return coefficients.size(); }

    /// The first `k` coefficients.
    CoefficientVector truncated(std::size_t k) const {
        if (k == 0 || k > coefficients.size())
            throw std::invalid_argument("cannot truncate to k=" + std::to_string(k));
        return {{coefficients.begin(), coefficients.begin() + static_cast<std::ptrdiff_t>(k)}, width};
    }

    friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;
};

/// floor(sqrt(M)), clamped to at least 1.
inline std::size_t default_k(std::uint64_t m) {
    auto k = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
    while (k * k > m)
        --k;
    while ((k + 1) * (k + 1) <= m)
        ++k;
    return static_cast<std::size_t>(std::max<std::uint64_t>(k, 1));
}

/// Appends the root 0 with multiplicity M - width (merging with an existing
/// zero root), so that every diagram in a database has degree M.
inline ComplexRootList pad_roots(ComplexRootList roots, std::uint64_t m) {
    if (m < roots.width)
        throw std::invalid_argument("pad width " + std::to_string(m) + " is below the current width " +
                                    std::to_string(roots.width));
    const std::uint64_t extra = m - roots.width;
    if (extra == 0)
        return roots;
    const complex zero{};
    auto it = std::find_if(roots.roots.begin(), roots.roots.end(),
                           [&](const ComplexRoot& r) { return r.value == zero; });
    if (it != roots.roots.end())
        it->multiplicity += extra;
    else
        roots.roots.push_back({zero, extra});
    roots.width = m;
    return roots;
}

/// Elementary symmetric values c_1..c_k of the multiset of roots.
///
/// Runs the product recurrence: absorbing a root z updates
/// c_j <- c_j + z c_(j-1) for j descending, once per unit of multiplicity.
/// That is O(k) per root unit, O(k M) overall. Zero roots leave every c_j
/// unchanged and are skipped.
///
/// Throws overflow_error naming the first non-finite coefficient.
inline std::vector<complex> elementary_symmetric_values(std::span<const ComplexRoot> roots, std::size_t k) {
    std::vector<complex> c(k + 1, complex{});
    c[0] = 1.0;
    std::size_t absorbed = 0;
    for (const auto& r : roots) {
        if (r.value == complex{})
            continue;
        for (std::uint64_t rep = 0; rep < r.multiplicity; ++rep) {
            const std::size_t top = std::min(k, absorbed + 1);
            for (std::size_t j = top; j >= 1; --j)
                c[j] += r.value * c[j - 1];
            ++absorbed;
        }
    }
    for (std::size_t j = 1; j <= k; ++j)
        if (!std::isfinite(c[j].real()) || !std::isfinite(c[j].imag()))
            throw overflow_error("coefficient c_" + std::to_string(j) + " is not finite", j);
    c.erase(c.begin());
    return c;
}

inline CoefficientVector elementary_symmetric(const ComplexRootList& roots, std::size_t k) {
    if (k < 1 || k > roots.width)
        throw std::invalid_argument("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(roots.width) +
                                    "]");
    return {elementary_symmetric_values(roots.roots, k), roots.width};
}

/// transform -> pad to M -> first k symmetric values.
inline CoefficientVector embed(const PersistenceDiagram& d, TransformKind kind, std::uint64_t m, std::size_t k) {
    return elementary_symmetric(pad_roots(transform_diagram(d, kind), m), k);
}

}  // namespace pdvec
