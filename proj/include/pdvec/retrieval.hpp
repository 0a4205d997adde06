#pragma once

#include <pdvec/detail/parallel.hpp>
#include <pdvec/detail/text.hpp>
#include <pdvec/diagram.hpp>
#include <pdvec/error.hpp>
#include <pdvec/metrics.hpp>
#include <pdvec/transforms.hpp>
#include <pdvec/viete.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pdvec {

struct DatabaseEntry {
    std::string id;
    std::string label;  // empty when unknown, e.g. straight after load_index
    PersistenceDiagram diagram;
    std::array<std::optional<CoefficientVector>, 3> embeddings;

    const std::optional<CoefficientVector>& embedding(TransformKind kind) const {
        return embeddings[static_cast<std::size_t>(kind)];
    }
};

/// Models with unique ids. For each transform, every stored coefficient
/// vector has the same width M and length k.
class LabeledDatabase {
public:
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::span<const DatabaseEntry> entries() const noexcept { return entries_; }
    const DatabaseEntry& operator[](std::size_t i) const { return entries_.at(i); }

    std::optional<std::size_t> find(std::string_view id) const {
        const auto it = by_id_.find(std::string(id));
        if (it == by_id_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view id) const {
        if (auto i = find(id))
            return *i;
        throw error("unknown model id '" + std::string(id) + "'");
    }

    std::size_t add(DatabaseEntry entry) {
        if (entry.id.empty())
            throw std::invalid_argument("model id must not be empty");
        if (by_id_.count(entry.id))
            throw std::invalid_argument("duplicate model id '" + entry.id + "'");
        for (auto kind : all_transforms)
            if (const auto& v = entry.embedding(kind))
                check_shape(kind, *v);
        by_id_.emplace(entry.id, entries_.size());
        entries_.push_back(std::move(entry));
        return entries_.size() - 1;
    }

    void set_label(std::size_t i, std::string label) { entries_.at(i).label = std::move(label); }
    void set_diagram(std::size_t i, PersistenceDiagram d) { entries_.at(i).diagram = std::move(d); }

    void set_embedding(std::size_t i, TransformKind kind, CoefficientVector v) {
        auto& slot = entries_.at(i).embeddings[static_cast<std::size_t>(kind)];
        slot.reset();
        check_shape(kind, v);
        slot = std::move(v);
    }

    void clear_embeddings(TransformKind kind) {
        for (auto& e : entries_)
            e.embeddings[static_cast<std::size_t>(kind)].reset();
    }

    /// Largest total multiplicity over all diagrams: the M every diagram is padded to.
    std::uint64_t max_total_multiplicity() const noexcept {
        std::uint64_t m = 0;
        for (const auto& e : entries_)
            m = std::max(m, total_multiplicity(e.diagram));
        return m;
    }

    /// Embeds every diagram with transform `kind`, padding to `m` (default:
    /// the database maximum) and keeping `k` coefficients (default:
    /// floor(sqrt(M))). Replaces any previous embedding for this transform.
    void embed_all(TransformKind kind, std::optional<std::size_t> k = std::nullopt,
                   std::optional<std::uint64_t> m = std::nullopt, std::size_t threads = 1) {
        const std::uint64_t width = m.value_or(max_total_multiplicity());
        if (width == 0)
            throw error("cannot embed: every diagram is empty (M = 0)");
        const std::size_t kk = k.value_or(default_k(width));
        std::vector<CoefficientVector> out(entries_.size());
        detail::parallel_for(entries_.size(), threads,
                             [&](std::size_t i) { out[i] = embed(entries_[i].diagram, kind, width, kk); });
        clear_embeddings(kind);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i].embeddings[static_cast<std::size_t>(kind)] = std::move(out[i]);
    }

    /// (M, k) shared by the stored vectors of `kind`, if any.
    std::optional<std::pair<std::uint64_t, std::size_t>> embedding_shape(TransformKind kind) const {
        for (const auto& e : entries_)
            if (const auto& v = e.embedding(kind))
                return std::pair{v->width, v->k()};
        return std::nullopt;
    }

private:
    void check_shape(TransformKind kind, const CoefficientVector& v) const {
        if (auto shape = embedding_shape(kind); shape && (shape->first != v.width || shape->second != v.k()))
            throw std::invalid_argument(std::string("embeddings for transform ") + to_string(kind) +
                                        " disagree on M or k");
    }

    std::vector<DatabaseEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

/// Symmetric, zero-diagonal matrix of pairwise distances, indexed like `ids`.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<std::string> ids)
        : ids_(std::move(ids)), values_(ids_.size() * ids_.size(), 0.0) {}

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }

    /// Writes both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value) {
        if (i == j && value != 0.0)
            throw std::invalid_argument("distance matrix diagonal must be zero");
        if (!(value >= 0.0))
            throw std::invalid_argument("distances must be non-negative");
        values_[i * ids_.size() + j] = value;
        values_[j * ids_.size() + i] = value;
    }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::vector<std::string> ids_;
    std::vector<double> values_;
};

namespace detail {

inline const CoefficientVector& require_embedding(const DatabaseEntry& e, TransformKind kind) {
    const auto& v = e.embedding(kind);
    if (!v)
        throw error("model '" + e.id + "' has no embedding for transform " + to_string(kind));
    return *v;
}

inline std::span<const complex> leading(const CoefficientVector& v, std::size_t k) {
    if (k == 0 || k > v.k())
        throw error("requested k=" + std::to_string(k) + " but embeddings store only " + std::to_string(v.k()) +
                    " coefficients");
    return std::span<const complex>(v.coefficients).first(k);
}

}  // namespace detail

/// Pairwise distances for the whole database, each unordered pair computed
/// once. For coefficient metrics the stored vectors of `transform` are used,
/// truncated to `k` leading coefficients when given.
inline DistanceMatrix distance_matrix(const LabeledDatabase& db, MetricKind metric,
                                      TransformKind transform = TransformKind::R,
                                      std::optional<std::size_t> k = std::nullopt, std::size_t threads = 1) {
    std::vector<std::string> ids;
    ids.reserve(db.size());
    for (const auto& e : db.entries())
        ids.push_back(e.id);
    DistanceMatrix out(std::move(ids));
    const std::size_t n = db.size();

    if (metric == MetricKind::bottleneck) {
        detail::parallel_for(n, threads, [&](std::size_t i) {
            for (std::size_t j = i + 1; j < n; ++j)
                out.set(i, j, bottleneck(db[i].diagram, db[j].diagram));
        });
        return out;
    }

    std::vector<std::span<const complex>> vecs;
    vecs.reserve(n);
    for (const auto& e : db.entries()) {
        const auto& v = detail::require_embedding(e, transform);
        vecs.push_back(detail::leading(v, k.value_or(v.k())));
    }
    detail::parallel_for(n, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
            out.set(i, j, coeff_distance(vecs[i], vecs[j], metric));
    });
    return out;
}

/// Every other item ordered by ascending distance from `query`, ties broken
/// by ascending id.
inline std::vector<std::size_t> rank_others(const DistanceMatrix& m, std::size_t query) {
    std::vector<std::size_t> order;
    order.reserve(m.size());
    for (std::size_t j = 0; j < m.size(); ++j)
        if (j != query)
            order.push_back(j);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (m(query, a) != m(query, b))
            return m(query, a) < m(query, b);
        return m.ids()[a] < m.ids()[b];
    });
    return order;
}

struct PRPoint {
    double recall = 0.0;
    double precision = 0.0;
};

struct PRTable {
    std::vector<PRPoint> rows;
};

/// Interpolated precision of one ranking at recall levels 1/L, 2/L, ..., 1.
///
/// `relevant` flags each retrieved item in rank order. The interpolated value
/// at level l/L is the best precision reached at any recall >= l/L. Requires
/// at least one relevant item.
template <std::ranges::input_range Flags>
std::vector<double> interpolated_precision(const Flags& relevant, std::size_t levels) {
    std::vector<std::size_t> hits;  // 1-based ranks of relevant items
    std::size_t rank = 0;
    for (bool r : relevant) {
        ++rank;
        if (r)
            hits.push_back(rank);
    }
    const std::size_t total = hits.size();
    if (total == 0)
        throw std::invalid_argument("interpolated_precision needs at least one relevant item");

    // best_from[i] = max precision over hits i.. total-1
    std::vector<double> best_from(total + 1, 0.0);
    for (std::size_t i = total; i-- > 0;)
        best_from[i] = std::max(best_from[i + 1], static_cast<double>(i + 1) / static_cast<double>(hits[i]));

    std::vector<double> out(levels);
    for (std::size_t l = 1; l <= levels; ++l) {
        // first hit i (1-based) with i / total >= l / levels
        const std::size_t i = (l * total + levels - 1) / levels;
        out[l - 1] = best_from[i - 1];
    }
    return out;
}

/// Macro-averaged interpolated precision/recall over leave-one-out queries.
///
/// Each item queries all others ranked by rank_others; relevant items share
/// its label. The recall grid is {1/R, ..., 1} with R the largest number of
/// relevant items of any query. `labels` is aligned with `m.ids()`.
inline PRTable pr_curve(const DistanceMatrix& m, std::span<const std::string> labels) {
    const std::size_t n = m.size();
    if (labels.size() != n)
        throw std::invalid_argument("label count does not match matrix size");
    std::map<std::string, std::size_t, std::less<>> class_size;
    for (const auto& l : labels)
        ++class_size[l];
    if (class_size.size() < 2)
        throw error("precision/recall needs at least two classes");
    std::size_t levels = 0;
    for (const auto& [name, count] : class_size) {
        if (count < 2)
            throw error("class '" + name + "' has a single member");
        levels = std::max(levels, count - 1);
    }

    std::vector<double> sum(levels, 0.0);
    std::vector<bool> relevant;
    for (std::size_t q = 0; q < n; ++q) {
        relevant.clear();
        for (auto j : rank_others(m, q))
            relevant.push_back(labels[j] == labels[q]);
        const auto p = interpolated_precision(relevant, levels);
        for (std::size_t l = 0; l < levels; ++l)
            sum[l] += p[l];
    }

    PRTable table;
    table.rows.reserve(levels);
    for (std::size_t l = 0; l < levels; ++l)
        table.rows.push_back({static_cast<double>(l + 1) / static_cast<double>(levels),
                              sum[l] / static_cast<double>(n)});
    return table;
}

/// Labels looked up by id; every matrix id must have one.
inline PRTable pr_curve(const DistanceMatrix& m, const std::map<std::string, std::string, std::less<>>& labels) {
    std::vector<std::string> aligned;
    aligned.reserve(m.size());
    for (const auto& id : m.ids()) {
        const auto it = labels.find(id);
        if (it == labels.end())
            throw error("no label for model '" + id + "'");
        aligned.push_back(it->second);
    }
    return pr_curve(m, aligned);
}

struct RankedItem {
    std::string id;
    double distance = 0.0;  // bottleneck for re-ranked items, coefficient distance otherwise
    bool reranked = false;
};

/// Prefilter by coefficient distance, then re-rank the `candidates` nearest
/// by bottleneck distance. The remaining items follow in prefilter order, so
/// the result always ranks every other model.
inline std::vector<RankedItem> two_stage_query(std::string_view query, const LabeledDatabase& db,
                                               TransformKind transform, MetricKind kind, std::size_t k,
                                               std::size_t candidates) {
    if (!is_coefficient_metric(kind))
        throw std::invalid_argument("prefilter metric must be d1, d2 or d3");
    const std::size_t q = db.index_of(query);
    const std::size_t n = db.size();
    if (candidates < 1 || candidates > n - 1)
        throw std::invalid_argument("candidates must lie in [1, " + std::to_string(n - 1) + "]");

    const auto qv = detail::leading(detail::require_embedding(db[q], transform), k);
    std::vector<RankedItem> items;
    items.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == q)
            continue;
        const auto v = detail::leading(detail::require_embedding(db[j], transform), k);
        items.push_back({db[j].id, coeff_distance(qv, v, kind), false});
    }
    auto by_distance_then_id = [](const RankedItem& a, const RankedItem& b) {
        if (a.distance != b.distance)
            return a.distance < b.distance;
        return a.id < b.id;
    };
    std::sort(items.begin(), items.end(), by_distance_then_id);

    const auto head_end = items.begin() + static_cast<std::ptrdiff_t>(candidates);
    for (auto it = items.begin(); it != head_end; ++it) {
        it->distance = bottleneck(db[q].diagram, db[db.index_of(it->id)].diagram);
        it->reranked = true;
    }
    std::sort(items.begin(), head_end, by_distance_then_id);
    return items;
}

/// All other models ranked by bottleneck distance alone (same tie rule).
inline std::vector<RankedItem> bottleneck_ranking(std::string_view query, const LabeledDatabase& db) {
    const std::size_t q = db.index_of(query);
    std::vector<RankedItem> items;
    for (std::size_t j = 0; j < db.size(); ++j)
        if (j != q)
            items.push_back({db[j].id, bottleneck(db[q].diagram, db[j].diagram), true});
    std::sort(items.begin(), items.end(), [](const RankedItem& a, const RankedItem& b) {
        if (a.distance != b.distance)
            return a.distance < b.distance;
        return a.id < b.id;
    });
    return items;
}

// ---------------------------------------------------------------------------
// File formats

inline constexpr std::string_view index_magic = "#pdvec-index";
inline constexpr std::string_view index_version = "v1";

namespace detail {

inline void check_id(const std::string& id) {
    if (id.empty() || id.find_first_of(",\n\r") != std::string::npos || id.front() == '#')
        throw error("model id '" + id + "' cannot be stored in a CSV file");
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        const auto line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        fn(line, line_no);
    }
}

}  // namespace detail

/// One row per (model, transform): `id,transform,M,k,re_1,im_1,...,re_k,im_k`,
/// numbers at 17 significant digits, after a version line.
inline std::string serialize_index(const LabeledDatabase& db) {
    std::string out;
    out += index_magic;
    out += ' ';
    out += index_version;
    out += '\n';
    for (const auto& e : db.entries()) {
        detail::check_id(e.id);
        for (auto kind : all_transforms) {
            const auto& v = e.embedding(kind);
            if (!v)
                continue;
            out += e.id;
            out += ',';
            out += to_string(kind);
            out += ',' + std::to_string(v->width) + ',' + std::to_string(v->k());
            for (const auto& c : v->coefficients) {
                out += ',' + detail::format_17g(c.real());
                out += ',' + detail::format_17g(c.imag());
            }
            out += '\n';
        }
    }
    return out;
}

/// Inverse of serialize_index. Entries come back without labels or diagrams.
inline LabeledDatabase parse_index(std::string_view text) {
    LabeledDatabase db;
    bool header_seen = false;
    detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
        if (line.empty())
            return;
        if (!header_seen) {
            const auto toks = detail::tokens(line);
            if (toks.empty() || toks[0] != index_magic)
                throw parse_error("not a pdvec index file", no);
            if (toks.size() < 2 || toks[1] != index_version)
                throw parse_error("index version mismatch: expected " + std::string(index_version), no);
            header_seen = true;
            return;
        }
        if (line.front() == '#')
            return;
        const auto f = detail::split(line, ',');
        if (f.size() < 4)
            throw parse_error("index row needs id,transform,M,k", no);
        TransformKind kind;
        try {
            kind = parse_transform_kind(f[1]);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what(), no);
        }
        std::uint64_t m = 0;
        std::uint64_t k = 0;
        if (!detail::parse_uint(f[2], m) || !detail::parse_uint(f[3], k))
            throw parse_error("malformed M or k", no);
        if (k < 1 || k > m)
            throw parse_error("k must lie in [1, M]", no);
        if (f.size() != 4 + 2 * k)
            throw parse_error("expected " + std::to_string(2 * k) + " coefficient fields", no);
        CoefficientVector v;
        v.width = m;
        v.coefficients.reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
            double re = 0.0;
            double im = 0.0;
            if (!detail::parse_double(f[4 + 2 * j], re) || !detail::parse_double(f[5 + 2 * j], im) ||
                !std::isfinite(re) || !std::isfinite(im))
                throw parse_error("malformed coefficient", no);
            v.coefficients.emplace_back(re, im);
        }
        const std::string id(f[0]);
        auto idx = db.find(id);
        if (!idx) {
            DatabaseEntry entry;
            entry.id = id;
            try {
                idx = db.add(std::move(entry));
            } catch (const std::invalid_argument& e) {
                throw parse_error(e.what(), no);
            }
        } else if (db[*idx].embedding(kind)) {
            throw parse_error("duplicate row for model '" + id + "' and transform " + to_string(kind), no);
        }
        try {
            db.set_embedding(*idx, kind, std::move(v));
        } catch (const std::invalid_argument& e) {
            throw parse_error(std::string(e.what()) + " (mixed M or k in index)", no);
        }
    });
    if (!header_seen)
        throw parse_error("empty index file");
    return db;
}

inline void save_index(const LabeledDatabase& db, const std::filesystem::path& path) {
    detail::write_file_atomic(path, serialize_index(db));
}

inline LabeledDatabase load_index(const std::filesystem::path& path) {
    try {
        return parse_index(detail::read_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.what());
    }
}

/// Header row of ids, then one row of N values per model.
inline std::string serialize_matrix(const DistanceMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        detail::check_id(m.ids()[i]);
        if (i)
            out += ',';
        out += m.ids()[i];
    }
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j)
                out += ',';
            out += detail::format_17g(m(i, j));
        }
        out += '\n';
    }
    return out;
}

/// Checks shape, symmetry and the zero diagonal.
inline DistanceMatrix parse_matrix(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::size_t> row_lines;
    detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
        if (line.empty() || line.front() == '#')
            return;
        rows.push_back(detail::split(line, ','));
        row_lines.push_back(no);
    });
    if (rows.empty())
        throw parse_error("empty matrix file");
    std::vector<std::string> ids(rows[0].begin(), rows[0].end());
    const std::size_t n = ids.size();
    if (rows.size() != n + 1)
        throw parse_error("expected " + std::to_string(n) + " rows after the id header");
    std::vector<double> vals(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i + 1].size() != n)
            throw parse_error("row has " + std::to_string(rows[i + 1].size()) + " values, expected " +
                                  std::to_string(n),
                              row_lines[i + 1]);
        for (std::size_t j = 0; j < n; ++j)
            if (!detail::parse_double(rows[i + 1][j], vals[i * n + j]) || !std::isfinite(vals[i * n + j]) ||
                vals[i * n + j] < 0.0)
                throw parse_error("malformed distance", row_lines[i + 1]);
    }
    DistanceMatrix m(ids);
    for (std::size_t i = 0; i < n; ++i) {
        if (vals[i * n + i] != 0.0)
            throw parse_error("non-zero diagonal", row_lines[i + 1]);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (vals[i * n + j] != vals[j * n + i])
                throw parse_error("matrix is not symmetric", row_lines[i + 1]);
            m.set(i, j, vals[i * n + j]);
        }
    }
    return m;
}

/// `id,class` rows; a leading `id,class` header row is optional.
inline std::vector<std::pair<std::string, std::string>> parse_labels(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::map<std::string, int, std::less<>> seen;
    bool first = true;
    detail::for_each_line(text, [&](std::string_view line, std::size_t no) {
        if (line.empty() || line.front() == '#')
            return;
        const auto f = detail::split(line, ',');
        if (f.size() != 2 || f[0].empty() || f[1].empty())
            throw parse_error("expected id,class", no);
        if (first && f[0] == "id" && f[1] == "class") {
            first = false;
            return;
        }
        first = false;
        if (seen.count(f[0]))
            throw parse_error("duplicate id '" + std::string(f[0]) + "'", no);
        seen.emplace(std::string(f[0]), 0);
        out.emplace_back(std::string(f[0]), std::string(f[1]));
    });
    return out;
}

inline std::string serialize_labels(std::span<const std::pair<std::string, std::string>> labels) {
    std::string out = "id,class\n";
    for (const auto& [id, cls] : labels) {
        detail::check_id(id);
        detail::check_id(cls);
        out += id + ',' + cls + '\n';
    }
    return out;
}

inline std::string serialize_pr(const PRTable& t) {
    std::string out = "recall,precision\n";
    for (const auto& r : t.rows)
        out += detail::format_17g(r.recall) + ',' + detail::format_17g(r.precision) + '\n';
    return out;
}

}  // namespace pdvec
