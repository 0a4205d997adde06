#pragma once

#include <pdvec/pdvec.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pdvec::cli {

namespace fs = std::filesystem;

/// Diagram files (`*.csv`) of a directory, sorted by file name. The model id
/// is the file stem.
inline std::vector<std::pair<std::string, PersistenceDiagram>> read_diagram_dir(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw error("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw error("no diagram files (*.csv) in " + dir.string());
    std::vector<std::pair<std::string, PersistenceDiagram>> out;
    out.reserve(files.size());
    for (const auto& f : files)
        out.emplace_back(f.stem().string(), load_diagram(f));
    return out;
}

inline LabeledDatabase database_from_dir(const fs::path& dir) {
    LabeledDatabase db;
    for (auto& [id, d] : read_diagram_dir(dir)) {
        DatabaseEntry e;
        e.id = id;
        e.diagram = std::move(d);
        db.add(std::move(e));
    }
    return db;
}

/// The single transform present in an index, or `wanted` if given.
inline TransformKind index_transform(const LabeledDatabase& db, const std::string& wanted) {
    if (!wanted.empty()) {
        const auto kind = parse_transform_kind(wanted);
        if (!db.embedding_shape(kind))
            throw error(std::string("index has no embeddings for transform ") + to_string(kind));
        return kind;
    }
    std::vector<TransformKind> present;
    for (auto kind : all_transforms)
        if (db.embedding_shape(kind))
            present.push_back(kind);
    if (present.empty())
        throw error("index holds no embeddings");
    if (present.size() > 1)
        throw error("index holds several transforms; pick one with --transform");
    return present.front();
}

struct Options {
    std::size_t threads = 1;

    std::string mesh, filter, out;
    std::string diagrams, transform, index, metric, matrix, labels, id;
    std::optional<std::size_t> k;
    std::size_t candidates = 0;
    SynthParams synth;
};

inline void cmd_diagram(const Options& o, std::ostream& err) {
    const auto kind = parse_filter_kind(o.filter);
    const auto framed = frame_mesh(load_off(o.mesh));
    const auto f = kind == FilterKind::line ? filter_line(framed.mesh, framed.frame)
                                            : filter_plane(framed.mesh, framed.frame);
    if (f.constant)
        err << "warning: filtering function is constant on " << o.mesh << "; diagram is empty\n";
    save_diagram(o.out, zero_persistence(framed.mesh, f));
}

inline void cmd_embed(const Options& o, std::ostream& err) {
    const auto kind = parse_transform_kind(o.transform);
    auto db = database_from_dir(o.diagrams);
    const auto m = db.max_total_multiplicity();
    if (m == 0)
        throw error("every diagram in " + o.diagrams + " is empty; nothing to embed");
    if (o.k && (*o.k < 1 || *o.k > m))
        throw error("-k must lie in [1, " + std::to_string(m) + "]");
    db.embed_all(kind, o.k, m, o.threads);
    save_index(db, o.out);
    err << "embedded " << db.size() << " diagrams with M=" << m << " k=" << o.k.value_or(default_k(m)) << "\n";
}

inline void cmd_dist(const Options& o) {
    const auto metric = parse_metric_kind(o.metric);
    DistanceMatrix m;
    if (metric == MetricKind::bottleneck) {
        if (o.diagrams.empty())
            throw error("--metric bottleneck needs --diagrams");
        m = distance_matrix(database_from_dir(o.diagrams), metric, TransformKind::R, std::nullopt, o.threads);
    } else {
        if (o.index.empty())
            throw error(std::string("--metric ") + to_string(metric) + " needs --index");
        const auto db = load_index(o.index);
        m = distance_matrix(db, metric, index_transform(db, o.transform), o.k, o.threads);
    }
    detail::write_file_atomic(o.out, serialize_matrix(m));
}

inline void cmd_pr(const Options& o) {
    const auto m = parse_matrix(detail::read_file(o.matrix));
    std::map<std::string, std::string, std::less<>> labels;
    for (auto& [id, cls] : parse_labels(detail::read_file(o.labels)))
        labels.emplace(std::move(id), std::move(cls));
    detail::write_file_atomic(o.out, serialize_pr(pr_curve(m, labels)));
}

inline void cmd_query(const Options& o, std::ostream& out) {
    const auto metric = parse_metric_kind(o.metric);
    if (!is_coefficient_metric(metric))
        throw error("--metric for query must be d1, d2 or d3");
    auto db = load_index(o.index);
    const auto kind = index_transform(db, o.transform);
    const auto [m, stored_k] = *db.embedding_shape(kind);

    std::map<std::string, PersistenceDiagram, std::less<>> diagrams;
    for (auto& [id, d] : read_diagram_dir(o.diagrams))
        diagrams.emplace(id, std::move(d));
    for (std::size_t i = 0; i < db.size(); ++i) {
        const auto it = diagrams.find(db[i].id);
        if (it == diagrams.end())
            throw error("no diagram file for indexed model '" + db[i].id + "'");
        if (total_multiplicity(it->second) > m)
            throw error("diagram '" + db[i].id + "' has more than M=" + std::to_string(m) +
                        " points; re-run embed on the current diagrams");
        db.set_diagram(i, it->second);
    }
    const auto ranked = two_stage_query(o.id, db, kind, metric, o.k.value_or(stored_k), o.candidates);

    std::string text = "rank,id,stage,distance\n";
    for (std::size_t r = 0; r < ranked.size(); ++r)
        text += std::to_string(r + 1) + ',' + ranked[r].id + ',' + (ranked[r].reranked ? "bottleneck" : "prefilter") +
                ',' + detail::format_17g(ranked[r].distance) + '\n';
    if (o.out.empty())
        out << text;
    else
        detail::write_file_atomic(o.out, text);
}

inline void cmd_synth(const Options& o, std::ostream& err) {
    const auto models = synthesize(o.synth);
    fs::create_directories(o.out);
    std::vector<std::pair<std::string, std::string>> labels;
    for (const auto& m : models) {
        save_diagram(fs::path(o.out) / (m.id + ".csv"), m.diagram);
        labels.emplace_back(m.id, m.label);
    }
    detail::write_file_atomic(o.labels, serialize_labels(labels));
    err << "wrote " << models.size() << " diagrams to " << o.out << "\n";
}

/// Entry point shared by the executable and the tests. Returns the process
/// exit code; diagnostics go to `err` as a single line.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pdvec: persistence diagrams as complex coefficient vectors"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--threads", o.threads, "Worker threads for parallel sections (0 = all cores)");

    auto* diagram = app.add_subcommand("diagram", "Mesh (OFF) -> 0th persistence diagram");
    diagram->add_option("--mesh", o.mesh, "Input OFF mesh")->required();
    diagram->add_option("--filter", o.filter, "line | plane")->required();
    diagram->add_option("--out", o.out, "Output diagram CSV")->required();

    auto* embed_cmd = app.add_subcommand("embed", "Diagram directory -> coefficient index");
    embed_cmd->add_option("--diagrams", o.diagrams, "Directory of diagram CSV files")->required();
    embed_cmd->add_option("--transform", o.transform, "R | S | T")->required();
    embed_cmd->add_option("-k", o.k, "Coefficients per model (default floor(sqrt(M)))");
    embed_cmd->add_option("--out", o.out, "Output index CSV")->required();

    auto* dist = app.add_subcommand("dist", "Pairwise distance matrix");
    dist->add_option("--index", o.index, "Coefficient index (d1, d2, d3)");
    dist->add_option("--diagrams", o.diagrams, "Diagram directory (bottleneck)");
    dist->add_option("--metric", o.metric, "d1 | d2 | d3 | bottleneck")->required();
    dist->add_option("--transform", o.transform, "Transform to use when the index holds several");
    dist->add_option("-k", o.k, "Use only the first k coefficients");
    dist->add_option("--out", o.out, "Output matrix CSV")->required();

    auto* pr = app.add_subcommand("pr", "Distance matrix + labels -> precision/recall table");
    pr->add_option("--matrix", o.matrix, "Distance matrix CSV")->required();
    pr->add_option("--labels", o.labels, "Labels CSV (id,class)")->required();
    pr->add_option("--out", o.out, "Output PR CSV")->required();

    auto* query = app.add_subcommand("query", "Prefilter by coefficients, re-rank by bottleneck");
    query->add_option("--index", o.index, "Coefficient index")->required();
    query->add_option("--diagrams", o.diagrams, "Diagram directory")->required();
    query->add_option("--id", o.id, "Query model id")->required();
    query->add_option("--metric", o.metric, "d1 | d2 | d3")->required();
    query->add_option("--candidates", o.candidates, "How many prefilter survivors to re-rank")->required();
    query->add_option("--transform", o.transform, "Transform to use when the index holds several");
    query->add_option("-k", o.k, "Use only the first k coefficients");
    query->add_option("--out", o.out, "Output ranking CSV (default stdout)");

    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic diagram database");
    synth->add_option("--classes", o.synth.classes, "Number of classes")->required();
    synth->add_option("--per-class", o.synth.per_class, "Models per class")->required();
    synth->add_option("--points", o.synth.base_points, "Points in each class base diagram");
    synth->add_option("--jitter", o.synth.jitter, "Per-point uniform jitter half-width");
    synth->add_option("--noise", o.synth.noise_points, "Noise points per model near the diagonal");
    synth->add_option("--band", o.synth.band, "Width of the noise band above the diagonal");
    synth->add_option("--seed", o.synth.seed, "Random seed");
    synth->add_option("--out", o.out, "Output directory for diagram files")->required();
    synth->add_option("--labels", o.labels, "Output labels CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*diagram)
            cmd_diagram(o, err);
        else if (*embed_cmd)
            cmd_embed(o, err);
        else if (*dist)
            cmd_dist(o);
        else if (*pr)
            cmd_pr(o);
        else if (*query)
            cmd_query(o, out);
        else if (*synth)
            cmd_synth(o, err);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << msg << "\n";
        return 1;
    }
    return 0;
}

}  // namespace pdvec::cli
