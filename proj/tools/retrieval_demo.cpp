// Small end-to-end run of the library API on a synthetic database:
// embed, prefilter, re-rank, and score with the precision/recall protocol.

#include <pdvec/pdvec.hpp>

#include <cstdio>

int main() {
    pdvec::SynthParams params;
    params.classes = 4;
    params.per_class = 8;
    auto db = pdvec::synthetic_database(params);
    db.embed_all(pdvec::TransformKind::S);
    const auto [m, k] = *db.embedding_shape(pdvec::TransformKind::S);
    std::printf("%zu models, M=%llu, k=%zu\n", db.size(), static_cast<unsigned long long>(m), k);

    const auto ranked =
        pdvec::two_stage_query(db[0].id, db, pdvec::TransformKind::S, pdvec::MetricKind::d3, k, 6);
    std::printf("nearest to %s:\n", db[0].id.c_str());
    for (std::size_t i = 0; i < 5; ++i)
        std::printf("  %zu  %s  %.4f%s\n", i + 1, ranked[i].id.c_str(), ranked[i].distance,
                    ranked[i].reranked ? "" : "  (prefilter)");

    std::vector<std::string> labels;
    for (const auto& e : db.entries())
        labels.push_back(e.label);
    for (auto metric : {pdvec::MetricKind::d3, pdvec::MetricKind::bottleneck}) {
        const auto curve = pdvec::pr_curve(pdvec::distance_matrix(db, metric, pdvec::TransformKind::S), labels);
        double mean = 0.0;
        for (const auto& row : curve.rows)
            mean += row.precision;
        std::printf("%-10s mean interpolated precision %.3f\n", pdvec::to_string(metric),
                    mean / static_cast<double>(curve.rows.size()));
    }
}
