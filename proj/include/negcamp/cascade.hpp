#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "negcamp/classifiers.hpp"
#include "negcamp/resample.hpp"
#include "negcamp/splitcraft.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

// Two-stage model: stage A screens everything; records it calls negative
// (label 1) are re-judged by stage B. Final 1 requires both stages to say 1.
struct Cascade {
    TrainedModel stage_a;
    TrainedModel stage_b;
    std::string partition_provenance;
};

// rows must align with train.records(); the same featurization is used for
// both stages
inline Cascade train_cascade(const ModelSpec& spec_a, const ModelSpec& spec_b, const Dataset& train,
                             const Matrix& rows, const TrainPartition& part,
                             const ResampleConfig& resample_cfg = {}) {
    if (rows.size() != train.size())
        throw std::invalid_argument("train_cascade: feature rows do not align with dataset");

    Dataset nd1 = build_nd1(part, train);
    Dataset nd2 = build_nd2(part, train);

    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < train.size(); ++i) row_of[train[i].id] = i;

    auto gather = [&](const Dataset& ds) {
        Matrix X;
        std::vector<int> y;
        for (const auto& r : ds.records()) {
            X.push_back(rows[row_of.at(r.id)]);
            y.push_back(*r.label);
        }
        return std::make_pair(std::move(X), std::move(y));
    };

    auto [Xa, ya] = gather(nd1);
    auto [Xb, yb] = gather(nd2);
    if (resample_cfg.strategy != ResampleStrategy::none) {
        std::tie(Xa, ya) = resample(Xa, ya, resample_cfg, spec_a.seed ^ 0xA);
        std::tie(Xb, yb) = resample(Xb, yb, resample_cfg, spec_b.seed ^ 0xB);
    }

    Cascade c;
    c.stage_a = negcamp::train(spec_a, Xa, ya);
    c.stage_b = negcamp::train(spec_b, Xb, yb);
    c.partition_provenance = part.method_tag;
    return c;
}

inline std::vector<int> predict_cascade(const Cascade& c, const Matrix& X,
                                        std::size_t* stage_b_invocations = nullptr) {
    std::vector<int> out = c.stage_a.predict(X);
    std::size_t routed = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (out[i] == 0) continue;  // stage A's negatives-of-negativity are final
        ++routed;
        out[i] = c.stage_b.score_row(X[i]) >= 0.5 ? 1 : 0;
    }
    if (stage_b_invocations) *stage_b_invocations = routed;
    return out;
}

inline nlohmann::json cascade_to_json(const Cascade& c) {
    return {{"stage_a", model_to_json(c.stage_a)},
            {"stage_b", model_to_json(c.stage_b)},
            {"partition_provenance", c.partition_provenance}};
}

inline Cascade cascade_from_json(const nlohmann::json& j) {
    Cascade c;
    c.stage_a = model_from_json(j["stage_a"]);
    c.stage_b = model_from_json(j["stage_b"]);
    c.partition_provenance = j["partition_provenance"];
    return c;
}

}  // namespace negcamp
