#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "negcamp/cascade.hpp"
#include "negcamp/classifiers.hpp"
#include "negcamp/clustering.hpp"
#include "negcamp/embed.hpp"
#include "negcamp/metrics.hpp"
#include "negcamp/resample.hpp"
#include "negcamp/splitcraft.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

// Feature-row construction shared by training and scoring: the document
// embedding, optionally followed by the standardized engineered features.
struct Featurizer {
    bool use_engineered = false;
    std::vector<std::string> feature_names;  // fixed order, from the training split
    Scaler scaler;

    static Featurizer fit(const Dataset& train, bool use_engineered) {
        Featurizer f;
        f.use_engineered = use_engineered && !train.empty() && !train[0].features.empty();
        if (f.use_engineered) {
            for (const auto& [name, _] : train[0].features) f.feature_names.push_back(name);
            Matrix feats;
            for (const auto& r : train.records()) {
                Vector row;
                for (const auto& name : f.feature_names) {
                    auto it = r.features.find(name);
                    row.push_back(it != r.features.end() ? it->second : 0.0);
                }
                feats.push_back(std::move(row));
            }
            f.scaler = standardize_fit(feats);
        }
        return f;
    }

    Vector row(const Document& d) const {
        if (!d.embedding)
            throw std::invalid_argument("featurize: record without embedding '" + d.id + "'");
        Vector out = *d.embedding;
        if (use_engineered) {
            Vector feats;
            for (const auto& name : feature_names) {
                auto it = d.features.find(name);
                feats.push_back(it != d.features.end() ? it->second : 0.0);
            }
            feats = scaler.apply_row(feats);
            out.insert(out.end(), feats.begin(), feats.end());
        }
        return out;
    }

    Matrix rows(const Dataset& ds) const {
        Matrix out;
        out.reserve(ds.size());
        for (const auto& r : ds.records()) out.push_back(row(r));
        return out;
    }
};

inline std::vector<int> gold_labels(const Dataset& ds) {
    std::vector<int> y;
    y.reserve(ds.size());
    for (const auto& r : ds.records()) {
        if (!r.label) throw std::invalid_argument("gold_labels: unlabeled record '" + r.id + "'");
        y.push_back(*r.label);
    }
    return y;
}

// Partition method selector: exactly one of axis / cluster per run.
struct PartitionMethod {
    bool use_axis = true;
    ThresholdConfig threshold;
    ClusterMethod cluster_method;

    std::string tag() const {
        if (use_axis) return "axis(t=" + std::to_string(threshold.t) + ")";
        return "cluster(" + cluster_kind_name(cluster_method.kind) + ")";
    }
};

inline TrainPartition make_partition(const Dataset& train, const PartitionMethod& pm,
                                     std::uint64_t seed) {
    if (pm.use_axis) return assign_axis(train, axis_embeddings(train), pm.threshold);
    return assign_cluster(train, pm.cluster_method, seed);
}

struct RunResult {
    EvalReport report;
    TrainPartition partition;
    Cascade cascade;
    std::size_t train_size = 0, test_size = 0;
};

inline RunResult run_two_stage(const Dataset& train, const Dataset& test, const PartitionMethod& pm,
                               const ModelSpec& spec_a, const ModelSpec& spec_b,
                               const ResampleConfig& resample_cfg = {}, std::uint64_t seed = 0,
                               bool use_engineered = false) {
    RunResult rr;
    rr.train_size = train.size();
    rr.test_size = test.size();
    Featurizer fz = Featurizer::fit(train, use_engineered);
    rr.partition = make_partition(train, pm, seed);
    rr.cascade = train_cascade(spec_a, spec_b, train, fz.rows(train), rr.partition, resample_cfg);
    std::vector<int> pred = predict_cascade(rr.cascade, fz.rows(test));
    rr.report = evaluate(gold_labels(test), pred,
                         pm.tag() + "/" + model_kind_name(spec_a.kind) + "-" + model_kind_name(spec_b.kind));
    return rr;
}

inline EvalReport run_single_stage(const Dataset& train, const Dataset& test, const ModelSpec& spec,
                                   const ResampleConfig& resample_cfg = {},
                                   bool use_engineered = false) {
    Featurizer fz = Featurizer::fit(train, use_engineered);
    Matrix X = fz.rows(train);
    std::vector<int> y = gold_labels(train);
    if (resample_cfg.strategy != ResampleStrategy::none)
        std::tie(X, y) = resample(X, y, resample_cfg, spec.seed);
    TrainedModel m = negcamp::train(spec, X, y);
    std::vector<int> pred = m.predict(fz.rows(test));
    return evaluate(gold_labels(test), pred, "single/" + model_kind_name(spec.kind));
}

// --- report serialization --------------------------------------------------

inline nlohmann::json report_to_json(const EvalReport& r) {
    return {{"provenance", r.provenance},
            {"confusion", {{"tp", r.conf.tp}, {"fp", r.conf.fp}, {"fn", r.conf.fn}, {"tn", r.conf.tn}}},
            {"class1", {{"precision", r.class1.precision}, {"recall", r.class1.recall}, {"f1", r.class1.f1}}},
            {"class0", {{"precision", r.class0.precision}, {"recall", r.class0.recall}, {"f1", r.class0.f1}}},
            {"support1", r.support1},
            {"support0", r.support0},
            {"f1_macro", r.f1m},
            {"f1_weighted", r.f1w}};
}

inline nlohmann::json partition_counts_json(const TrainPartition& p) {
    return {{"method", p.method_tag},
            {"label0", p.p0.size()},
            {"label1", p.n.size()},
            {"label2", p.p2.size()},
            {"sum", p.p0.size() + p.n.size() + p.p2.size()}};
}

inline void write_partition_audit(const TrainPartition& p, const Dataset& train, std::ostream& out) {
    out << "id,gold_label,partition\n";
    for (const auto& r : train.records()) {
        const char* tag = p.p0.count(r.id) ? "p0" : p.p2.count(r.id) ? "p2" : "n";
        out << r.id << "," << (r.label ? *r.label : -1) << "," << tag << "\n";
    }
}

// --- uncertainty sampling and corpus scoring --------------------------------

// ids of the n pool records whose scores sit closest to 0.5; ties by id order
inline std::vector<std::string> select_uncertain(const TrainedModel& model, const Dataset& pool,
                                                 const Featurizer& fz, std::size_t n) {
    if (n > pool.size()) throw std::invalid_argument("select_uncertain: n > pool size");
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& r : pool.records())
        scored.emplace_back(std::abs(model.score_row(fz.row(r)) - 0.5), r.id);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(scored[i].second);
    return out;
}

struct CorpusScore {
    std::string id;
    int label = 0;
    double score_a = 0, score_b = 0;
};

inline std::vector<CorpusScore> score_corpus(const Cascade& c, const Dataset& pool,
                                             const Featurizer& fz) {
    std::vector<CorpusScore> out;
    for (const auto& r : pool.records()) {
        Vector x = fz.row(r);
        CorpusScore cs;
        cs.id = r.id;
        cs.score_a = c.stage_a.score_row(x);
        if (cs.score_a >= 0.5) {
            cs.score_b = c.stage_b.score_row(x);
            cs.label = cs.score_b >= 0.5 ? 1 : 0;
        } else {
            cs.score_b = 0.0;
            cs.label = 0;
        }
        out.push_back(std::move(cs));
    }
    return out;
}

}  // namespace negcamp
