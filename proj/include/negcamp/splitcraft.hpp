#pragma once

#include <map>
#include <set>
#include <string>

#include "negcamp/clustering.hpp"
#include "negcamp/embed.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

struct AxisEmbeddings {
    Vector emb0;  // centroid of class-0 (no negativity) training embeddings
    Vector emb1;  // centroid of class-1 (negativity) training embeddings
};

struct ThresholdConfig {
    double t = 0.0;
};

// Training ids split into clean positives (p0), relabeled positives (p2) and
// gold negatives (n). Gold negatives are never reassigned.
struct TrainPartition {
    std::set<std::string> p0;
    std::set<std::string> p2;
    std::set<std::string> n;
    std::string method_tag;
};

inline AxisEmbeddings axis_embeddings(const Dataset& train) {
    if (!train.dim()) throw std::invalid_argument("axis_embeddings: dataset has no embeddings");
    std::size_t dim = *train.dim();
    AxisEmbeddings ax;
    ax.emb0.assign(dim, 0.0);
    ax.emb1.assign(dim, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (const auto& r : train.records()) {
        if (!r.label) throw std::invalid_argument("axis_embeddings: unlabeled record '" + r.id + "'");
        if (!r.embedding) throw std::invalid_argument("axis_embeddings: record without embedding '" + r.id + "'");
        Vector& dst = (*r.label == 1) ? ax.emb1 : ax.emb0;
        for (std::size_t d = 0; d < dim; ++d) dst[d] += (*r.embedding)[d];
        (*r.label == 1 ? n1 : n0)++;
    }
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("axis_embeddings: a class is empty");
    for (auto& x : ax.emb0) x /= static_cast<double>(n0);
    for (auto& x : ax.emb1) x /= static_cast<double>(n1);
    return ax;
}

// Gold positives go to p2 exactly when cos(x, emb1) - cos(x, emb0) > t
// (strict; boundary records stay in p0). Gold negatives go to n.
inline TrainPartition assign_axis(const Dataset& train, const AxisEmbeddings& axes,
                                  const ThresholdConfig& cfg) {
    TrainPartition part;
    part.method_tag = "axis(t=" + std::to_string(cfg.t) + ")";
    for (const auto& r : train.records()) {
        if (!r.label) throw std::invalid_argument("assign_axis: unlabeled record '" + r.id + "'");
        if (!r.embedding) throw std::invalid_argument("assign_axis: record without embedding '" + r.id + "'");
        if (*r.label == 1) {
            part.n.insert(r.id);
            continue;
        }
        double diff = cosine(*r.embedding, axes.emb1) - cosine(*r.embedding, axes.emb0);
        (diff > cfg.t ? part.p2 : part.p0).insert(r.id);
    }
    return part;
}

// Clustering variant: the cluster holding the plurality of gold negatives is
// found; positives inside it become p2. Ties go to the lowest cluster index.
inline TrainPartition assign_cluster(const Dataset& train, const ClusterMethod& method,
                                     std::uint64_t seed) {
    Matrix pts;
    for (const auto& r : train.records()) {
        if (!r.label) throw std::invalid_argument("assign_cluster: unlabeled record '" + r.id + "'");
        if (!r.embedding) throw std::invalid_argument("assign_cluster: record without embedding '" + r.id + "'");
        pts.push_back(*r.embedding);
    }
    ClusterResult cr = cluster(pts, method, seed);
    if (cr.degenerate)
        throw std::runtime_error("assign_cluster: clustering degenerated to a single cluster (" +
                                 cluster_kind_name(method.kind) + ")");

    std::map<int, std::size_t> neg_count;
    for (std::size_t i = 0; i < train.size(); ++i)
        if (*train[i].label == 1) ++neg_count[cr.assignment[i]];
    int best = 0;
    std::size_t best_count = 0;
    bool found = false;
    for (const auto& [cl, cnt] : neg_count) {  // map order makes ties pick the lowest index
        if (!found || cnt > best_count) { best = cl; best_count = cnt; found = true; }
    }

    TrainPartition part;
    part.method_tag = "cluster(" + cluster_kind_name(method.kind) + ")";
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto& r = train[i];
        if (*r.label == 1) part.n.insert(r.id);
        else if (cr.assignment[i] == best) part.p2.insert(r.id);
        else part.p0.insert(r.id);
    }
    return part;
}

// ND1 (stage-A training set): p0 -> 0, p2 -> 1, n -> 1
inline Dataset build_nd1(const TrainPartition& part, const Dataset& train) {
    Dataset nd1;
    for (const auto& r : train.records()) {
        Document d = r;
        if (part.p0.count(r.id)) d.label = 0;
        else if (part.p2.count(r.id) || part.n.count(r.id)) d.label = 1;
        else throw std::invalid_argument("build_nd1: id '" + r.id + "' missing from partition");
        nd1.add(std::move(d));
    }
    return nd1;
}

// ND2 (stage-B training set): only p2 (label 0) and n (label 1)
inline Dataset build_nd2(const TrainPartition& part, const Dataset& train) {
    if (part.p2.empty())
        throw std::runtime_error(
            "build_nd2: degenerate second stage (no label-2 records); fall back to a single-stage model");
    if (part.n.empty()) throw std::runtime_error("build_nd2: no negative records");
    Dataset nd2;
    for (const auto& r : train.records()) {
        if (part.p2.count(r.id)) {
            Document d = r;
            d.label = 0;
            nd2.add(std::move(d));
        } else if (part.n.count(r.id)) {
            Document d = r;
            d.label = 1;
            nd2.add(std::move(d));
        }
    }
    return nd2;
}

}  // namespace negcamp
