#pragma once

#include <algorithm>
#include <cmath>
#include <map>

#include "negcamp/rng.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

// Stratified train/test split. Per-class train counts use half-up rounding;
// any mismatch against the half-up-rounded total is absorbed by the majority
// class. Assignment depends only on the sorted ids and the seed.
inline SplitPair stratified_split(const Dataset& ds, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("ratio must be in (0, 1]");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!ds[i].label) throw std::invalid_argument("stratified_split: unlabeled record '" + ds[i].id + "'");
        by_class[*ds[i].label].push_back(i);
    }

    auto half_up = [](double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); };

    std::map<int, std::size_t> train_count;
    std::size_t total_train = 0;
    for (auto& [label, idx] : by_class) {
        train_count[label] = half_up(ratio * static_cast<double>(idx.size()));
        total_train += train_count[label];
    }
    std::size_t want_total = half_up(ratio * static_cast<double>(ds.size()));
    if (total_train != want_total && !by_class.empty()) {
        int majority = by_class.begin()->first;
        for (auto& [label, idx] : by_class)
            if (idx.size() > by_class[majority].size()) majority = label;
        std::size_t adj = train_count[majority] + want_total - total_train;
        train_count[majority] = std::min(adj, by_class[majority].size());
    }

    SplitPair sp;
    sp.seed = seed;
    sp.ratio = ratio;
    for (auto& [label, idx] : by_class) {
        // order by id, then seeded shuffle: deterministic in (ids, seed)
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return ds[a].id < ds[b].id; });
        Rng rng(seed ^ fnv1a(std::to_string(label)));
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i < train_count[label])
                sp.train.add(ds[idx[i]]);
            else
                sp.test.add(ds[idx[i]]);
        }
    }
    return sp;
}

}  // namespace negcamp
