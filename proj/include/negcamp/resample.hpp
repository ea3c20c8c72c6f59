#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "negcamp/rng.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

enum class ResampleStrategy { none, smote, tomek, smote_tomek };

struct ResampleConfig {
    ResampleStrategy strategy = ResampleStrategy::none;
    std::size_t k_neighbors = 5;
    double target_ratio = 1.0;  // minority:majority after oversampling

    void validate() const {
        if (k_neighbors < 1) throw std::invalid_argument("resample: k_neighbors must be >= 1");
        if (!(target_ratio > 0.0 && target_ratio <= 1.0))
            throw std::invalid_argument("resample: target_ratio must be in (0, 1]");
    }
};

inline ResampleStrategy resample_strategy_from_name(const std::string& s) {
    if (s == "none") return ResampleStrategy::none;
    if (s == "smote") return ResampleStrategy::smote;
    if (s == "tomek") return ResampleStrategy::tomek;
    if (s == "smote_tomek") return ResampleStrategy::smote_tomek;
    throw std::invalid_argument("unknown resample strategy: " + s);
}

namespace detail {

inline double sq(const Vector& a, const Vector& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double c = a[i] - b[i];
        s += c * c;
    }
    return s;
}

}  // namespace detail

// Synthetic minority points on segments toward the k nearest minority
// neighbors; originals untouched, appended until the target ratio is met.
inline std::pair<Matrix, std::vector<int>> smote(const Matrix& X, const std::vector<int>& y,
                                                 const ResampleConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::size_t n1 = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    std::size_t n0 = y.size() - n1;
    int minority = n1 <= n0 ? 1 : 0;
    std::size_t n_min = std::min(n0, n1), n_maj = std::max(n0, n1);
    if (n_min < 2) throw std::invalid_argument("smote: minority class has fewer than 2 points");
    std::size_t k = std::min(cfg.k_neighbors, n_min - 1);

    std::vector<std::size_t> min_idx;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == minority) min_idx.push_back(i);

    // k nearest minority neighbors of each minority point
    std::vector<std::vector<std::size_t>> nns(min_idx.size());
    for (std::size_t a = 0; a < min_idx.size(); ++a) {
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t b = 0; b < min_idx.size(); ++b) {
            if (a == b) continue;
            d.emplace_back(detail::sq(X[min_idx[a]], X[min_idx[b]]), b);
        }
        std::partial_sort(d.begin(), d.begin() + k, d.end());
        for (std::size_t i = 0; i < k; ++i) nns[a].push_back(d[i].second);
    }

    Matrix Xo = X;
    std::vector<int> yo = y;
    std::size_t want = static_cast<std::size_t>(std::llround(cfg.target_ratio * n_maj));
    Rng rng(seed);
    std::size_t have = n_min;
    std::size_t cursor = 0;
    while (have < want) {
        std::size_t a = cursor++ % min_idx.size();
        std::size_t b = nns[a][rng.below(nns[a].size())];
        double u = rng.uniform();
        Vector s(X[0].size());
        for (std::size_t d = 0; d < s.size(); ++d) {
            double xa = X[min_idx[a]][d], xb = X[min_idx[b]][d];
            s[d] = xa + u * (xb - xa);
        }
        Xo.push_back(std::move(s));
        yo.push_back(minority);
        ++have;
    }
    return {std::move(Xo), std::move(yo)};
}

// Removes the majority member of every mutual-nearest-neighbor pair of
// opposite classes. Single pass; pass fixpoint=true to iterate to a fixpoint.
inline std::pair<Matrix, std::vector<int>> tomek_remove(const Matrix& X, const std::vector<int>& y,
                                                        bool fixpoint = false) {
    std::size_t n1 = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    std::size_t n0 = y.size() - n1;
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("tomek_remove: both classes required");
    int majority = n0 >= n1 ? 0 : 1;

    Matrix Xc = X;
    std::vector<int> yc = y;
    for (;;) {
        std::size_t n = Xc.size();
        std::vector<std::size_t> nn(n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            std::size_t bj = i;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double d = detail::sq(Xc[i], Xc[j]);
                if (d < best) { best = d; bj = j; }
            }
            nn[i] = bj;
        }
        std::vector<bool> remove(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = nn[i];
            if (nn[j] == i && yc[i] != yc[j]) {
                std::size_t maj = yc[i] == majority ? i : j;
                remove[maj] = true;
            }
        }
        Matrix Xn;
        std::vector<int> yn;
        for (std::size_t i = 0; i < n; ++i) {
            if (remove[i]) continue;
            Xn.push_back(std::move(Xc[i]));
            yn.push_back(yc[i]);
        }
        bool changed = Xn.size() != Xc.size();
        Xc = std::move(Xn);
        yc = std::move(yn);
        if (!fixpoint || !changed) break;
    }
    return {std::move(Xc), std::move(yc)};
}

inline std::pair<Matrix, std::vector<int>> resample(const Matrix& X, const std::vector<int>& y,
                                                    const ResampleConfig& cfg, std::uint64_t seed) {
    switch (cfg.strategy) {
        case ResampleStrategy::none: return {X, y};
        case ResampleStrategy::smote: return smote(X, y, cfg, seed);
        case ResampleStrategy::tomek: return tomek_remove(X, y);
        case ResampleStrategy::smote_tomek: {
            auto [Xs, ys] = smote(X, y, cfg, seed);
            return tomek_remove(Xs, ys);
        }
    }
    return {X, y};
}

}  // namespace negcamp
