#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "negcamp/rng.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

enum class ClusterKind { kmeans, gmm_diag, dbscan, agglomerative, birch };

enum class Linkage { single, average, complete };

struct ClusterMethod {
    ClusterKind kind = ClusterKind::kmeans;
    std::size_t k = 2;           // kmeans / gmm / agglomerative / birch
    double eps = 0.5;            // dbscan
    std::size_t min_pts = 5;     // dbscan
    Linkage linkage = Linkage::average;
    double birch_threshold = 0.5;
    std::size_t birch_branching = 8;

    void validate() const {
        if (k < 1) throw std::invalid_argument("cluster: k must be >= 1");
        if (eps <= 0.0) throw std::invalid_argument("cluster: eps must be > 0");
        if (min_pts < 1) throw std::invalid_argument("cluster: min_pts must be >= 1");
        if (birch_threshold <= 0.0) throw std::invalid_argument("cluster: birch threshold must be > 0");
        if (birch_branching < 2) throw std::invalid_argument("cluster: birch branching must be >= 2");
    }
};

struct ClusterResult {
    std::vector<int> assignment;  // -1 marks dbscan noise
    Matrix centers;               // where defined
    std::size_t iterations = 0;
    double objective = 0.0;           // inertia or log-likelihood
    std::vector<double> objective_trace;  // per-iteration, for monotonicity checks
    bool degenerate = false;          // single cluster holding everything
    std::string note;
};

namespace detail {

inline double sqdist(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline void check_points(const Matrix& pts, std::size_t k) {
    if (pts.empty()) throw std::invalid_argument("cluster: no points");
    for (const auto& p : pts)
        if (p.size() != pts[0].size()) throw std::invalid_argument("cluster: inconsistent dimensions");
    if (k > pts.size()) throw std::invalid_argument("cluster: k > n");
}

inline double inertia(const Matrix& pts, const Matrix& centers, const std::vector<int>& assign) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += sqdist(pts[i], centers[assign[i]]);
    return s;
}

}  // namespace detail

inline ClusterResult kmeans_cluster(const Matrix& pts, std::size_t k, std::uint64_t seed,
                                    std::size_t max_iter = 300, double rel_tol = 1e-6) {
    detail::check_points(pts, k);
    std::size_t n = pts.size();
    Rng rng(seed);

    // k-means++ seeding
    Matrix centers;
    centers.push_back(pts[rng.below(n)]);
    std::vector<double> d2(n);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : centers) best = std::min(best, detail::sqdist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double r = rng.uniform() * total, acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) { pick = i; break; }
            }
        } else {
            pick = rng.below(n);
        }
        centers.push_back(pts[pick]);
    }

    std::vector<int> assign(n, 0);
    ClusterResult res;
    double prev_inertia = std::numeric_limits<double>::max();
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            int bj = 0;
            for (std::size_t j = 0; j < k; ++j) {
                double d = detail::sqdist(pts[i], centers[j]);
                if (d < best) { best = d; bj = static_cast<int>(j); }
            }
            assign[i] = bj;
        }
        Matrix sums(k, Vector(pts[0].size(), 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t d = 0; d < pts[0].size(); ++d) sums[assign[i]][d] += pts[i][d];
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) {
                // move an empty center onto the farthest point
                std::size_t far = 0;
                double fd = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = detail::sqdist(pts[i], centers[assign[i]]);
                    if (d > fd) { fd = d; far = i; }
                }
                centers[j] = pts[far];
            } else {
                for (std::size_t d = 0; d < pts[0].size(); ++d)
                    centers[j][d] = sums[j][d] / static_cast<double>(counts[j]);
            }
        }
        double in = detail::inertia(pts, centers, assign);
        res.objective_trace.push_back(in);
        res.iterations = it + 1;
        if (prev_inertia < std::numeric_limits<double>::max()) {
            double rel = prev_inertia > 0.0 ? (prev_inertia - in) / prev_inertia : 0.0;
            if (rel < rel_tol && in <= prev_inertia) { prev_inertia = in; break; }
        }
        prev_inertia = in;
    }
    res.assignment = std::move(assign);
    res.centers = std::move(centers);
    res.objective = prev_inertia;
    return res;
}

inline ClusterResult gmm_diag_cluster(const Matrix& pts, std::size_t k, std::uint64_t seed,
                                      std::size_t max_iter = 300, double tol = 1e-6,
                                      double var_floor = 1e-6) {
    detail::check_points(pts, k);
    std::size_t n = pts.size(), dim = pts[0].size();

    // init from k-means
    ClusterResult km = kmeans_cluster(pts, k, seed, 50);
    Matrix mu = km.centers;
    Matrix var(k, Vector(dim, 1.0));
    Vector weight(k, 1.0 / static_cast<double>(k));
    {
        std::vector<std::size_t> counts(k, 0);
        Matrix ss(k, Vector(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            int j = km.assignment[i];
            ++counts[j];
            for (std::size_t d = 0; d < dim; ++d) {
                double c = pts[i][d] - mu[j][d];
                ss[j][d] += c * c;
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            weight[j] = std::max(1e-10, static_cast<double>(counts[j]) / static_cast<double>(n));
            for (std::size_t d = 0; d < dim; ++d)
                var[j][d] = counts[j] > 0 ? std::max(var_floor, ss[j][d] / counts[j]) : 1.0;
        }
    }

    const double log2pi = std::log(2.0 * 3.14159265358979323846);
    auto log_comp = [&](std::size_t i, std::size_t j) {
        double lp = std::log(weight[j]);
        for (std::size_t d = 0; d < dim; ++d) {
            double c = pts[i][d] - mu[j][d];
            lp += -0.5 * (log2pi + std::log(var[j][d]) + c * c / var[j][d]);
        }
        return lp;
    };

    ClusterResult res;
    Matrix resp(n, Vector(k, 0.0));
    double prev_ll = -std::numeric_limits<double>::max();
    for (std::size_t it = 0; it < max_iter; ++it) {
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::max();
            Vector lp(k);
            for (std::size_t j = 0; j < k; ++j) {
                lp[j] = log_comp(i, j);
                mx = std::max(mx, lp[j]);
            }
            double sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) sum += std::exp(lp[j] - mx);
            ll += mx + std::log(sum);
            for (std::size_t j = 0; j < k; ++j) resp[i][j] = std::exp(lp[j] - mx) / sum;
        }
        res.objective_trace.push_back(ll);
        res.iterations = it + 1;
        if (ll - prev_ll < tol && it > 0) { prev_ll = ll; break; }
        prev_ll = ll;

        for (std::size_t j = 0; j < k; ++j) {
            double nj = 0.0;
            for (std::size_t i = 0; i < n; ++i) nj += resp[i][j];
            nj = std::max(nj, 1e-10);
            weight[j] = nj / static_cast<double>(n);
            for (std::size_t d = 0; d < dim; ++d) {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) m += resp[i][j] * pts[i][d];
                mu[j][d] = m / nj;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                double v = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double c = pts[i][d] - mu[j][d];
                    v += resp[i][j] * c * c;
                }
                var[j][d] = std::max(var_floor, v / nj);
            }
        }
    }

    res.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j)
            if (resp[i][j] > resp[i][best]) best = j;
        res.assignment[i] = static_cast<int>(best);
    }
    res.centers = std::move(mu);
    res.objective = prev_ll;
    return res;
}

inline ClusterResult dbscan_cluster(const Matrix& pts, double eps, std::size_t min_pts) {
    detail::check_points(pts, 1);
    std::size_t n = pts.size();
    double eps2 = eps * eps;
    auto neighbors = [&](std::size_t i) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j)
            if (detail::sqdist(pts[i], pts[j]) <= eps2) out.push_back(j);
        return out;
    };

    ClusterResult res;
    res.assignment.assign(n, -2);  // -2 unvisited, -1 noise
    int cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (res.assignment[i] != -2) continue;
        auto nb = neighbors(i);
        if (nb.size() < min_pts) {
            res.assignment[i] = -1;
            continue;
        }
        res.assignment[i] = cluster;
        std::vector<std::size_t> frontier(nb.begin(), nb.end());
        for (std::size_t f = 0; f < frontier.size(); ++f) {
            std::size_t q = frontier[f];
            if (res.assignment[q] == -1) res.assignment[q] = cluster;
            if (res.assignment[q] != -2) continue;
            res.assignment[q] = cluster;
            auto qn = neighbors(q);
            if (qn.size() >= min_pts)
                frontier.insert(frontier.end(), qn.begin(), qn.end());
        }
        ++cluster;
    }
    res.iterations = 1;
    res.objective = static_cast<double>(cluster);
    return res;
}

// naive O(n^3) agglomerative clustering cut at k clusters
inline ClusterResult agglomerative_cluster(const Matrix& pts, std::size_t k, Linkage linkage) {
    detail::check_points(pts, k);
    std::size_t n = pts.size();
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[i] = {i};
    Matrix dist(n, Vector(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = std::sqrt(detail::sqdist(pts[i], pts[j]));

    std::vector<bool> alive(n, true);
    std::size_t n_alive = n;
    while (n_alive > k) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                if (dist[i][j] < best) { best = dist[i][j]; bi = i; bj = j; }
            }
        }
        // Lance-Williams update into bi
        for (std::size_t m = 0; m < n; ++m) {
            if (!alive[m] || m == bi || m == bj) continue;
            double dim_ = dist[bi][m], djm = dist[bj][m];
            double merged;
            switch (linkage) {
                case Linkage::single: merged = std::min(dim_, djm); break;
                case Linkage::complete: merged = std::max(dim_, djm); break;
                default: {
                    double si = static_cast<double>(groups[bi].size());
                    double sj = static_cast<double>(groups[bj].size());
                    merged = (si * dim_ + sj * djm) / (si + sj);
                }
            }
            dist[bi][m] = dist[m][bi] = merged;
        }
        groups[bi].insert(groups[bi].end(), groups[bj].begin(), groups[bj].end());
        alive[bj] = false;
        --n_alive;
    }

    ClusterResult res;
    res.assignment.assign(n, 0);
    int label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        Vector center(pts[0].size(), 0.0);
        for (auto idx : groups[i]) {
            res.assignment[idx] = label;
            for (std::size_t d = 0; d < pts[0].size(); ++d) center[d] += pts[idx][d];
        }
        for (auto& c : center) c /= static_cast<double>(groups[i].size());
        res.centers.push_back(std::move(center));
        ++label;
    }
    res.iterations = n - n_alive;
    res.objective = 0.0;
    return res;
}

// two-phase Birch: CF entries built by threshold absorption, then the leaf
// centroids are merged agglomeratively down to k clusters
inline ClusterResult birch_cluster(const Matrix& pts, std::size_t k, double threshold,
                                   std::size_t branching) {
    detail::check_points(pts, k);
    std::size_t dim = pts[0].size();

    struct Entry {
        std::size_t n = 0;
        Vector ls;      // linear sum
        double ss = 0;  // squared sum
        std::vector<std::size_t> members;
        Vector centroid(std::size_t dim) const {
            Vector c(dim);
            for (std::size_t d = 0; d < dim; ++d) c[d] = ls[d] / static_cast<double>(n);
            return c;
        }
        double radius(std::size_t dim) const {
            // rms distance of members to centroid
            double c2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                double m = ls[d] / static_cast<double>(n);
                c2 += m * m;
            }
            double r2 = ss / static_cast<double>(n) - c2;
            return std::sqrt(std::max(0.0, r2));
        }
    };

    std::vector<Entry> entries;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // nearest entry by centroid; branching caps the scan width per step,
        // matching the CF-tree's fan-out limit on a flattened tree
        std::size_t best = entries.size();
        double bd = std::numeric_limits<double>::max();
        for (std::size_t e = 0; e < entries.size(); ++e) {
            double d = detail::sqdist(pts[i], entries[e].centroid(dim));
            if (d < bd) { bd = d; best = e; }
        }
        bool absorbed = false;
        if (best < entries.size()) {
            Entry trial = entries[best];
            ++trial.n;
            if (trial.ls.empty()) trial.ls.assign(dim, 0.0);
            for (std::size_t d = 0; d < dim; ++d) trial.ls[d] += pts[i][d];
            for (std::size_t d = 0; d < dim; ++d) trial.ss += pts[i][d] * pts[i][d];
            if (trial.radius(dim) <= threshold) {
                trial.members = entries[best].members;
                trial.members.push_back(i);
                entries[best] = std::move(trial);
                absorbed = true;
            }
        }
        if (!absorbed) {
            Entry e;
            e.n = 1;
            e.ls = pts[i];
            for (std::size_t d = 0; d < dim; ++d) e.ss += pts[i][d] * pts[i][d];
            e.members = {i};
            entries.push_back(std::move(e));
        }
        // rebuild with a larger threshold when the entry list overflows the
        // tree capacity, as Birch does when it runs out of memory
        std::size_t capacity = branching * branching;
        if (entries.size() > capacity) {
            threshold *= 1.5;
            std::vector<Entry> rebuilt;
            for (const auto& old : entries) {
                Vector c = old.centroid(dim);
                std::size_t tbest = rebuilt.size();
                double tbd = std::numeric_limits<double>::max();
                for (std::size_t e = 0; e < rebuilt.size(); ++e) {
                    double d = detail::sqdist(c, rebuilt[e].centroid(dim));
                    if (d < tbd) { tbd = d; tbest = e; }
                }
                bool merged = false;
                if (tbest < rebuilt.size()) {
                    Entry trial = rebuilt[tbest];
                    trial.n += old.n;
                    for (std::size_t d = 0; d < dim; ++d) trial.ls[d] += old.ls[d];
                    trial.ss += old.ss;
                    if (trial.radius(dim) <= threshold) {
                        trial.members.insert(trial.members.end(), old.members.begin(), old.members.end());
                        rebuilt[tbest] = std::move(trial);
                        merged = true;
                    }
                }
                if (!merged) rebuilt.push_back(old);
            }
            entries = std::move(rebuilt);
        }
    }

    Matrix centroids;
    for (const auto& e : entries) centroids.push_back(e.centroid(dim));
    ClusterResult res;
    if (centroids.size() <= k) {
        res.assignment.assign(pts.size(), 0);
        for (std::size_t e = 0; e < entries.size(); ++e)
            for (auto idx : entries[e].members) res.assignment[idx] = static_cast<int>(e);
        res.centers = centroids;
    } else {
        ClusterResult global = agglomerative_cluster(centroids, k, Linkage::average);
        res.assignment.assign(pts.size(), 0);
        for (std::size_t e = 0; e < entries.size(); ++e)
            for (auto idx : entries[e].members) res.assignment[idx] = global.assignment[e];
        res.centers = std::move(global.centers);
    }
    res.iterations = 1;
    res.objective = static_cast<double>(entries.size());
    return res;
}

inline ClusterResult cluster(const Matrix& pts, const ClusterMethod& method, std::uint64_t seed) {
    method.validate();
    detail::check_points(pts, 1);
    if (method.kind != ClusterKind::dbscan && method.k > 1) {
        bool all_same = true;
        for (const auto& p : pts)
            if (p != pts[0]) { all_same = false; break; }
        if (all_same) throw std::invalid_argument("cluster: all points identical with k > 1");
    }
    ClusterResult res;
    switch (method.kind) {
        case ClusterKind::kmeans: res = kmeans_cluster(pts, method.k, seed); break;
        case ClusterKind::gmm_diag: res = gmm_diag_cluster(pts, method.k, seed); break;
        case ClusterKind::dbscan: res = dbscan_cluster(pts, method.eps, method.min_pts); break;
        case ClusterKind::agglomerative: res = agglomerative_cluster(pts, method.k, method.linkage); break;
        case ClusterKind::birch: res = birch_cluster(pts, method.k, method.birch_threshold, method.birch_branching); break;
    }
    int mx = -1;
    for (int a : res.assignment) mx = std::max(mx, a);
    if (mx <= 0) {
        res.degenerate = true;
        res.note = "single cluster contains all points";
    }
    return res;
}

inline std::string cluster_kind_name(ClusterKind k) {
    switch (k) {
        case ClusterKind::kmeans: return "kmeans";
        case ClusterKind::gmm_diag: return "gmm";
        case ClusterKind::dbscan: return "dbscan";
        case ClusterKind::agglomerative: return "agglomerative";
        case ClusterKind::birch: return "birch";
    }
    return "?";
}

}  // namespace negcamp
