#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "negcamp/clustering.hpp"

using namespace negcamp;

namespace {

double sq(double x) { return x * x; }

// exhaustive optimal 2-means objective over all 2^n binary partitions
double brute_force_2means(const Matrix& pts) {
    std::size_t n = pts.size(), dim = pts[0].size();
    double best = std::numeric_limits<double>::max();
    for (std::size_t mask = 1; mask + 1 < (1u << n); ++mask) {
        Matrix centers(2, Vector(dim, 0.0));
        std::size_t counts[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            int g = (mask >> i) & 1;
            ++counts[g];
            for (std::size_t d = 0; d < dim; ++d) centers[g][d] += pts[i][d];
        }
        for (int g = 0; g < 2; ++g)
            for (std::size_t d = 0; d < dim; ++d) centers[g][d] /= static_cast<double>(counts[g]);
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int g = (mask >> i) & 1;
            for (std::size_t d = 0; d < dim; ++d) obj += sq(pts[i][d] - centers[g][d]);
        }
        best = std::min(best, obj);
    }
    return best;
}

Matrix two_blob(std::uint64_t seed, std::size_t per_blob, double gap = 8.0) {
    Rng rng(seed);
    Matrix pts;
    for (std::size_t i = 0; i < per_blob; ++i)
        pts.push_back({rng.normal(0, 1), rng.normal(0, 1)});
    for (std::size_t i = 0; i < per_blob; ++i)
        pts.push_back({rng.normal(gap, 1), rng.normal(gap, 1)});
    return pts;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    // label-permutation invariant comparison
    std::map<int, int> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto f = fwd.find(a[i]);
        auto g = bwd.find(b[i]);
        if (f == fwd.end() && g == bwd.end()) {
            fwd[a[i]] = b[i];
            bwd[b[i]] = a[i];
        } else if (f == fwd.end() || g == bwd.end() || f->second != b[i] || g->second != a[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("kmeans matches brute-force optimum on small instances") {
    Rng rng(314);
    for (int rep = 0; rep < 8; ++rep) {
        Matrix pts;
        std::size_t n = 6 + rng.below(6);  // up to 11 points
        for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.normal(), rng.normal()});
        double target = brute_force_2means(pts);
        // k-means is a local optimizer; take the best of a few restarts
        double found = std::numeric_limits<double>::max();
        for (std::uint64_t s = 0; s < 10; ++s)
            found = std::min(found, kmeans_cluster(pts, 2, s).objective);
        CHECK(found >= target - 1e-9);
        CHECK(found == Catch::Approx(target).margin(1e-6));
    }
}

TEST_CASE("kmeans inertia trace is non-increasing") {
    Matrix pts = two_blob(9, 60, 3.0);
    ClusterResult r = kmeans_cluster(pts, 3, 4);
    REQUIRE(!r.objective_trace.empty());
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-9);
}

TEST_CASE("kmeans separates two well-spaced blobs") {
    Matrix pts = two_blob(5, 30);
    ClusterResult r = kmeans_cluster(pts, 2, 1);
    std::vector<int> expected(60, 0);
    for (int i = 30; i < 60; ++i) expected[i] = 1;
    CHECK(same_partition(r.assignment, expected));
    CHECK(!cluster(pts, ClusterMethod{}, 1).degenerate);
}

TEST_CASE("gmm log-likelihood trace is non-decreasing") {
    Matrix pts = two_blob(21, 50, 4.0);
    ClusterResult r = gmm_diag_cluster(pts, 2, 3);
    REQUIRE(r.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] >= r.objective_trace[i - 1] - 1e-9);
}

TEST_CASE("gmm recovers blob structure") {
    Matrix pts = two_blob(13, 40);
    ClusterResult r = gmm_diag_cluster(pts, 2, 2);
    std::vector<int> expected(80, 0);
    for (int i = 40; i < 80; ++i) expected[i] = 1;
    CHECK(same_partition(r.assignment, expected));
}

TEST_CASE("dbscan labels sparse points as noise") {
    Matrix pts;
    for (int i = 0; i < 8; ++i) pts.push_back({0.1 * i, 0.0});
    pts.push_back({100.0, 100.0});  // isolated
    ClusterResult r = dbscan_cluster(pts, 0.3, 3);
    CHECK(r.assignment[8] == -1);
    std::set<int> dense(r.assignment.begin(), r.assignment.begin() + 8);
    CHECK(dense == std::set<int>{0});
}

TEST_CASE("dbscan merges density-connected chains") {
    Matrix pts;
    for (int i = 0; i < 20; ++i) pts.push_back({0.2 * i, 0.0});
    ClusterResult r = dbscan_cluster(pts, 0.45, 2);
    for (int a : r.assignment) CHECK(a == 0);
}

TEST_CASE("agglomerative linkage behaviors") {
    // two pairs plus a bridge point; single linkage chains through the bridge
    Matrix pts = {{0, 0}, {1, 0}, {2, 0}, {10, 0}, {11, 0}};
    ClusterResult sing = agglomerative_cluster(pts, 2, Linkage::single);
    std::vector<int> expected = {0, 0, 0, 1, 1};
    CHECK(same_partition(sing.assignment, expected));
    ClusterResult comp = agglomerative_cluster(pts, 2, Linkage::complete);
    CHECK(same_partition(comp.assignment, expected));
    ClusterResult avg = agglomerative_cluster(pts, 2, Linkage::average);
    CHECK(same_partition(avg.assignment, expected));
    CHECK(sing.centers.size() == 2);
}

TEST_CASE("agglomerative k=n leaves singletons") {
    Matrix pts = {{0, 0}, {5, 0}, {9, 9}};
    ClusterResult r = agglomerative_cluster(pts, 3, Linkage::average);
    std::set<int> labels(r.assignment.begin(), r.assignment.end());
    CHECK(labels.size() == 3);
}

TEST_CASE("birch groups blobs and covers every point") {
    Matrix pts = two_blob(30, 50);
    ClusterResult r = birch_cluster(pts, 2, 1.0, 8);
    REQUIRE(r.assignment.size() == 100);
    std::vector<int> expected(100, 0);
    for (int i = 50; i < 100; ++i) expected[i] = 1;
    CHECK(same_partition(r.assignment, expected));
}

TEST_CASE("birch handles entry overflow by raising its threshold") {
    // many spread points with a tiny branching factor forces rebuilds
    Rng rng(88);
    Matrix pts;
    for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform() * 100, rng.uniform() * 100});
    ClusterResult r = birch_cluster(pts, 3, 0.05, 2);
    CHECK(r.assignment.size() == 200);
    std::set<int> labels(r.assignment.begin(), r.assignment.end());
    CHECK(labels.size() <= 3);
    CHECK(!labels.count(-1));
}

TEST_CASE("cluster dispatcher validation and degeneracy") {
    ClusterMethod m;
    m.k = 0;
    CHECK_THROWS_AS(cluster({{0, 0}, {1, 1}}, m, 1), std::invalid_argument);
    m.k = 2;
    CHECK_THROWS_AS(cluster({}, m, 1), std::invalid_argument);
    CHECK_THROWS_WITH(cluster({{1, 1}, {1, 1}, {1, 1}}, m, 1),
                      Catch::Matchers::ContainsSubstring("identical"));
    m.k = 1;
    ClusterResult r = cluster({{0, 0}, {1, 1}}, m, 1);
    CHECK(r.degenerate);
    CHECK(!r.note.empty());
}

TEST_CASE("kmeans is deterministic given a seed") {
    Matrix pts = two_blob(2, 25, 2.0);
    ClusterResult a = kmeans_cluster(pts, 4, 9);
    ClusterResult b = kmeans_cluster(pts, 4, 9);
    CHECK(a.assignment == b.assignment);
    CHECK(a.objective == b.objective);
}
