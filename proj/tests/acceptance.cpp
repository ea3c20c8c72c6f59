// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. The CLI binary path is argv[1] (used by the determinism
// criterion).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "negcamp/cascade.hpp"
#include "negcamp/classifiers.hpp"
#include "negcamp/clustering.hpp"
#include "negcamp/dataset_io.hpp"
#include "negcamp/metrics.hpp"
#include "negcamp/nbreg.hpp"
#include "negcamp/pca.hpp"
#include "negcamp/pipeline.hpp"
#include "negcamp/resample.hpp"
#include "negcamp/split.hpp"
#include "negcamp/splitcraft.hpp"
#include "negcamp/synth.hpp"

using namespace negcamp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

Dataset benchmark_5100(std::uint64_t seed) {
    SynthSpec spec;
    spec.dim = 3;
    spec.n_pos_clean = 2553;
    spec.n_pos_overlap = 1100;
    spec.n_neg = 1447;
    return synth_generate(spec, seed);
}

// --- criterion 1: split arithmetic ------------------------------------------

Check criterion_split() {
    Check c;
    auto t0 = Clock::now();
    for (std::uint64_t seed : {1ull, 7ull, 40404ull}) {
        Dataset ds = benchmark_5100(seed);
        SplitPair sp = stratified_split(ds, 0.85, seed * 31 + 5);
        std::size_t train_neg = 0, test_neg = 0;
        for (const auto& r : sp.train.records()) train_neg += *r.label;
        for (const auto& r : sp.test.records()) test_neg += *r.label;
        if (sp.train.size() != 4335) c.fail("train size " + std::to_string(sp.train.size()));
        if (sp.test.size() != 765) c.fail("test size " + std::to_string(sp.test.size()));
        if (train_neg != 1230) c.fail("train negatives " + std::to_string(train_neg));
        if (test_neg != 217) c.fail("test negatives " + std::to_string(test_neg));
    }
    if (seconds_since(t0) >= 1.0) c.fail("runtime >= 1s");
    return c;
}

// --- criterion 2: partition sum invariant -----------------------------------

Check criterion_partition_sums() {
    Check c;
    Dataset ds = benchmark_5100(2);
    SplitPair sp = stratified_split(ds, 0.85, 17);
    const Dataset& train = sp.train;

    auto verify = [&](const TrainPartition& part, const std::string& tag) {
        std::size_t sum = part.p0.size() + part.p2.size() + part.n.size();
        if (sum != 4335) c.fail(tag + ": sum " + std::to_string(sum));
        if (part.n.size() != 1230) c.fail(tag + ": |n| " + std::to_string(part.n.size()));
    };

    AxisEmbeddings ax = axis_embeddings(train);
    for (double t : {0.0, 0.03, 0.05})
        verify(assign_axis(train, ax, ThresholdConfig{t}), "axis t=" + std::to_string(t));

    for (auto kind : {ClusterKind::kmeans, ClusterKind::gmm_diag, ClusterKind::birch}) {
        ClusterMethod m;
        m.kind = kind;
        m.k = 2;
        m.birch_threshold = 2.0;
        verify(assign_cluster(train, m, 3), cluster_kind_name(kind));
    }
    return c;
}

// --- criterion 3: threshold monotonicity ------------------------------------

Check criterion_monotonicity() {
    Check c;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng meta(seed * 101);
        SynthSpec spec;
        spec.dim = 2 + meta.below(4);
        spec.n_pos_clean = 40 + meta.below(80);
        spec.n_pos_overlap = 20 + meta.below(60);
        spec.n_neg = 30 + meta.below(60);
        Dataset ds = synth_generate(spec, seed);
        AxisEmbeddings ax = axis_embeddings(ds);
        std::size_t p2_000 = assign_axis(ds, ax, ThresholdConfig{0.0}).p2.size();
        std::size_t p2_003 = assign_axis(ds, ax, ThresholdConfig{0.03}).p2.size();
        std::size_t p2_005 = assign_axis(ds, ax, ThresholdConfig{0.05}).p2.size();
        if (!(p2_005 <= p2_003 && p2_003 <= p2_000))
            c.fail("seed " + std::to_string(seed) + ": " + std::to_string(p2_000) + "/" +
                   std::to_string(p2_003) + "/" + std::to_string(p2_005));
    }
    return c;
}

// --- criterion 4: metrics vs counting oracle --------------------------------

Check criterion_metrics_oracle() {
    Check c;
    Rng rng(424242);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<int> yt(200), yp(200);
        for (auto& v : yt) v = static_cast<int>(rng.below(2));
        for (auto& v : yp) v = static_cast<int>(rng.below(2));
        // counting oracle, fully independent of module metrics
        std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (int i = 0; i < 200; ++i) {
            if (yt[i] == 1 && yp[i] == 1) ++tp;
            else if (yt[i] == 0 && yp[i] == 1) ++fp;
            else if (yt[i] == 1 && yp[i] == 0) ++fn;
            else ++tn;
        }
        EvalReport r = evaluate(yt, yp);
        if (r.conf.tp != tp || r.conf.fp != fp || r.conf.fn != fn || r.conf.tn != tn) {
            c.fail("confusion mismatch at rep " + std::to_string(rep));
            break;
        }
        double op = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
        double orc = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
        double of1 = (op + orc) > 0 ? 2 * op * orc / (op + orc) : 0.0;
        std::size_t tp0 = tn, fp0 = fn, fn0 = fp;
        double op0 = (tp0 + fp0) ? double(tp0) / double(tp0 + fp0) : 0.0;
        double or0 = (tp0 + fn0) ? double(tp0) / double(tp0 + fn0) : 0.0;
        double of0 = (op0 + or0) > 0 ? 2 * op0 * or0 / (op0 + or0) : 0.0;
        std::size_t s1 = tp + fn, s0 = tn + fp;
        double om = (of0 + of1) / 2;
        double ow = (of0 * s0 + of1 * s1) / 200.0;
        auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
        if (r.class1.precision != op || r.class1.recall != orc || !close(r.class1.f1, of1) ||
            !close(r.class0.f1, of0) || !close(r.f1m, om) || !close(r.f1w, ow)) {
            c.fail("metric mismatch at rep " + std::to_string(rep));
            break;
        }
    }
    return c;
}

// --- criterion 5: cascade lift on the overlap benchmark ---------------------

Check criterion_cascade_lift() {
    Check c;
    auto t0 = Clock::now();
    double lift_sum = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SynthSpec spec = overlap_benchmark_spec(4000, 0.25);
        Dataset ds = synth_generate(spec, seed);
        SplitPair sp = stratified_split(ds, 0.85, seed);

        ModelSpec rf;
        rf.kind = ModelKind::rf;
        rf.max_depth = 6;
        rf.n_trees = 30;
        rf.seed = seed;

        PartitionMethod pm;
        pm.use_axis = true;
        pm.threshold.t = 0.0;
        RunResult two = run_two_stage(sp.train, sp.test, pm, rf, rf);
        EvalReport one = run_single_stage(sp.train, sp.test, rf);
        lift_sum += two.report.f1m - one.f1m;
    }
    double mean_lift = lift_sum / 10.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mean lift %.4f", mean_lift);
    c.detail = buf;
    if (mean_lift < 0.02) c.fail("below 0.02");
    if (seconds_since(t0) >= 60.0) c.fail("runtime >= 60s");
    return c;
}

// --- criterion 6: classifier sanity -----------------------------------------

Check criterion_classifier_sanity() {
    Check c;
    Rng rng(606);
    Matrix Xtr, Xte;
    std::vector<int> ytr, yte;
    for (int i = 0; i < 200; ++i) {
        for (int cls = 0; cls <= 1; ++cls) {
            Vector v(4);
            for (auto& x : v) x = rng.normal(cls * 6.0, 1.0);
            if (i < 150) {
                Xtr.push_back(v);
                ytr.push_back(cls);
            } else {
                Xte.push_back(v);
                yte.push_back(cls);
            }
        }
    }
    for (auto kind : {ModelKind::lr, ModelKind::ridge, ModelKind::svm_linear, ModelKind::gnb,
                      ModelKind::knn, ModelKind::dtree, ModelKind::rf, ModelKind::gboost,
                      ModelKind::mlp, ModelKind::sgd_linear}) {
        auto t0 = Clock::now();
        ModelSpec spec;
        spec.kind = kind;
        spec.seed = 5;
        spec.n_trees = 30;
        spec.epochs = kind == ModelKind::mlp ? 30 : 300;
        TrainedModel m = train(spec, Xtr, ytr);
        auto pred = m.predict(Xte);
        double ok = 0;
        for (std::size_t i = 0; i < yte.size(); ++i) ok += pred[i] == yte[i];
        double acc = ok / static_cast<double>(yte.size());
        if (acc < 0.95) c.fail(model_kind_name(kind) + " acc " + std::to_string(acc));
        if (seconds_since(t0) >= 5.0) c.fail(model_kind_name(kind) + " too slow");
    }
    return c;
}

// --- criterion 7: numerical monotonicity ------------------------------------

Check criterion_numerics() {
    Check c;
    Rng rng(17);
    Matrix pts;
    for (int i = 0; i < 150; ++i)
        pts.push_back({rng.normal(i % 3 * 4.0, 1.0), rng.normal(i % 3 * 4.0, 1.0)});

    ClusterResult km = kmeans_cluster(pts, 3, 2);
    for (std::size_t i = 1; i < km.objective_trace.size(); ++i)
        if (km.objective_trace[i] > km.objective_trace[i - 1] + 1e-9) c.fail("kmeans inertia rose");

    ClusterResult gm = gmm_diag_cluster(pts, 3, 2);
    for (std::size_t i = 1; i < gm.objective_trace.size(); ++i)
        if (gm.objective_trace[i] < gm.objective_trace[i - 1] - 1e-9) c.fail("gmm ll fell");

    {
        DesignMatrix d;
        d.names = {"intercept", "x"};
        Rng r2(5);
        for (int i = 0; i < 300; ++i) {
            double x = r2.normal();
            double mu = std::exp(0.8 + 0.5 * x);
            double lambda = r2.gamma(1.0 / 0.5, 0.5 * mu);
            d.rows.push_back({1.0, x});
            d.response.push_back(r2.poisson(lambda));
        }
        RegressionResult rr = fit_nb2(d);
        for (std::size_t i = 1; i < rr.ll_trace.size(); ++i)
            if (rr.ll_trace[i] < rr.ll_trace[i - 1] - 1e-9) c.fail("nb2 ll fell");
    }

    {
        std::size_t in = 4, hidden = 5;
        Matrix X;
        std::vector<int> y;
        for (int i = 0; i < 16; ++i) {
            X.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
            y.push_back(static_cast<int>(rng.below(2)));
        }
        Vector params(models::Mlp::param_count(in, hidden));
        for (auto& p : params) p = rng.normal() * 0.4;
        std::vector<std::size_t> batch(X.size());
        std::iota(batch.begin(), batch.end(), 0);
        Vector grad;
        models::mlp_loss_grad(params, in, hidden, X, y, batch, &grad);
        double h = 1e-6, worst = 0;
        for (std::size_t j = 0; j < params.size(); ++j) {
            Vector pp = params, pm = params;
            pp[j] += h;
            pm[j] -= h;
            double fd = (models::mlp_loss_grad(pp, in, hidden, X, y, batch, nullptr) -
                         models::mlp_loss_grad(pm, in, hidden, X, y, batch, nullptr)) /
                        (2 * h);
            double denom = std::max(1.0, std::abs(grad[j]));
            worst = std::max(worst, std::abs(fd - grad[j]) / denom);
        }
        if (worst >= 1e-4) c.fail("mlp gradient error " + std::to_string(worst));
    }
    return c;
}

// --- criterion 8: resampling ------------------------------------------------

Check criterion_resampling() {
    Check c;
    Rng rng(8);
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 120; ++i) {
        X.push_back({rng.normal(0, 1), rng.normal(0, 1)});
        y.push_back(0);
    }
    std::vector<std::size_t> min_idx;
    for (int i = 0; i < 30; ++i) {
        min_idx.push_back(X.size());
        X.push_back({rng.normal(4, 1), rng.normal(4, 1)});
        y.push_back(1);
    }
    ResampleConfig cfg;
    cfg.strategy = ResampleStrategy::smote;
    auto [Xo, yo] = smote(X, y, cfg, 9);
    std::size_t n1 = std::count(yo.begin(), yo.end(), 1);
    if (n1 != 120) c.fail("smote count " + std::to_string(n1));
    for (std::size_t i = X.size(); i < Xo.size(); ++i) {
        // membership on some minority-minority segment
        double best = 1e18;
        for (auto a : min_idx)
            for (auto b : min_idx) {
                if (a == b) continue;
                double num = 0, den = 0;
                for (int d = 0; d < 2; ++d) {
                    num += (Xo[i][d] - X[a][d]) * (X[b][d] - X[a][d]);
                    den += (X[b][d] - X[a][d]) * (X[b][d] - X[a][d]);
                }
                double t = std::clamp(num / den, 0.0, 1.0);
                double s = 0;
                for (int d = 0; d < 2; ++d) {
                    double cdiff = Xo[i][d] - (X[a][d] + t * (X[b][d] - X[a][d]));
                    s += cdiff * cdiff;
                }
                best = std::min(best, s);
            }
        if (best > 1e-18) {
            c.fail("synthetic point off-segment at " + std::to_string(i));
            break;
        }
    }

    Matrix Xt = {{0.0}, {5.0}, {0.1}};
    std::vector<int> yt = {0, 0, 1};
    auto [Xc, yc] = tomek_remove(Xt, yt);
    if (!(Xc.size() == 2 && Xc[0] == Vector{5.0} && Xc[1] == Vector{0.1} &&
          yc == std::vector<int>{0, 1}))
        c.fail("tomek hand example mismatch");
    return c;
}

// --- criterion 9: NB2 recovery ----------------------------------------------

Check criterion_nb2_recovery() {
    Check c;
    auto t0 = Clock::now();
    const double b0 = 0.5, b1 = -0.2, alpha = 0.7;
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed * 7919);
        DesignMatrix d;
        d.names = {"intercept", "x"};
        for (int i = 0; i < 5000; ++i) {
            double x = rng.normal();
            double mu = std::exp(b0 + b1 * x);
            double lambda = rng.gamma(1.0 / alpha, alpha * mu);
            d.rows.push_back({1.0, x});
            d.response.push_back(rng.poisson(lambda));
        }
        RegressionResult r = fit_nb2(d);
        bool ok = std::abs(r.coefficients[0].coef - b0) <= 3 * r.coefficients[0].std_err &&
                  std::abs(r.coefficients[1].coef - b1) <= 3 * r.coefficients[1].std_err;
        if (ok) ++good;
    }
    c.detail = "recovered " + std::to_string(good) + "/100";
    if (good < 95) c.fail("below 95/100");

    DesignMatrix io;
    io.names = {"intercept"};
    Rng rng(4);
    double sum = 0;
    for (int i = 0; i < 400; ++i) {
        long yv = rng.poisson(3.0 + 2.0 * rng.uniform());
        io.rows.push_back({1.0});
        io.response.push_back(yv);
        sum += yv;
    }
    RegressionResult r = fit_nb2(io);
    double mean = sum / 400.0;
    if (std::abs(std::exp(r.coefficients[0].coef) - mean) > 1e-8)
        c.fail("intercept-only mismatch");
    double secs = seconds_since(t0);
    if (secs >= 30.0) c.fail("runtime " + std::to_string(secs) + "s >= 30s");
    return c;
}

// --- criterion 10: PCA ------------------------------------------------------

Check criterion_pca() {
    Check c;
    Rng rng(10);
    Matrix X;
    for (int i = 0; i < 300; ++i) {
        Vector v(5);
        for (std::size_t j = 0; j < 5; ++j) v[j] = rng.normal(0.0, 1.0 + 0.4 * j);
        v[2] += 0.6 * v[0];
        X.push_back(v);
    }
    PcaModel m = pca_fit(X, 5);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            double dot = 0;
            for (std::size_t j = 0; j < 5; ++j) dot += m.components[a][j] * m.components[b][j];
            if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-8) c.fail("orthonormality");
        }

    // dense oracle: power iteration with deflation on the covariance
    std::size_t n = X.size(), dim = 5;
    Vector mean(dim, 0.0);
    for (const auto& r : X)
        for (std::size_t j = 0; j < dim; ++j) mean[j] += r[j] / static_cast<double>(n);
    Matrix cov(dim, Vector(dim, 0.0));
    for (const auto& r : X)
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                cov[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]) / static_cast<double>(n);
    double trace = 0;
    for (std::size_t j = 0; j < dim; ++j) trace += cov[j][j];

    Matrix defl = cov;
    double explained_sum = 0;
    for (std::size_t comp = 0; comp < 5; ++comp) {
        Vector v(dim, 1.0 / std::sqrt(5.0));
        double eig = 0;
        for (int it = 0; it < 20000; ++it) {
            Vector w(dim, 0.0);
            for (std::size_t a = 0; a < dim; ++a)
                for (std::size_t b = 0; b < dim; ++b) w[a] += defl[a][b] * v[b];
            double nrm = 0;
            for (double x : w) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (nrm == 0) break;
            for (auto& x : w) x /= nrm;
            double delta = 0;
            for (std::size_t j = 0; j < dim; ++j) delta = std::max(delta, std::abs(w[j] - v[j]));
            v = w;
            eig = nrm;
            if (delta < 1e-14) break;
        }
        double frac = eig / trace;
        explained_sum += frac;
        if (std::abs(m.explained_variance[comp] - frac) > 1e-8)
            c.fail("explained variance mismatch at " + std::to_string(comp));
        double dot = 0;
        for (std::size_t j = 0; j < dim; ++j) dot += v[j] * m.components[comp][j];
        if (std::abs(std::abs(dot) - 1.0) > 1e-8)
            c.fail("component direction mismatch at " + std::to_string(comp));
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) defl[a][b] -= eig * v[a] * v[b];
    }

    // collinear case
    Matrix L;
    Rng r2(2);
    for (int i = 0; i < 40; ++i) {
        double t = r2.normal();
        L.push_back({t, t});
    }
    PcaModel lm = pca_fit(L, 1);
    if (std::abs(lm.explained_variance[0] - 1.0) > 1e-10) c.fail("collinear PC1 fraction");
    if (std::abs(lm.components[0][0] - 1.0 / std::sqrt(2.0)) > 1e-8) c.fail("collinear direction");
    return c;
}

// --- criterion 11: determinism of run/grid via the CLI ----------------------

int run_cli(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Check criterion_determinism(const std::string& cli) {
    Check c;
    if (cli.empty()) {
        c.fail("cli path not provided");
        return c;
    }
    fs::path work = fs::temp_directory_path() / "negcamp_accept";
    fs::remove_all(work);
    fs::create_directories(work);

    // synthetic dataset on disk
    SynthSpec spec;
    spec.dim = 3;
    spec.n_pos_clean = 140;
    spec.n_pos_overlap = 70;
    spec.n_neg = 90;
    Dataset ds = synth_generate(spec, 77);
    {
        std::ofstream out(work / "data.jsonl", std::ios::binary);
        save_jsonl(ds, out);
    }
    {
        std::ofstream cfg(work / "run.json");
        cfg << R"({
  "dataset": ")" << (work / "data.jsonl").string() << R"(",
  "split_ratio": 0.85,
  "split_seed": 9,
  "method": {"axis": {"t": 0.0}},
  "stage_a": {"kind": "rf", "n_trees": 12, "max_depth": 6, "seed": 3},
  "stage_b": {"kind": "rf", "n_trees": 12, "max_depth": 6, "seed": 4}
})";
    }
    {
        std::ofstream cfg(work / "grid.json");
        cfg << R"({
  "dataset": ")" << (work / "data.jsonl").string() << R"(",
  "split_ratio": 0.85,
  "split_seed": 9,
  "method": {"axis": {"t": 0.0}},
  "grid": {
    "thresholds": [0.0, 0.03],
    "stage_a_kinds": ["lr", "gnb"],
    "stage_b_kinds": ["lr"]
  },
  "seed": 5
})";
    }

    auto run_dir = [&](const std::string& sub, const std::string& cfgname, const std::string& out) {
        std::string cmd = "\"" + cli + "\" " + sub + " --config \"" + (work / cfgname).string() +
                          "\" --out \"" + (work / out).string() + "\" > /dev/null 2>&1";
        return run_cli(cmd);
    };
    if (run_dir("run", "run.json", "r1") != 0 || run_dir("run", "run.json", "r2") != 0)
        c.fail("cli run failed");
    if (run_dir("grid", "grid.json", "g1") != 0 || run_dir("grid", "grid.json", "g2") != 0)
        c.fail("cli grid failed");
    if (c.ok) {
        for (const char* f : {"report.json", "table3.csv", "partition.csv"})
            if (slurp(work / "r1" / f) != slurp(work / "r2" / f) || slurp(work / "r1" / f).empty())
                c.fail(std::string("run artifact differs: ") + f);
        for (const char* f : {"table4.csv", "grid.json"})
            if (slurp(work / "g1" / f) != slurp(work / "g2" / f) || slurp(work / "g1" / f).empty())
                c.fail(std::string("grid artifact differs: ") + f);
    }
    fs::remove_all(work);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    struct Item {
        const char* name;
        Check result;
    };
    std::vector<Item> items;
    items.push_back({"1 split-arithmetic", criterion_split()});
    items.push_back({"2 partition-sum-invariant", criterion_partition_sums()});
    items.push_back({"3 threshold-monotonicity", criterion_monotonicity()});
    items.push_back({"4 metrics-oracle", criterion_metrics_oracle()});
    items.push_back({"5 cascade-lift", criterion_cascade_lift()});
    items.push_back({"6 classifier-sanity", criterion_classifier_sanity()});
    items.push_back({"7 numerical-monotonicity", criterion_numerics()});
    items.push_back({"8 resampling", criterion_resampling()});
    items.push_back({"9 nb2-recovery", criterion_nb2_recovery()});
    items.push_back({"10 pca", criterion_pca()});
    items.push_back({"11 determinism", criterion_determinism(cli)});

    bool all_ok = true;
    for (const auto& it : items) {
        std::cout << (it.result.ok ? "PASS" : "FAIL") << " criterion " << it.name;
        if (!it.result.detail.empty()) std::cout << " (" << it.result.detail << ")";
        std::cout << "\n";
        if (!it.result.ok) all_ok = false;
    }
    return all_ok ? 0 : 1;
}
