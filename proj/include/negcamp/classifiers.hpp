#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "negcamp/rng.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

enum class ModelKind { lr, ridge, svm_linear, gnb, knn, dtree, rf, gboost, mlp, sgd_linear };

inline std::string model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::lr: return "lr";
        case ModelKind::ridge: return "ridge";
        case ModelKind::svm_linear: return "svm_linear";
        case ModelKind::gnb: return "gnb";
        case ModelKind::knn: return "knn";
        case ModelKind::dtree: return "dtree";
        case ModelKind::rf: return "rf";
        case ModelKind::gboost: return "gboost";
        case ModelKind::mlp: return "mlp";
        case ModelKind::sgd_linear: return "sgd_linear";
    }
    return "?";
}

inline ModelKind model_kind_from_name(const std::string& s) {
    for (auto k : {ModelKind::lr, ModelKind::ridge, ModelKind::svm_linear, ModelKind::gnb,
                   ModelKind::knn, ModelKind::dtree, ModelKind::rf, ModelKind::gboost,
                   ModelKind::mlp, ModelKind::sgd_linear})
        if (model_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown model kind: " + s);
}

struct ModelSpec {
    ModelKind kind = ModelKind::lr;
    double learning_rate = 0.1;
    std::size_t epochs = 300;
    double lambda = 1e-4;          // L2 regularization
    std::size_t k_neighbors = 5;
    std::size_t max_depth = 8;
    std::size_t min_samples_leaf = 1;
    std::size_t n_trees = 100;
    double feature_subsample = 0.0;  // 0 means sqrt(dim) for rf, all for dtree
    double row_subsample = 1.0;      // gboost
    double shrinkage = 0.1;          // gboost eta
    std::size_t hidden = 32;         // mlp
    std::size_t batch_size = 32;     // mlp
    std::uint64_t seed = 0;

    void validate() const {
        if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");
        if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
        if (k_neighbors < 1) throw std::invalid_argument("k_neighbors must be >= 1");
        if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
        if (shrinkage <= 0.0 || shrinkage > 1.0) throw std::invalid_argument("shrinkage must be in (0, 1]");
        if (!(row_subsample > 0.0 && row_subsample <= 1.0))
            throw std::invalid_argument("row_subsample must be in (0, 1]");
        if (hidden < 1) throw std::invalid_argument("hidden must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    }
};

namespace models {

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

inline double log_loss(double p, int y) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    return y ? -std::log(p) : -std::log(1.0 - p);
}

// one-dimensional logistic map fitted on training margins (Platt-style)
struct PlattMap {
    double a = 1.0, b = 0.0;
    double apply(double margin) const { return sigmoid(a * margin + b); }
};

inline PlattMap fit_platt(const std::vector<double>& margins, const std::vector<int>& y) {
    PlattMap pm;
    pm.a = 1.0;
    pm.b = 0.0;
    for (int it = 0; it < 100; ++it) {
        double ga = 0, gb = 0, haa = 1e-9, hab = 0, hbb = 1e-9;
        for (std::size_t i = 0; i < margins.size(); ++i) {
            double p = sigmoid(pm.a * margins[i] + pm.b);
            double r = p - y[i];
            ga += r * margins[i];
            gb += r;
            double w = p * (1 - p);
            haa += w * margins[i] * margins[i];
            hab += w * margins[i];
            hbb += w;
        }
        double det = haa * hbb - hab * hab;
        if (std::abs(det) < 1e-300) break;
        double da = (hbb * ga - hab * gb) / det;
        double db = (haa * gb - hab * ga) / det;
        pm.a -= da;
        pm.b -= db;
        if (std::abs(da) < 1e-10 && std::abs(db) < 1e-10) break;
    }
    return pm;
}

struct Base {
    virtual ~Base() = default;
    virtual double score_row(const Vector& x) const = 0;
    virtual nlohmann::json save() const = 0;
};

// --- linear family ---------------------------------------------------------

struct Linear : Base {
    Vector w;
    double b = 0.0;
    bool use_platt = false;
    PlattMap platt;

    double margin(const Vector& x) const {
        double m = b;
        for (std::size_t i = 0; i < w.size(); ++i) m += w[i] * x[i];
        return m;
    }
    double score_row(const Vector& x) const override {
        double m = margin(x);
        return use_platt ? platt.apply(m) : sigmoid(m);
    }
    nlohmann::json save() const override {
        return {{"w", w}, {"b", b}, {"use_platt", use_platt}, {"platt_a", platt.a}, {"platt_b", platt.b}};
    }
    static std::shared_ptr<Linear> load(const nlohmann::json& j) {
        auto m = std::make_shared<Linear>();
        m->w = j["w"].get<Vector>();
        m->b = j["b"];
        m->use_platt = j["use_platt"];
        m->platt.a = j["platt_a"];
        m->platt.b = j["platt_b"];
        return m;
    }
};

// --- gaussian naive bayes --------------------------------------------------

struct Gnb : Base {
    double log_prior0 = 0, log_prior1 = 0;
    Vector mean0, mean1, var0, var1;

    double class_loglik(const Vector& x, const Vector& mu, const Vector& var, double lp) const {
        double ll = lp;
        for (std::size_t d = 0; d < x.size(); ++d) {
            double c = x[d] - mu[d];
            ll += -0.5 * (std::log(2.0 * 3.14159265358979323846 * var[d]) + c * c / var[d]);
        }
        return ll;
    }
    double score_row(const Vector& x) const override {
        double l0 = class_loglik(x, mean0, var0, log_prior0);
        double l1 = class_loglik(x, mean1, var1, log_prior1);
        double mx = std::max(l0, l1);
        double e0 = std::exp(l0 - mx), e1 = std::exp(l1 - mx);
        return e1 / (e0 + e1);
    }
    nlohmann::json save() const override {
        return {{"log_prior0", log_prior0}, {"log_prior1", log_prior1},
                {"mean0", mean0}, {"mean1", mean1}, {"var0", var0}, {"var1", var1}};
    }
    static std::shared_ptr<Gnb> load(const nlohmann::json& j) {
        auto m = std::make_shared<Gnb>();
        m->log_prior0 = j["log_prior0"];
        m->log_prior1 = j["log_prior1"];
        m->mean0 = j["mean0"].get<Vector>();
        m->mean1 = j["mean1"].get<Vector>();
        m->var0 = j["var0"].get<Vector>();
        m->var1 = j["var1"].get<Vector>();
        return m;
    }
};

// --- k nearest neighbors ---------------------------------------------------

struct Knn : Base {
    Matrix X;
    std::vector<int> y;
    std::size_t k = 5;

    double score_row(const Vector& q) const override {
        std::vector<std::pair<double, std::size_t>> d;
        d.reserve(X.size());
        for (std::size_t i = 0; i < X.size(); ++i) {
            double s = 0;
            for (std::size_t j = 0; j < q.size(); ++j) {
                double c = X[i][j] - q[j];
                s += c * c;
            }
            d.emplace_back(s, i);
        }
        std::size_t kk = std::min(k, d.size());
        std::partial_sort(d.begin(), d.begin() + kk, d.end());
        double votes = 0;
        for (std::size_t i = 0; i < kk; ++i) votes += y[d[i].second];
        return votes / static_cast<double>(kk);
    }
    nlohmann::json save() const override { return {{"X", X}, {"y", y}, {"k", k}}; }
    static std::shared_ptr<Knn> load(const nlohmann::json& j) {
        auto m = std::make_shared<Knn>();
        m->X = j["X"].get<Matrix>();
        m->y = j["y"].get<std::vector<int>>();
        m->k = j["k"];
        return m;
    }
};

// --- decision / regression trees -------------------------------------------

struct TreeNode {
    int feature = -1;          // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;        // leaf prediction
    int left = -1, right = -1; // child indices
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(const Vector& x) const {
        int i = 0;
        while (nodes[i].feature >= 0)
            i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
        return nodes[i].value;
    }
    nlohmann::json save() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : nodes)
            arr.push_back({{"f", n.feature}, {"t", n.threshold}, {"v", n.value}, {"l", n.left}, {"r", n.right}});
        return arr;
    }
    static Tree load(const nlohmann::json& arr) {
        Tree t;
        for (const auto& j : arr) {
            TreeNode n;
            n.feature = j["f"];
            n.threshold = j["t"];
            n.value = j["v"];
            n.left = j["l"];
            n.right = j["r"];
            t.nodes.push_back(n);
        }
        return t;
    }
};

struct TreeGrower {
    const Matrix& X;
    const std::vector<double>& target;   // labels or gradients
    const std::vector<double>* hessian;  // optional, Newton leaf values
    std::size_t max_depth;
    std::size_t min_samples_leaf;
    std::size_t features_per_split;  // 0 = all
    Rng* rng;                        // only used when subsampling features

    Tree grown;

    int build(std::vector<std::size_t> idx, std::size_t depth) {
        double sum = 0, sum2 = 0;
        for (auto i : idx) {
            sum += target[i];
            sum2 += target[i] * target[i];
        }
        double mean = sum / static_cast<double>(idx.size());

        TreeNode leaf;
        leaf.feature = -1;
        if (hessian) {
            double h = 0;
            for (auto i : idx) h += (*hessian)[i];
            leaf.value = h > 1e-12 ? sum / h : 0.0;
        } else {
            leaf.value = mean;
        }
        double sse = sum2 - sum * mean;
        if (depth >= max_depth || idx.size() < 2 * min_samples_leaf || sse < 1e-12) {
            grown.nodes.push_back(leaf);
            return static_cast<int>(grown.nodes.size() - 1);
        }

        std::size_t dim = X[0].size();
        std::vector<std::size_t> feats(dim);
        std::iota(feats.begin(), feats.end(), 0);
        if (features_per_split > 0 && features_per_split < dim && rng) {
            rng->shuffle(feats);
            feats.resize(features_per_split);
            std::sort(feats.begin(), feats.end());
        }

        int best_f = -1;
        double best_thr = 0, best_score = sse;
        for (auto f : feats) {
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return X[a][f] < X[b][f]; });
            double ls = 0, ls2 = 0;
            std::size_t nl = 0;
            double rs = sum, rs2 = sum2;
            for (std::size_t p = 0; p + 1 < idx.size(); ++p) {
                double v = target[idx[p]];
                ls += v; ls2 += v * v; rs -= v; rs2 -= v * v;
                ++nl;
                if (X[idx[p]][f] == X[idx[p + 1]][f]) continue;
                std::size_t nr = idx.size() - nl;
                if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
                double score = (ls2 - ls * ls / nl) + (rs2 - rs * rs / nr);
                if (score < best_score - 1e-12) {
                    best_score = score;
                    best_f = static_cast<int>(f);
                    best_thr = 0.5 * (X[idx[p]][f] + X[idx[p + 1]][f]);
                }
            }
        }
        if (best_f < 0) {
            grown.nodes.push_back(leaf);
            return static_cast<int>(grown.nodes.size() - 1);
        }

        std::vector<std::size_t> li, ri;
        for (auto i : idx) (X[i][best_f] <= best_thr ? li : ri).push_back(i);
        if (li.empty() || ri.empty()) {
            grown.nodes.push_back(leaf);
            return static_cast<int>(grown.nodes.size() - 1);
        }
        TreeNode split;
        split.feature = best_f;
        split.threshold = best_thr;
        grown.nodes.push_back(split);
        int self = static_cast<int>(grown.nodes.size() - 1);
        grown.nodes[self].left = build(std::move(li), depth + 1);
        grown.nodes[self].right = build(std::move(ri), depth + 1);
        return self;
    }
};

inline Tree grow_tree(const Matrix& X, const std::vector<double>& target,
                      const std::vector<std::size_t>& rows, std::size_t max_depth,
                      std::size_t min_samples_leaf, std::size_t features_per_split, Rng* rng,
                      const std::vector<double>* hessian = nullptr) {
    TreeGrower g{X, target, hessian, max_depth, min_samples_leaf, features_per_split, rng, {}};
    g.build(rows, 0);
    return g.grown;
}

struct Dtree : Base {
    Tree tree;
    double score_row(const Vector& x) const override { return tree.predict(x); }
    nlohmann::json save() const override { return {{"tree", tree.save()}}; }
    static std::shared_ptr<Dtree> load(const nlohmann::json& j) {
        auto m = std::make_shared<Dtree>();
        m->tree = Tree::load(j["tree"]);
        return m;
    }
};

struct Forest : Base {
    std::vector<Tree> trees;
    double score_row(const Vector& x) const override {
        double s = 0;
        for (const auto& t : trees) s += t.predict(x);
        return s / static_cast<double>(trees.size());
    }
    nlohmann::json save() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : trees) arr.push_back(t.save());
        return {{"trees", arr}};
    }
    static std::shared_ptr<Forest> load(const nlohmann::json& j) {
        auto m = std::make_shared<Forest>();
        for (const auto& t : j["trees"]) m->trees.push_back(Tree::load(t));
        return m;
    }
};

struct GBoost : Base {
    double f0 = 0.0;
    double eta = 0.1;
    std::vector<Tree> trees;
    double raw(const Vector& x) const {
        double f = f0;
        for (const auto& t : trees) f += eta * t.predict(x);
        return f;
    }
    double score_row(const Vector& x) const override { return sigmoid(raw(x)); }
    nlohmann::json save() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : trees) arr.push_back(t.save());
        return {{"f0", f0}, {"eta", eta}, {"trees", arr}};
    }
    static std::shared_ptr<GBoost> load(const nlohmann::json& j) {
        auto m = std::make_shared<GBoost>();
        m->f0 = j["f0"];
        m->eta = j["eta"];
        for (const auto& t : j["trees"]) m->trees.push_back(Tree::load(t));
        return m;
    }
};

// --- one-hidden-layer perceptron -------------------------------------------

struct Mlp : Base {
    std::size_t in = 0, hidden = 0;
    Vector params;  // [W1 (hidden x in), b1, w2, b2]

    static std::size_t param_count(std::size_t in, std::size_t hidden) {
        return hidden * in + hidden + hidden + 1;
    }
    double forward(const Vector& x) const {
        const double* W1 = params.data();
        const double* b1 = W1 + hidden * in;
        const double* w2 = b1 + hidden;
        double b2 = *(w2 + hidden);
        double z = b2;
        for (std::size_t h = 0; h < hidden; ++h) {
            double a = b1[h];
            for (std::size_t j = 0; j < in; ++j) a += W1[h * in + j] * x[j];
            if (a > 0) z += w2[h] * a;
        }
        return z;
    }
    double score_row(const Vector& x) const override { return sigmoid(forward(x)); }
    nlohmann::json save() const override { return {{"in", in}, {"hidden", hidden}, {"params", params}}; }
    static std::shared_ptr<Mlp> load(const nlohmann::json& j) {
        auto m = std::make_shared<Mlp>();
        m->in = j["in"];
        m->hidden = j["hidden"];
        m->params = j["params"].get<Vector>();
        return m;
    }
};

// mean cross-entropy over the batch and its gradient w.r.t. the flat params;
// shared between training and the finite-difference check
inline double mlp_loss_grad(const Vector& params, std::size_t in, std::size_t hidden,
                            const Matrix& X, const std::vector<int>& y,
                            const std::vector<std::size_t>& batch, Vector* grad) {
    const double* W1 = params.data();
    const double* b1 = W1 + hidden * in;
    const double* w2 = b1 + hidden;
    double b2 = *(w2 + hidden);
    if (grad) grad->assign(params.size(), 0.0);
    double* gW1 = grad ? grad->data() : nullptr;
    double* gb1 = grad ? gW1 + hidden * in : nullptr;
    double* gw2 = grad ? gb1 + hidden : nullptr;
    double loss = 0.0;
    Vector act(hidden);
    for (auto i : batch) {
        const Vector& x = X[i];
        double z = b2;
        for (std::size_t h = 0; h < hidden; ++h) {
            double a = b1[h];
            for (std::size_t j = 0; j < in; ++j) a += W1[h * in + j] * x[j];
            act[h] = a > 0 ? a : 0.0;
            z += w2[h] * act[h];
        }
        double p = sigmoid(z);
        loss += log_loss(p, y[i]);
        if (!grad) continue;
        double dz = (p - y[i]) / static_cast<double>(batch.size());
        (*grad)[params.size() - 1] += dz;  // b2
        for (std::size_t h = 0; h < hidden; ++h) {
            gw2[h] += dz * act[h];
            if (act[h] > 0) {
                double dh = dz * w2[h];
                gb1[h] += dh;
                for (std::size_t j = 0; j < in; ++j) gW1[h * in + j] += dh * x[j];
            }
        }
    }
    return loss / static_cast<double>(batch.size());
}

}  // namespace models

struct TrainedModel {
    ModelSpec spec;
    std::size_t input_dim = 0;
    std::size_t epochs_run = 0;
    double final_loss = 0.0;
    std::vector<double> loss_trace;  // per boosting round, gboost only
    std::shared_ptr<const models::Base> impl;

    double score_row(const Vector& x) const {
        if (x.size() != input_dim) throw std::invalid_argument("predict: dimension mismatch");
        return std::clamp(impl->score_row(x), 0.0, 1.0);
    }
    std::vector<double> score(const Matrix& X) const {
        std::vector<double> out;
        out.reserve(X.size());
        for (const auto& x : X) out.push_back(score_row(x));
        return out;
    }
    std::vector<int> predict(const Matrix& X) const {
        std::vector<int> out;
        out.reserve(X.size());
        for (const auto& x : X) out.push_back(score_row(x) >= 0.5 ? 1 : 0);
        return out;
    }
};

namespace detail {

inline void check_training_input(const ModelSpec& spec, const Matrix& X, const std::vector<int>& y) {
    if (X.empty() || X.size() != y.size()) throw std::invalid_argument("train: |X| must equal |y| >= 1");
    for (const auto& row : X) {
        if (row.size() != X[0].size()) throw std::invalid_argument("train: ragged feature matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("train: non-finite feature value");
    }
    bool has0 = false, has1 = false;
    for (int l : y) {
        if (l == 0) has0 = true;
        else if (l == 1) has1 = true;
        else throw std::invalid_argument("train: labels must be 0/1");
    }
    bool needs_both = spec.kind != ModelKind::knn && spec.kind != ModelKind::gnb &&
                      spec.kind != ModelKind::dtree && spec.kind != ModelKind::rf;
    if (needs_both && (!has0 || !has1))
        throw std::invalid_argument("train: single-class input for " + model_kind_name(spec.kind));
}

}  // namespace detail

inline TrainedModel train(const ModelSpec& spec, const Matrix& X, const std::vector<int>& y) {
    spec.validate();
    detail::check_training_input(spec, X, y);
    using namespace models;
    std::size_t n = X.size(), dim = X[0].size();
    TrainedModel tm;
    tm.spec = spec;
    tm.input_dim = dim;

    switch (spec.kind) {
        case ModelKind::lr: {
            auto m = std::make_shared<Linear>();
            m->w.assign(dim, 0.0);
            double loss = 0;
            for (std::size_t e = 0; e < spec.epochs; ++e) {
                Vector gw(dim, 0.0);
                double gb = 0;
                loss = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double p = sigmoid(m->margin(X[i]));
                    loss += log_loss(p, y[i]);
                    double r = (p - y[i]) / static_cast<double>(n);
                    for (std::size_t j = 0; j < dim; ++j) gw[j] += r * X[i][j];
                    gb += r;
                }
                for (std::size_t j = 0; j < dim; ++j)
                    m->w[j] -= spec.learning_rate * (gw[j] + spec.lambda * m->w[j]);
                m->b -= spec.learning_rate * gb;
            }
            tm.epochs_run = spec.epochs;
            tm.final_loss = loss / n;
            tm.impl = m;
            break;
        }
        case ModelKind::sgd_linear: {
            auto m = std::make_shared<Linear>();
            m->w.assign(dim, 0.0);
            Rng rng(spec.seed);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t e = 0; e < spec.epochs; ++e) {
                rng.shuffle(order);
                for (auto i : order) {
                    double p = sigmoid(m->margin(X[i]));
                    double r = p - y[i];
                    for (std::size_t j = 0; j < dim; ++j)
                        m->w[j] -= spec.learning_rate * (r * X[i][j] + spec.lambda * m->w[j]);
                    m->b -= spec.learning_rate * r;
                }
            }
            double loss = 0;
            for (std::size_t i = 0; i < n; ++i) loss += log_loss(sigmoid(m->margin(X[i])), y[i]);
            tm.epochs_run = spec.epochs;
            tm.final_loss = loss / n;
            tm.impl = m;
            break;
        }
        case ModelKind::svm_linear: {
            // Pegasos schedule on the hinge loss
            auto m = std::make_shared<Linear>();
            m->w.assign(dim, 0.0);
            Rng rng(spec.seed);
            double lambda = spec.lambda > 0 ? spec.lambda : 1e-4;
            std::size_t T = spec.epochs * n;
            for (std::size_t t = 1; t <= T; ++t) {
                std::size_t i = rng.below(n);
                double eta = 1.0 / (lambda * static_cast<double>(t));
                double yy = y[i] ? 1.0 : -1.0;
                double margin = yy * m->margin(X[i]);
                for (std::size_t j = 0; j < dim; ++j) m->w[j] *= (1.0 - eta * lambda);
                if (margin < 1.0) {
                    for (std::size_t j = 0; j < dim; ++j) m->w[j] += eta * yy * X[i][j];
                    m->b += eta * yy;
                }
            }
            std::vector<double> margins(n);
            double loss = 0;
            for (std::size_t i = 0; i < n; ++i) {
                margins[i] = m->margin(X[i]);
                loss += std::max(0.0, 1.0 - (y[i] ? 1.0 : -1.0) * margins[i]);
            }
            m->use_platt = true;
            m->platt = fit_platt(margins, y);
            tm.epochs_run = spec.epochs;
            tm.final_loss = loss / n;
            tm.impl = m;
            break;
        }
        case ModelKind::ridge: {
            auto m = std::make_shared<Linear>();
            Eigen::MatrixXd A(n, dim + 1);
            Eigen::VectorXd t(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < dim; ++j) A(i, j) = X[i][j];
                A(i, dim) = 1.0;
                t(i) = y[i] ? 1.0 : -1.0;
            }
            Eigen::MatrixXd G = A.transpose() * A;
            double lambda = spec.lambda > 0 ? spec.lambda : 1e-6;
            for (std::size_t j = 0; j < dim; ++j) G(j, j) += lambda;  // intercept unpenalized
            Eigen::VectorXd sol = G.ldlt().solve(A.transpose() * t);
            m->w.resize(dim);
            for (std::size_t j = 0; j < dim; ++j) m->w[j] = sol(j);
            m->b = sol(dim);
            std::vector<double> margins(n);
            double loss = 0;
            for (std::size_t i = 0; i < n; ++i) {
                margins[i] = m->margin(X[i]);
                double r = margins[i] - t(i);
                loss += r * r;
            }
            m->use_platt = true;
            m->platt = fit_platt(margins, y);
            tm.epochs_run = 1;
            tm.final_loss = loss / n;
            tm.impl = m;
            break;
        }
        case ModelKind::gnb: {
            auto m = std::make_shared<Gnb>();
            std::size_t n0 = 0, n1 = 0;
            m->mean0.assign(dim, 0.0);
            m->mean1.assign(dim, 0.0);
            m->var0.assign(dim, 0.0);
            m->var1.assign(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                auto& mu = y[i] ? m->mean1 : m->mean0;
                for (std::size_t j = 0; j < dim; ++j) mu[j] += X[i][j];
                (y[i] ? n1 : n0)++;
            }
            if (n0 == 0 || n1 == 0) {
                // constant-label degenerate case: predict that label everywhere
                auto lin = std::make_shared<Linear>();
                lin->w.assign(dim, 0.0);
                lin->b = n1 > 0 ? 50.0 : -50.0;
                tm.impl = lin;
                tm.epochs_run = 1;
                break;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                m->mean0[j] /= n0;
                m->mean1[j] /= n1;
            }
            for (std::size_t i = 0; i < n; ++i) {
                auto& mu = y[i] ? m->mean1 : m->mean0;
                auto& var = y[i] ? m->var1 : m->var0;
                for (std::size_t j = 0; j < dim; ++j) {
                    double c = X[i][j] - mu[j];
                    var[j] += c * c;
                }
            }
            for (std::size_t j = 0; j < dim; ++j) {
                m->var0[j] = std::max(1e-9, m->var0[j] / n0);
                m->var1[j] = std::max(1e-9, m->var1[j] / n1);
            }
            m->log_prior0 = std::log(static_cast<double>(n0) / n);
            m->log_prior1 = std::log(static_cast<double>(n1) / n);
            tm.epochs_run = 1;
            tm.impl = m;
            break;
        }
        case ModelKind::knn: {
            if (spec.k_neighbors > n) throw std::invalid_argument("knn: k_neighbors > n");
            auto m = std::make_shared<Knn>();
            m->X = X;
            m->y = y;
            m->k = spec.k_neighbors;
            tm.epochs_run = 1;
            tm.impl = m;
            break;
        }
        case ModelKind::dtree: {
            auto m = std::make_shared<Dtree>();
            std::vector<double> target(y.begin(), y.end());
            std::vector<std::size_t> rows(n);
            std::iota(rows.begin(), rows.end(), 0);
            m->tree = grow_tree(X, target, rows, spec.max_depth, spec.min_samples_leaf, 0, nullptr);
            tm.epochs_run = 1;
            tm.impl = m;
            break;
        }
        case ModelKind::rf: {
            auto m = std::make_shared<Forest>();
            std::vector<double> target(y.begin(), y.end());
            std::size_t fps = spec.feature_subsample > 0
                                  ? std::max<std::size_t>(1, static_cast<std::size_t>(spec.feature_subsample * dim))
                                  : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dim))));
            for (std::size_t t = 0; t < spec.n_trees; ++t) {
                Rng rng(spec.seed ^ (0x9e37ULL * (t + 1)));
                std::vector<std::size_t> rows(n);
                if (spec.n_trees == 1) {
                    std::iota(rows.begin(), rows.end(), 0);  // single tree memorizes
                } else {
                    for (auto& r : rows) r = rng.below(n);
                }
                m->trees.push_back(grow_tree(X, target, rows, spec.max_depth, spec.min_samples_leaf,
                                             spec.n_trees == 1 ? 0 : fps, &rng));
            }
            tm.epochs_run = spec.n_trees;
            tm.impl = m;
            break;
        }
        case ModelKind::gboost: {
            auto m = std::make_shared<GBoost>();
            m->eta = spec.shrinkage;
            double pbar = 0;
            for (int l : y) pbar += l;
            pbar = std::clamp(pbar / n, 1e-12, 1.0 - 1e-12);
            m->f0 = std::log(pbar / (1.0 - pbar));
            std::vector<double> f(n, m->f0), grad(n), hess(n);
            Rng rng(spec.seed);
            double loss = 0;
            for (std::size_t round = 0; round < spec.n_trees; ++round) {
                loss = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double p = sigmoid(f[i]);
                    grad[i] = y[i] - p;       // negative gradient of log-loss
                    hess[i] = p * (1.0 - p);
                    loss += log_loss(p, y[i]);
                }
                tm.loss_trace.push_back(loss / n);
                std::vector<std::size_t> rows;
                if (spec.row_subsample < 1.0) {
                    for (std::size_t i = 0; i < n; ++i)
                        if (rng.uniform() < spec.row_subsample) rows.push_back(i);
                    if (rows.empty()) rows.push_back(rng.below(n));
                } else {
                    rows.resize(n);
                    std::iota(rows.begin(), rows.end(), 0);
                }
                Tree t = grow_tree(X, grad, rows, spec.max_depth, spec.min_samples_leaf, 0, nullptr, &hess);
                for (std::size_t i = 0; i < n; ++i) f[i] += m->eta * t.predict(X[i]);
                m->trees.push_back(std::move(t));
            }
            tm.epochs_run = spec.n_trees;
            tm.final_loss = loss / n;
            tm.impl = m;
            break;
        }
        case ModelKind::mlp: {
            auto m = std::make_shared<Mlp>();
            m->in = dim;
            m->hidden = spec.hidden;
            m->params.resize(Mlp::param_count(dim, spec.hidden));
            Rng rng(spec.seed);
            double scale = std::sqrt(2.0 / static_cast<double>(dim));
            for (std::size_t i = 0; i < spec.hidden * dim; ++i) m->params[i] = rng.normal() * scale;
            for (std::size_t i = spec.hidden * dim; i < m->params.size(); ++i)
                m->params[i] = rng.normal() * 0.01;

            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            Vector grad;
            double loss = 0;
            for (std::size_t e = 0; e < spec.epochs; ++e) {
                rng.shuffle(order);
                for (std::size_t start = 0; start < n; start += spec.batch_size) {
                    std::vector<std::size_t> batch(
                        order.begin() + start,
                        order.begin() + std::min(n, start + spec.batch_size));
                    loss = mlp_loss_grad(m->params, dim, spec.hidden, X, y, batch, &grad);
                    for (std::size_t j = 0; j < m->params.size(); ++j)
                        m->params[j] -= spec.learning_rate * grad[j];
                }
            }
            tm.epochs_run = spec.epochs;
            tm.final_loss = loss;
            tm.impl = m;
            break;
        }
    }
    return tm;
}

// --- model bundle IO -------------------------------------------------------

inline nlohmann::json model_to_json(const TrainedModel& tm) {
    nlohmann::json j;
    j["kind"] = model_kind_name(tm.spec.kind);
    j["input_dim"] = tm.input_dim;
    j["epochs_run"] = tm.epochs_run;
    j["final_loss"] = tm.final_loss;
    j["hyperparams"] = {{"learning_rate", tm.spec.learning_rate}, {"epochs", tm.spec.epochs},
                        {"lambda", tm.spec.lambda}, {"k_neighbors", tm.spec.k_neighbors},
                        {"max_depth", tm.spec.max_depth}, {"min_samples_leaf", tm.spec.min_samples_leaf},
                        {"n_trees", tm.spec.n_trees}, {"feature_subsample", tm.spec.feature_subsample},
                        {"row_subsample", tm.spec.row_subsample}, {"shrinkage", tm.spec.shrinkage},
                        {"hidden", tm.spec.hidden}, {"batch_size", tm.spec.batch_size},
                        {"seed", tm.spec.seed}};
    j["params"] = tm.impl->save();
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    TrainedModel tm;
    tm.spec.kind = model_kind_from_name(j["kind"]);
    const auto& h = j["hyperparams"];
    tm.spec.learning_rate = h["learning_rate"];
    tm.spec.epochs = h["epochs"];
    tm.spec.lambda = h["lambda"];
    tm.spec.k_neighbors = h["k_neighbors"];
    tm.spec.max_depth = h["max_depth"];
    tm.spec.min_samples_leaf = h["min_samples_leaf"];
    tm.spec.n_trees = h["n_trees"];
    tm.spec.feature_subsample = h["feature_subsample"];
    tm.spec.row_subsample = h["row_subsample"];
    tm.spec.shrinkage = h["shrinkage"];
    tm.spec.hidden = h["hidden"];
    tm.spec.batch_size = h["batch_size"];
    tm.spec.seed = h["seed"];
    tm.input_dim = j["input_dim"];
    tm.epochs_run = j["epochs_run"];
    tm.final_loss = j["final_loss"];
    const auto& p = j["params"];
    using namespace models;
    switch (tm.spec.kind) {
        case ModelKind::lr:
        case ModelKind::ridge:
        case ModelKind::svm_linear:
        case ModelKind::sgd_linear: tm.impl = Linear::load(p); break;
        case ModelKind::gnb:
            tm.impl = p.contains("mean0") ? std::static_pointer_cast<const Base>(Gnb::load(p))
                                          : std::static_pointer_cast<const Base>(Linear::load(p));
            break;
        case ModelKind::knn: tm.impl = Knn::load(p); break;
        case ModelKind::dtree: tm.impl = Dtree::load(p); break;
        case ModelKind::rf: tm.impl = Forest::load(p); break;
        case ModelKind::gboost: tm.impl = GBoost::load(p); break;
        case ModelKind::mlp: tm.impl = Mlp::load(p); break;
    }
    return tm;
}

}  // namespace negcamp
