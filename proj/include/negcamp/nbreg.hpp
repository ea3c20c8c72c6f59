#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "negcamp/types.hpp"

namespace negcamp {

struct DesignMatrix {
    std::vector<std::string> names;  // column names, including "intercept"
    Matrix rows;
    std::vector<long> response;  // non-negative counts
};

struct CoefEstimate {
    std::string name;
    double coef = 0, std_err = 0, z = 0, p = 1;
};

struct RegressionResult {
    std::vector<CoefEstimate> coefficients;
    double alpha = 0;  // NB2 dispersion, variance = mu + alpha*mu^2
    double log_likelihood = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> ll_trace;  // per outer iteration
};

inline std::string significance_stars(double p) {
    if (p <= 0.01) return "***";
    if (p <= 0.05) return "**";
    if (p <= 0.1) return "*";
    return "";
}

namespace nb {

inline double nb2_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& beta, double alpha) {
    Eigen::VectorXd eta = X * beta;
    double inv_a = 1.0 / alpha;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double mu = std::exp(std::clamp(eta(i), -30.0, 30.0));
        double t = 1.0 + alpha * mu;
        ll += std::lgamma(y(i) + inv_a) - std::lgamma(inv_a) - std::lgamma(y(i) + 1.0) +
              y(i) * std::log(alpha * mu / t) - inv_a * std::log(t);
    }
    return ll;
}

// IRLS for beta at fixed alpha, with step halving so the likelihood never
// decreases
inline Eigen::VectorXd irls_beta(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                                 Eigen::VectorXd beta, std::size_t max_iter, double tol,
                                 bool* converged = nullptr) {
    if (converged) *converged = false;
    double ll = nb2_loglik(X, y, beta, alpha);
    for (std::size_t it = 0; it < max_iter; ++it) {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu = eta.unaryExpr([](double e) { return std::exp(std::clamp(e, -30.0, 30.0)); });
        Eigen::VectorXd w = mu.array() / (1.0 + alpha * mu.array());
        Eigen::VectorXd z = eta.array() + (y.array() - mu.array()) / mu.array();
        Eigen::MatrixXd XtW = X.transpose() * w.asDiagonal();
        Eigen::VectorXd beta_new = (XtW * X).ldlt().solve(XtW * z);

        // step halving on likelihood decreases
        double step = 1.0;
        Eigen::VectorXd cand = beta_new;
        double ll_new = nb2_loglik(X, y, cand, alpha);
        int halvings = 0;
        while (ll_new < ll - 1e-12 && halvings < 30) {
            step *= 0.5;
            cand = beta + step * (beta_new - beta);
            ll_new = nb2_loglik(X, y, cand, alpha);
            ++halvings;
        }
        double delta = (cand - beta).cwiseAbs().maxCoeff();
        beta = cand;
        ll = ll_new;
        if (delta < tol) {
            if (converged) *converged = true;
            break;
        }
    }
    return beta;
}

}  // namespace nb

// NB2 regression with log link. Beta by IRLS at fixed alpha; alpha by
// golden-section maximization of the profile log-likelihood on a log-scale
// bracket [1e-6, 1e3]. Wald normal p-values.
inline RegressionResult fit_nb2(const DesignMatrix& d, std::size_t max_iter = 100, double tol = 1e-8) {
    std::size_t n = d.rows.size();
    if (n == 0) throw std::invalid_argument("fit_nb2: empty design");
    std::size_t p = d.rows[0].size();
    if (p != d.names.size()) throw std::invalid_argument("fit_nb2: names do not match columns");
    if (n <= p) throw std::invalid_argument("fit_nb2: need more rows than columns");
    if (d.response.size() != n) throw std::invalid_argument("fit_nb2: response length mismatch");

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) X(i, j) = d.rows[i][j];
        if (d.response[i] < 0) throw std::invalid_argument("fit_nb2: negative count in response");
        y(i) = static_cast<double>(d.response[i]);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < p)
        throw std::invalid_argument("fit_nb2: design matrix is rank deficient");

    const double ALPHA_LO = 1e-6, ALPHA_HI = 1e3;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    {
        // start from the log-mean intercept when one exists
        double ybar = std::max(1e-8, y.mean());
        for (std::size_t j = 0; j < p; ++j)
            if (d.names[j] == "intercept") beta(j) = std::log(ybar);
    }

    auto profile = [&](double log_alpha, Eigen::VectorXd& beta_out, bool* conv) {
        double a = std::exp(log_alpha);
        beta_out = nb::irls_beta(X, y, a, beta, max_iter, tol, conv);
        return nb::nb2_loglik(X, y, beta_out, a);
    };

    RegressionResult res;
    double lo = std::log(ALPHA_LO), hi = std::log(ALPHA_HI);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    Eigen::VectorXd b1, b2;
    bool c1 = false, c2 = false;
    double f1 = profile(x1, b1, &c1);
    double f2 = profile(x2, b2, &c2);
    res.ll_trace.push_back(std::max(f1, f2));
    std::size_t outer = 2;
    double prev_alpha = std::exp(0.5 * (x1 + x2));
    while (hi - lo > 1e-9 && outer < 200) {
        if (f1 >= f2) {
            hi = x2; x2 = x1; f2 = f1; b2 = b1; c2 = c1;
            x1 = hi - gr * (hi - lo);
            f1 = profile(x1, b1, &c1);
        } else {
            lo = x1; x1 = x2; f1 = f2; b1 = b2; c1 = c2;
            x2 = lo + gr * (hi - lo);
            f2 = profile(x2, b2, &c2);
        }
        ++outer;
        double best_ll = std::max(f1, f2);
        if (!res.ll_trace.empty() && best_ll < res.ll_trace.back()) best_ll = res.ll_trace.back();
        res.ll_trace.push_back(best_ll);
        double cur_alpha = std::exp(f1 >= f2 ? x1 : x2);
        double rel = std::abs(cur_alpha - prev_alpha) / std::max(cur_alpha, 1e-300);
        prev_alpha = cur_alpha;
        if (rel < tol && hi - lo < 1e-6) break;
    }
    double log_alpha = f1 >= f2 ? x1 : x2;
    res.alpha = std::exp(log_alpha);
    bool beta_conv = false;
    beta = nb::irls_beta(X, y, res.alpha, f1 >= f2 ? b1 : b2, max_iter, tol, &beta_conv);
    res.log_likelihood = nb::nb2_loglik(X, y, beta, res.alpha);
    res.iterations = outer;
    res.converged = beta_conv;

    // observed information at the optimum (beta block, alpha fixed)
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd mu = eta.unaryExpr([](double e) { return std::exp(std::clamp(e, -30.0, 30.0)); });
    Eigen::VectorXd w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = 1.0 + res.alpha * mu(i);
        w(i) = mu(i) * (1.0 + res.alpha * y(i)) / (t * t);
    }
    Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    Eigen::MatrixXd Hinv = H.inverse();

    for (std::size_t j = 0; j < p; ++j) {
        CoefEstimate ce;
        ce.name = d.names[j];
        ce.coef = beta(j);
        double v = Hinv(j, j);
        ce.std_err = v > 0 ? std::sqrt(v) : 0.0;
        ce.z = ce.std_err > 0 ? ce.coef / ce.std_err : 0.0;
        ce.p = std::erfc(std::abs(ce.z) / std::sqrt(2.0));
        res.coefficients.push_back(ce);
    }
    return res;
}

}  // namespace negcamp
