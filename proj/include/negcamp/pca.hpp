#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "negcamp/types.hpp"

namespace negcamp {

struct PcaModel {
    Vector mean;
    Matrix components;           // k rows, orthonormal
    Vector explained_variance;   // fractions, non-increasing
};

// Principal axes via eigendecomposition of the covariance. Sign convention:
// the first nonzero coordinate of each component is positive.
inline PcaModel pca_fit(const Matrix& X, std::size_t k) {
    if (X.size() < 2) throw std::invalid_argument("pca_fit: need at least 2 rows");
    std::size_t n = X.size(), dim = X[0].size();
    if (k > std::min(n - 1, dim)) throw std::invalid_argument("pca_fit: k too large");

    PcaModel m;
    m.mean.assign(dim, 0.0);
    for (const auto& row : X)
        for (std::size_t j = 0; j < dim; ++j) m.mean[j] += row[j];
    for (auto& v : m.mean) v /= static_cast<double>(n);

    Eigen::MatrixXd C(n, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) C(i, j) = X[i][j] - m.mean[j];
    Eigen::MatrixXd cov = (C.transpose() * C) / static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigendecomposition failed");
    Eigen::VectorXd evals = es.eigenvalues();  // ascending
    Eigen::MatrixXd evecs = es.eigenvectors();

    double total = 0.0;
    for (Eigen::Index i = 0; i < evals.size(); ++i) total += std::max(0.0, evals(i));
    if (total <= 0.0) throw std::invalid_argument("pca_fit: degenerate all-identical data");

    for (std::size_t c = 0; c < k; ++c) {
        Eigen::Index src = evals.size() - 1 - static_cast<Eigen::Index>(c);
        Vector comp(dim);
        for (std::size_t j = 0; j < dim; ++j) comp[j] = evecs(j, src);
        for (std::size_t j = 0; j < dim; ++j) {
            if (std::abs(comp[j]) > 1e-12) {
                if (comp[j] < 0)
                    for (auto& v : comp) v = -v;
                break;
            }
        }
        m.components.push_back(std::move(comp));
        m.explained_variance.push_back(std::max(0.0, evals(src)) / total);
    }
    return m;
}

inline Matrix pca_transform(const PcaModel& m, const Matrix& X) {
    Matrix out;
    out.reserve(X.size());
    for (const auto& row : X) {
        if (row.size() != m.mean.size()) throw std::invalid_argument("pca_transform: dimension mismatch");
        Vector proj(m.components.size(), 0.0);
        for (std::size_t c = 0; c < m.components.size(); ++c)
            for (std::size_t j = 0; j < row.size(); ++j)
                proj[c] += (row[j] - m.mean[j]) * m.components[c][j];
        out.push_back(std::move(proj));
    }
    return out;
}

struct ScatterPoint {
    std::string id;
    double pc1 = 0, pc2 = 0;
    int gold_label = 0;
    std::string tag;  // partition or cluster
};

inline void write_scatter_csv(const std::vector<ScatterPoint>& pts, std::ostream& out) {
    out << "id,pc1,pc2,gold_label,tag\n";
    char buf[64];
    for (const auto& p : pts) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g", p.pc1, p.pc2);
        out << p.id << "," << buf << "," << p.gold_label << "," << p.tag << "\n";
    }
}

// self-contained SVG scatter, two colors keyed on the gold label
inline void write_scatter_svg(const std::vector<ScatterPoint>& pts, std::ostream& out,
                              const std::string& color_pos = "purple",
                              const std::string& color_neg = "red") {
    double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    if (!pts.empty()) {
        min_x = max_x = pts[0].pc1;
        min_y = max_y = pts[0].pc2;
        for (const auto& p : pts) {
            min_x = std::min(min_x, p.pc1);
            max_x = std::max(max_x, p.pc1);
            min_y = std::min(min_y, p.pc2);
            max_y = std::max(max_y, p.pc2);
        }
    }
    double w = 640, h = 480, pad = 20;
    double sx = (max_x > min_x) ? (w - 2 * pad) / (max_x - min_x) : 1.0;
    double sy = (max_y > min_y) ? (h - 2 * pad) / (max_y - min_y) : 1.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    char buf[128];
    for (const auto& p : pts) {
        double cx = pad + (p.pc1 - min_x) * sx;
        double cy = h - pad - (p.pc2 - min_y) * sy;
        std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\" fill-opacity=\"0.6\"/>",
                      cx, cy, p.gold_label == 1 ? color_neg.c_str() : color_pos.c_str());
        out << buf << "\n";
    }
    out << "</svg>\n";
}

}  // namespace negcamp
