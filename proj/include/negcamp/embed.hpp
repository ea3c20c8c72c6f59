#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include "negcamp/types.hpp"

namespace negcamp {

struct WordEmbeddings {
    std::unordered_map<std::string, Vector> vectors;
    std::size_t dim = 0;
};

// GloVe-style text format: token followed by dim numbers per line.
inline WordEmbeddings load_word_vectors(std::istream& in, const std::string& name = "<stream>",
                                        std::ostream* warn = nullptr) {
    WordEmbeddings we;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string token;
        ss >> token;
        Vector v;
        double x;
        while (ss >> x) v.push_back(x);
        if (we.dim == 0) {
            if (v.empty())
                throw std::runtime_error(name + ": line " + std::to_string(line_no) + ": no vector components");
            we.dim = v.size();
        } else if (v.size() != we.dim) {
            throw std::runtime_error(name + ": line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(we.dim) + " components, got " + std::to_string(v.size()));
        }
        if (we.vectors.count(token) && warn)
            *warn << "warning: duplicate token '" << token << "' at line " << line_no << ", last wins\n";
        we.vectors[token] = std::move(v);
    }
    if (we.vectors.empty()) throw std::runtime_error(name + ": empty lexicon");
    return we;
}

inline WordEmbeddings load_word_vectors(const std::string& path, std::ostream* warn = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word-vector file: " + path);
    return load_word_vectors(in, path, warn);
}

// Mean of in-lexicon token vectors; absent when nothing is in the lexicon.
inline std::optional<Vector> doc_embedding(const std::vector<std::string>& tokens, const WordEmbeddings& we) {
    Vector sum(we.dim, 0.0);
    std::size_t hits = 0;
    for (const auto& t : tokens) {
        auto it = we.vectors.find(t);
        if (it == we.vectors.end()) continue;
        for (std::size_t k = 0; k < we.dim; ++k) sum[k] += it->second[k];
        ++hits;
    }
    if (hits == 0) return std::nullopt;
    for (auto& x : sum) x /= static_cast<double>(hits);
    return sum;
}

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double cosine(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine: zero-norm input");
    return dot(a, b) / (na * nb);
}

// Per-column z-score with population std; zero-variance columns are only
// mean-centered.
struct Scaler {
    Vector mean;
    Vector stddev;  // 0 marks a pass-through column

    Vector apply_row(const Vector& row) const {
        if (row.size() != mean.size()) throw std::invalid_argument("scaler: dimension mismatch");
        Vector out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            double c = row[j] - mean[j];
            out[j] = stddev[j] > 0.0 ? c / stddev[j] : c;
        }
        return out;
    }
};

inline Scaler standardize_fit(const Matrix& train) {
    if (train.empty()) throw std::invalid_argument("standardize_fit: empty matrix");
    std::size_t cols = train[0].size();
    Scaler s;
    s.mean.assign(cols, 0.0);
    s.stddev.assign(cols, 0.0);
    for (const auto& row : train)
        for (std::size_t j = 0; j < cols; ++j) s.mean[j] += row[j];
    for (auto& m : s.mean) m /= static_cast<double>(train.size());
    for (const auto& row : train)
        for (std::size_t j = 0; j < cols; ++j) {
            double c = row[j] - s.mean[j];
            s.stddev[j] += c * c;
        }
    for (auto& v : s.stddev) v = std::sqrt(v / static_cast<double>(train.size()));
    return s;
}

inline Matrix standardize_apply(const Scaler& s, const Matrix& m) {
    Matrix out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(s.apply_row(row));
    return out;
}

}  // namespace negcamp
