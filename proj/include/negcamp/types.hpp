#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace negcamp {

using Vector = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;

struct DocumentMeta {
    std::optional<double> retweet_count;
    std::optional<double> like_count;
    std::optional<double> follower_count;
    std::optional<double> following_count;
    std::optional<std::int64_t> account_created_at;  // epoch seconds
    std::optional<std::int64_t> published_at;        // epoch seconds
    std::optional<bool> is_candidate;
};

struct Document {
    std::string id;
    std::optional<std::string> text;
    std::optional<int> label;  // 0/1, absent for unlabeled pools
    std::optional<Vector> embedding;
    std::map<std::string, double> features;
    DocumentMeta meta;
};

class Dataset {
public:
    Dataset() = default;

    void add(Document doc) {
        if (doc.embedding) {
            if (dim_) {
                if (doc.embedding->size() != *dim_)
                    throw std::invalid_argument("embedding dimension mismatch for id '" + doc.id + "'");
            } else {
                dim_ = doc.embedding->size();
            }
        }
        records_.push_back(std::move(doc));
    }

    const std::vector<Document>& records() const { return records_; }
    std::vector<Document>& records() { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const Document& operator[](std::size_t i) const { return records_[i]; }
    Document& operator[](std::size_t i) { return records_[i]; }

    std::optional<std::size_t> dim() const { return dim_; }
    void set_dim(std::size_t d) { dim_ = d; }

    // recompute dim after bulk mutation of embeddings
    void refresh_dim() {
        dim_.reset();
        for (const auto& r : records_) {
            if (r.embedding) {
                if (dim_ && r.embedding->size() != *dim_)
                    throw std::invalid_argument("embedding dimension mismatch for id '" + r.id + "'");
                if (!dim_) dim_ = r.embedding->size();
            }
        }
    }

private:
    std::vector<Document> records_;
    std::optional<std::size_t> dim_;
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double ratio = 0.85;
};

}  // namespace negcamp
