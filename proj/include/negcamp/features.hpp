#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "negcamp/textprep.hpp"
#include "negcamp/types.hpp"

namespace negcamp {

// Per-class top-k n-grams (n = 1..3) plus the class-exclusive sets.
struct NgramVocab {
    std::size_t k_per_class = 0;
    // top[class][n-1] and exclusive[class][n-1], n-grams joined with ' '
    std::array<std::array<std::set<std::string>, 3>, 2> top;
    std::array<std::array<std::set<std::string>, 3>, 2> exclusive;
};

namespace detail {

inline std::vector<std::string> ngrams(const std::vector<std::string>& tokens, std::size_t n) {
    std::vector<std::string> out;
    if (tokens.size() < n) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (std::size_t j = 1; j < n; ++j) g += " " + tokens[i + j];
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace detail

// tokens_per_doc must align with train.records(); ties break lexicographically
inline NgramVocab build_ngram_vocab(const Dataset& train,
                                    const std::vector<std::vector<std::string>>& tokens_per_doc,
                                    std::size_t k_per_class) {
    if (train.empty()) throw std::invalid_argument("build_ngram_vocab: empty training corpus");
    if (tokens_per_doc.size() != train.size())
        throw std::invalid_argument("build_ngram_vocab: token list does not align with dataset");
    NgramVocab vocab;
    vocab.k_per_class = k_per_class;
    if (k_per_class == 0) return vocab;

    for (int cls = 0; cls <= 1; ++cls) {
        for (std::size_t n = 1; n <= 3; ++n) {
            std::map<std::string, std::size_t> counts;
            for (std::size_t i = 0; i < train.size(); ++i) {
                if (!train[i].label || *train[i].label != cls) continue;
                for (auto& g : detail::ngrams(tokens_per_doc[i], n)) ++counts[g];
            }
            std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
            });
            auto& dst = vocab.top[cls][n - 1];
            for (std::size_t i = 0; i < ranked.size() && i < k_per_class; ++i)
                dst.insert(ranked[i].first);
        }
    }
    for (int cls = 0; cls <= 1; ++cls)
        for (std::size_t n = 0; n < 3; ++n) {
            const auto& own = vocab.top[cls][n];
            const auto& other = vocab.top[1 - cls][n];
            for (const auto& g : own)
                if (!other.count(g)) vocab.exclusive[cls][n].insert(g);
        }
    return vocab;
}

struct FeatureConfig {
    std::int64_t election_date = 1624060800;  // config default; epoch seconds
};

namespace detail {

inline std::size_t count_names(const std::vector<std::string>& tokens,
                               const std::vector<std::vector<std::string>>& names) {
    std::size_t hits = 0;
    for (const auto& name : names) {
        if (name.empty() || name.size() > tokens.size()) continue;
        for (std::size_t i = 0; i + name.size() <= tokens.size(); ++i) {
            bool match = true;
            for (std::size_t j = 0; j < name.size(); ++j)
                if (tokens[i + j] != name[j]) { match = false; break; }
            if (match) ++hits;
        }
    }
    return hits;
}

}  // namespace detail

inline std::map<std::string, double> extract_features(const Document& doc,
                                                      const std::vector<std::string>& tokens,
                                                      const PrepResources& res,
                                                      const NgramVocab& vocab,
                                                      const FeatureConfig& cfg = {}) {
    std::map<std::string, double> f;

    // text family
    f["text.retweet_count"] = doc.meta.retweet_count.value_or(0.0);
    f["text.like_count"] = doc.meta.like_count.value_or(0.0);
    std::size_t mentions = 0, links = 0, hashtags = 0;
    if (doc.text) {
        for (auto& t : detail::whitespace_split(*doc.text)) {
            if (detail::looks_like_mention(t)) ++mentions;
            else if (detail::looks_like_url(t)) ++links;
            else if (!t.empty() && t[0] == '#') ++hashtags;
        }
    }
    f["text.mentions_count"] = static_cast<double>(mentions);
    f["text.links_count"] = static_cast<double>(links);
    f["text.hashtags_count"] = static_cast<double>(hashtags);
    std::size_t insults = 0;
    for (const auto& t : tokens)
        if (res.insult_lexicon.count(t)) ++insults;
    f["text.insult_count"] = static_cast<double>(insults);
    f["text.person_count"] = static_cast<double>(detail::count_names(tokens, res.person_lexicon));
    f["text.org_count"] = static_cast<double>(detail::count_names(tokens, res.org_lexicon));
    if (auto it = doc.features.find("sentiment"); it != doc.features.end())
        f["text.sentiment"] = it->second;  // externally supplied, passed through

    // metatext family: hit counts against the vocab sets
    for (int cls = 0; cls <= 1; ++cls)
        for (std::size_t n = 1; n <= 3; ++n) {
            std::size_t top_hits = 0, excl_hits = 0;
            for (auto& g : detail::ngrams(tokens, n)) {
                if (vocab.top[cls][n - 1].count(g)) ++top_hits;
                if (vocab.exclusive[cls][n - 1].count(g)) ++excl_hits;
            }
            std::string base = "meta.c" + std::to_string(cls) + "_n" + std::to_string(n);
            f[base + "_top"] = static_cast<double>(top_hits);
            f[base + "_excl"] = static_cast<double>(excl_hits);
        }

    // user family
    f["user.follower_count"] = doc.meta.follower_count.value_or(0.0);
    f["user.following_count"] = doc.meta.following_count.value_or(0.0);

    // time family
    double account_age_days = 0.0, tweet_age_days = 0.0;
    if (doc.meta.account_created_at)
        account_age_days = static_cast<double>(cfg.election_date - *doc.meta.account_created_at) / 86400.0;
    if (doc.meta.published_at)
        tweet_age_days = static_cast<double>(cfg.election_date - *doc.meta.published_at) / 86400.0;
    f["time.account_age_days"] = account_age_days;
    f["time.tweet_age_days"] = tweet_age_days;
    int quarter = 0;
    if (doc.meta.published_at) {
        std::int64_t sec_of_day = ((*doc.meta.published_at % 86400) + 86400) % 86400;
        quarter = static_cast<int>(sec_of_day / 21600);
    }
    for (int q = 0; q < 4; ++q)
        f["time.quarter_" + std::to_string(q)] = (q == quarter) ? 1.0 : 0.0;

    return f;
}

}  // namespace negcamp
