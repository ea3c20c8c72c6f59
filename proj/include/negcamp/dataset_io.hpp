#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "negcamp/types.hpp"

namespace negcamp {

namespace detail {

inline Document document_from_json(const nlohmann::json& j, std::size_t line_no) {
    Document d;
    if (!j.contains("id") || !j["id"].is_string())
        throw std::runtime_error("line " + std::to_string(line_no) + ": missing required string field 'id'");
    d.id = j["id"].get<std::string>();
    if (j.contains("text") && !j["text"].is_null()) d.text = j["text"].get<std::string>();
    if (j.contains("label") && !j["label"].is_null()) {
        int lbl = j["label"].get<int>();
        if (lbl != 0 && lbl != 1)
            throw std::runtime_error("line " + std::to_string(line_no) + ": label must be 0 or 1");
        d.label = lbl;
    }
    if (j.contains("embedding") && !j["embedding"].is_null())
        d.embedding = j["embedding"].get<Vector>();
    if (j.contains("features") && !j["features"].is_null())
        d.features = j["features"].get<std::map<std::string, double>>();
    if (j.contains("meta") && j["meta"].is_object()) {
        const auto& m = j["meta"];
        auto num = [&](const char* key) -> std::optional<double> {
            if (m.contains(key) && m[key].is_number()) return m[key].get<double>();
            return std::nullopt;
        };
        d.meta.retweet_count = num("retweet_count");
        d.meta.like_count = num("like_count");
        d.meta.follower_count = num("follower_count");
        d.meta.following_count = num("following_count");
        if (m.contains("account_created_at") && m["account_created_at"].is_number())
            d.meta.account_created_at = m["account_created_at"].get<std::int64_t>();
        if (m.contains("published_at") && m["published_at"].is_number())
            d.meta.published_at = m["published_at"].get<std::int64_t>();
        if (m.contains("is_candidate") && m["is_candidate"].is_boolean())
            d.meta.is_candidate = m["is_candidate"].get<bool>();
    }
    return d;
}

inline nlohmann::json document_to_json(const Document& d) {
    nlohmann::json j;
    j["id"] = d.id;
    if (d.text) j["text"] = *d.text;
    if (d.label) j["label"] = *d.label;
    if (d.embedding) j["embedding"] = *d.embedding;
    if (!d.features.empty()) j["features"] = d.features;
    nlohmann::json m = nlohmann::json::object();
    if (d.meta.retweet_count) m["retweet_count"] = *d.meta.retweet_count;
    if (d.meta.like_count) m["like_count"] = *d.meta.like_count;
    if (d.meta.follower_count) m["follower_count"] = *d.meta.follower_count;
    if (d.meta.following_count) m["following_count"] = *d.meta.following_count;
    if (d.meta.account_created_at) m["account_created_at"] = *d.meta.account_created_at;
    if (d.meta.published_at) m["published_at"] = *d.meta.published_at;
    if (d.meta.is_candidate) m["is_candidate"] = *d.meta.is_candidate;
    if (!m.empty()) j["meta"] = m;
    return j;
}

}  // namespace detail

inline Dataset load_jsonl(std::istream& in, const std::string& name = "<stream>") {
    Dataset ds;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(name + ": line " + std::to_string(line_no) + ": malformed record: " + e.what());
        }
        Document d = detail::document_from_json(j, line_no);
        if (!seen.insert(d.id).second)
            throw std::runtime_error(name + ": line " + std::to_string(line_no) + ": duplicate id '" + d.id + "'");
        try {
            ds.add(std::move(d));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(name + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return ds;
}

inline Dataset load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return load_jsonl(in, path);
}

inline void save_jsonl(const Dataset& ds, std::ostream& out) {
    for (const auto& r : ds.records()) out << detail::document_to_json(r).dump() << "\n";
}

inline void save_jsonl(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    save_jsonl(ds, out);
}

}  // namespace negcamp
