#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "negcamp/types.hpp"

namespace negcamp {

enum class PrepLevel { L1 = 1, L2 = 2, L3 = 3 };

struct PrepResources {
    std::set<std::string> stopwords;
    std::map<std::string, std::string> emoji_map;   // emoji sequence -> text token(s)
    std::set<std::string> insult_lexicon;
    std::vector<std::vector<std::string>> person_lexicon;  // multi-token names
    std::vector<std::vector<std::string>> org_lexicon;
};

namespace uni {

// minimal UTF-8 codepoint iteration; invalid bytes pass through as-is
inline std::vector<std::uint32_t> decode(const std::string& s) {
    std::vector<std::uint32_t> cps;
    for (std::size_t i = 0; i < s.size();) {
        unsigned char c = s[i];
        std::uint32_t cp = c;
        std::size_t len = 1;
        if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; len = 2; }
        else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; len = 3; }
        else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; len = 4; }
        if (i + len > s.size()) len = 1, cp = c;
        for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (s[i + k] & 0x3F);
        cps.push_back(cp);
        i += len;
    }
    return cps;
}

inline void encode(std::uint32_t cp, std::string& out) {
    if (cp < 0x80) out += static_cast<char>(cp);
    else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

inline std::string encode(const std::vector<std::uint32_t>& cps) {
    std::string s;
    for (auto cp : cps) encode(cp, s);
    return s;
}

inline bool is_emoji(std::uint32_t cp) {
    return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
           (cp >= 0x2B00 && cp <= 0x2BFF) || (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0x200D;
}

inline bool is_digit(std::uint32_t cp) {
    return (cp >= '0' && cp <= '9') || (cp >= 0x0660 && cp <= 0x0669) || (cp >= 0x06F0 && cp <= 0x06F9);
}

inline bool is_junk(std::uint32_t cp) {
    if (cp < 0x80) return !std::isalnum(static_cast<int>(cp));
    // general punctuation, Arabic punctuation, guillemets, ZWNJ and friends
    return (cp >= 0x2000 && cp <= 0x206F) || cp == 0x060C || cp == 0x061B || cp == 0x061F ||
           (cp >= 0x066A && cp <= 0x066D) || cp == 0x00AB || cp == 0x00BB || cp == 0x00B7 ||
           cp == 0x0640 /* tatweel */;
}

}  // namespace uni

namespace detail {

inline bool looks_like_url(const std::string& t) {
    return t.rfind("http://", 0) == 0 || t.rfind("https://", 0) == 0 || t.rfind("www.", 0) == 0 ||
           t.find("://") != std::string::npos || t.rfind("t.co/", 0) == 0;
}

inline bool looks_like_mention(const std::string& t) { return !t.empty() && t[0] == '@'; }

inline std::vector<std::string> whitespace_split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

// collapse character runs of length >= 3 down to a single character
inline std::vector<std::uint32_t> collapse_runs(const std::vector<std::uint32_t>& cps) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < cps.size();) {
        std::size_t j = i;
        while (j < cps.size() && cps[j] == cps[i]) ++j;
        std::size_t run = j - i;
        std::size_t keep = run >= 3 ? 1 : run;
        for (std::size_t k = 0; k < keep; ++k) out.push_back(cps[i]);
        i = j;
    }
    return out;
}

}  // namespace detail

inline std::vector<std::string> preprocess(const std::string& text, PrepLevel level,
                                           const PrepResources& res) {
    std::vector<std::string> raw = detail::whitespace_split(text);

    if (level == PrepLevel::L3) {
        std::erase_if(raw, [](const std::string& t) {
            return detail::looks_like_url(t) || detail::looks_like_mention(t);
        });
    }

    // emoji mapping happens before any stripping so multi-codepoint keys match
    std::vector<std::string> mapped;
    for (auto& t : raw) {
        std::string replaced = t;
        for (const auto& [emoji, word] : res.emoji_map) {
            std::size_t pos;
            while ((pos = replaced.find(emoji)) != std::string::npos)
                replaced = replaced.substr(0, pos) + " " + word + " " + replaced.substr(pos + emoji.size());
        }
        for (auto& sub : detail::whitespace_split(replaced)) mapped.push_back(std::move(sub));
    }

    std::vector<std::string> tokens;
    for (auto& t : mapped) {
        // hashtags become separate words
        std::string flat = t;
        if (!flat.empty() && flat[0] == '#') flat.erase(0, 1);
        std::replace(flat.begin(), flat.end(), '_', ' ');
        for (auto& part : detail::whitespace_split(flat)) {
            auto cps = uni::decode(part);
            std::vector<std::uint32_t> kept;
            bool has_digit = false;
            for (auto cp : cps) {
                if (uni::is_emoji(cp)) continue;  // unmapped emoji dropped
                if (uni::is_digit(cp)) { has_digit = true; break; }
                if (uni::is_junk(cp)) continue;
                if (cp < 0x80) cp = static_cast<std::uint32_t>(std::tolower(static_cast<int>(cp)));
                kept.push_back(cp);
            }
            if (has_digit || kept.size() < 3) continue;
            kept = detail::collapse_runs(kept);
            if (kept.size() < 3) continue;
            std::string token = uni::encode(kept);
            if (level != PrepLevel::L1 && res.stopwords.count(token)) continue;
            tokens.push_back(std::move(token));
        }
    }
    return tokens;
}

// true when the joined post-preprocessing text is shorter than 3 characters
inline bool document_removable(const std::vector<std::string>& tokens) {
    std::size_t n = 0;
    for (const auto& t : tokens) n += uni::decode(t).size();
    return n < 3;
}

// --- resource file loaders -------------------------------------------------

inline std::set<std::string> load_token_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open resource file: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) out.insert(line);
    }
    return out;
}

inline std::vector<std::vector<std::string>> load_name_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open resource file: " + path);
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = detail::whitespace_split(line);
        if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
}

inline std::map<std::string, std::string> load_emoji_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open resource file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected two tab-separated columns");
        out[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return out;
}

}  // namespace negcamp
