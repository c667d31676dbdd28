#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tripwave/errors.hpp"

namespace tripwave {

// Plain-text key/value configuration: one `key = value` per line, `#` starts
// a comment, whitespace around tokens is ignored. Insertion order is kept so
// files can be rewritten deterministically.
class Config {
public:
    static Config parse_string(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected `key = value`");
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
            cfg.set(key, value);
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str());
    }

    bool has(const std::string& key) const { return index_.count(key) != 0; }

    const std::string& get_string(const std::string& key) const {
        auto it = index_.find(key);
        if (it == index_.end()) throw ConfigError("missing key `" + key + "`");
        return entries_[it->second].second;
    }

    std::string get_string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    double get_number(const std::string& key) const {
        return parse_number(key, get_string(key));
    }

    double get_number_or(const std::string& key, double fallback) const {
        return has(key) ? get_number(key) : fallback;
    }

    void set(const std::string& key, const std::string& value) {
        auto it = index_.find(key);
        if (it != index_.end()) {
            entries_[it->second].second = value;
        } else {
            index_[key] = entries_.size();
            entries_.emplace_back(key, value);
        }
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_text() const {
        std::ostringstream out;
        for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
        return out.str();
    }

private:
    static std::string trim(const std::string& s) {
        size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    // Decimal literals only (optional sign, digits, fraction, exponent).
    static double parse_number(const std::string& key, const std::string& v) {
        for (char c : v) {
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
                  c == '.' || c == 'e' || c == 'E'))
                throw ConfigError("key `" + key + "`: `" + v + "` is not a decimal literal");
        }
        char* end = nullptr;
        double x = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size())
            throw ConfigError("key `" + key + "`: `" + v + "` is not a decimal literal");
        return x;
    }

    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, size_t> index_;
};

} // namespace tripwave
