#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace acfront {

/// Flat `key = value` config with `#` comments. Values are strings; typed
/// getters parse on demand. Later assignments win, so flag overrides can be
/// layered on top of a file.
class Config {
  public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
        return it->second;
    }
    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }
    double get_double(const std::string& key, double dflt) const {
        return has(key) ? get_double(key) : dflt;
    }

    long long get_int(const std::string& key) const {
        const std::string s = get_string(key);
        std::size_t pos = 0;
        long long v;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key '" + key + "' is not an integer: " + s);
        }
        if (pos != s.size())
            throw std::invalid_argument("config: key '" + key + "' is not an integer: " + s);
        return v;
    }
    long long get_int(const std::string& key, long long dflt) const {
        return has(key) ? get_int(key) : dflt;
    }

    std::uint64_t get_seed(const std::string& key, std::uint64_t dflt) const {
        if (!has(key)) return dflt;
        return static_cast<std::uint64_t>(std::stoull(get_string(key)));
    }

    const std::map<std::string, std::string>& entries() const { return kv_; }

    static Config parse(std::istream& in) {
        Config cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const std::size_t eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                            " is not 'key = value'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
            cfg.set(key, value);
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open " + path);
        return parse(in);
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }
    static double parse_double(const std::string& key, const std::string& s) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
        }
        if (pos != s.size())
            throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
        return v;
    }

    std::map<std::string, std::string> kv_;
};

}  // namespace acfront
