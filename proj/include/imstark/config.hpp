#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace imstark {

// Flat key=value configuration. Lines are `key = value`, `#` starts a
// comment, blank lines are skipped. Recognized key families:
//   lattice.L  lattice.J  lattice.F  lattice.kind
//   grid.*     (experiment parameter grids and scalars)
//   time.*     (time windows and sample counts)
//   tol.classify  tol.bisect
//   out.dir
// Anything else is a configuration error, so typos fail loudly.
class ConfigMap {
  public:
    ConfigMap() = default;

    static ConfigMap from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        ConfigMap cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            cfg.parse_line(line, path + ":" + std::to_string(lineno));
        }
        return cfg;
    }

    // A single `key=value` token, as given on the command line.
    void set_pair(const std::string& token) {
        const size_t eq = token.find('=');
        if (eq == std::string::npos) throw ConfigError("override is not key=value: " + token);
        set(trim(token.substr(0, eq)), trim(token.substr(eq + 1)));
    }

    void set(const std::string& key, const std::string& value) {
        if (key.empty()) throw ConfigError("empty configuration key");
        if (!key_allowed(key)) throw ConfigError("unknown configuration key: " + key);
        kv_[key] = value;
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        return to_double(it->second, key);
    }

    int get_int(const std::string& key, int dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        try {
            size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw ConfigError("");
            return v;
        } catch (...) {
            throw ConfigError("value of " + key + " is not an integer: " + it->second);
        }
    }

    // Comma-separated list of reals.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(to_double(item, key));
        }
        if (out.empty()) throw ConfigError("value of " + key + " is an empty list");
        return out;
    }

    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        std::vector<int> out;
        for (double v : get_list(key, {})) {
            const int i = static_cast<int>(v);
            if (static_cast<double>(i) != v) throw ConfigError(key + " must list integers");
            out.push_back(i);
        }
        return out;
    }

    // The lattice block, with library defaults for missing keys.
    LatticeConfig lattice(const LatticeConfig& base = {}) const {
        LatticeConfig c = base;
        c.L = get_int("lattice.L", c.L);
        c.J = get_double("lattice.J", c.J);
        c.F = get_double("lattice.F", c.F);
        const std::string kind = get_string("lattice.kind", "");
        if (!kind.empty()) {
            if (kind == "imaginary")
                c.kind = PotentialKind::ImaginaryStark;
            else if (kind == "real")
                c.kind = PotentialKind::RealStark;
            else
                throw ConfigError("lattice.kind must be 'imaginary' or 'real', got: " + kind);
        }
        try {
            c.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid lattice block: ") + e.what());
        }
        return c;
    }

    // Canonical one-line rendering (sorted keys) — hashed into run metadata.
    std::string canonical() const {
        std::string s;
        for (const auto& [k, v] : kv_) {
            s += k;
            s += '=';
            s += v;
            s += ';';
        }
        return s;
    }

    const std::map<std::string, std::string>& items() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;

    void parse_line(const std::string& raw, const std::string& where) {
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) return;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("missing '=' at " + where);
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    static bool key_allowed(const std::string& key) {
        static const char* exact[] = {"lattice.L", "lattice.J", "lattice.F", "lattice.kind",
                                      "out.dir", "tol.classify", "tol.bisect"};
        for (const char* k : exact)
            if (key == k) return true;
        return key.rfind("grid.", 0) == 0 || key.rfind("time.", 0) == 0;
    }

    static std::string trim(const std::string& s) {
        size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static double to_double(const std::string& s, const std::string& key) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw ConfigError("value of " + key + " is not a number: " + s);
        return v;
    }
};

}  // namespace imstark
