#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "version.hpp"

namespace imstark {

// One CSV payload: named columns of reals. Complex quantities are stored
// as paired re_*/im_* columns by the producer.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    Table() = default;
    Table(std::string n, std::vector<std::string> cols) : name(std::move(n)), columns(std::move(cols)) {}

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size()) throw InvariantFailure("row width does not match table header");
        rows.push_back(std::move(row));
    }
};

// 17 significant digits: lossless double round-trip.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string render_csv(const Table& t) {
    std::string out;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_value(row[c]);
        }
        out += '\n';
    }
    return out;
}

// Everything one experiment run produces.
struct ResultBundle {
    std::string experiment;
    std::string config_hash;
    std::string timestamp;
    std::string version = version_string;
    std::vector<Table> tables;
    nlohmann::json summary = nlohmann::json::object();
    std::map<std::string, bool> invariants;  // check name -> pass

    bool all_invariants_pass() const {
        for (const auto& [k, ok] : invariants)
            if (!ok) return false;
        return true;
    }

    const Table& table(const std::string& name) const {
        for (const auto& t : tables)
            if (t.name == name) return t;
        throw InvariantFailure("bundle has no table named " + name);
    }
};

// FNV-1a, rendered as 16 hex digits; stable across platforms.
inline std::string fnv1a_hash(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());
    out << body;
    if (!out) throw IoFailure("write failed: " + path.string());
}

// Serializes the bundle into `dir`: one CSV per table plus summary.json.
// CSV bodies depend only on the computed data (determinism); the volatile
// run metadata stays in summary.json.
inline void write_bundle(const ResultBundle& b, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create output directory: " + dir.string());
    for (const auto& t : b.tables) write_text_file(dir / (t.name + ".csv"), render_csv(t));
    nlohmann::json meta;
    meta["experiment"] = b.experiment;
    meta["config_hash"] = b.config_hash;
    meta["timestamp"] = b.timestamp;
    meta["version"] = b.version;
    meta["tables"] = nlohmann::json::array();
    for (const auto& t : b.tables) meta["tables"].push_back(t.name + ".csv");
    meta["summary"] = b.summary;
    meta["invariants"] = nlohmann::json::object();
    for (const auto& [k, ok] : b.invariants) meta["invariants"][k] = ok ? "pass" : "FAIL";
    meta["invariants_pass"] = b.all_invariants_pass();
    write_text_file(dir / "summary.json", meta.dump(2) + "\n");
}

}  // namespace imstark
