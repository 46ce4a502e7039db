#pragma once

/**
 * @file report.hpp
 * @brief Result persistence: CSV with %.17g round-trip formatting, ordered
 *        JSON summaries, and the run manifest. Data files are bit-identical
 *        for identical config and seed; wall-clock times live only in the
 *        manifest so they never break that guarantee.
 */

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <fastlim/errors.hpp>
#include <fastlim/version.hpp>

namespace fastlim {

using ordered_json = nlohmann::ordered_json;

// %.17g guarantees double -> text -> double round trips exactly.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw invalid_input("output: cannot create directory " + dir + ": " + ec.message());
    // probe writability now, so a bad target fails before any computation
    const auto probe = std::filesystem::path(dir) / ".write_probe";
    {
        std::ofstream f(probe);
        if (!f) throw invalid_input("output: directory not writable: " + dir);
    }
    std::filesystem::remove(probe, ec);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw invalid_input("output: cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw internal_error("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_g17(values[i]);
        }
        out_ << '\n';
    }

    void mixed_row(const std::vector<std::string>& values) {
        if (values.size() != columns_) throw internal_error("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << values[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

inline void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw invalid_input("output: cannot open " + path);
    out << j.dump(2) << '\n';
}

// The manifest carries everything needed to reproduce the run plus the only
// nondeterministic values (timings), kept out of the data files.
inline void write_manifest(const std::string& dir, const std::string& config_text,
                           std::uint64_t seed, const std::string& command,
                           const std::vector<std::pair<std::string, double>>& wall_seconds) {
    ordered_json j;
    j["tool"] = "fastlim";
    j["version"] = version_string;
    j["command"] = command;
    j["config_hash"] = hex64(fnv1a64(config_text));
    j["seed"] = seed;
    ordered_json times = ordered_json::object();
    for (const auto& [name, secs] : wall_seconds) times[name] = secs;
    j["wall_seconds"] = times;
    write_json((std::filesystem::path(dir) / "manifest.json").string(), j);
}

}  // namespace fastlim
