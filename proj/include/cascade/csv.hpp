#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

/// Shortest round-trip decimal representation; locale-independent, so
/// output files are byte-deterministic.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw error("double formatting failed");
    return std::string(buf, ptr);
}

inline constexpr const char* kCsvHeader =
    "sweep_param,sweep_value,engine,observable,mean,stderr,n_traj,seed";

struct CsvRow {
    std::string sweep_param = "none";
    double sweep_value = 0.0;
    std::string engine;
    std::string observable;
    double mean = 0.0;
    double stderr_ = 0.0;
    long n_traj = 0;
    std::uint64_t seed = 0;
};

inline std::string render_csv(const std::vector<CsvRow>& rows) {
    std::string out(kCsvHeader);
    out.push_back('\n');
    for (const auto& r : rows) {
        out += r.sweep_param;
        out.push_back(',');
        out += format_double(r.sweep_value);
        out.push_back(',');
        out += r.engine;
        out.push_back(',');
        out += r.observable;
        out.push_back(',');
        out += format_double(r.mean);
        out.push_back(',');
        out += format_double(r.stderr_);
        out.push_back(',');
        out += std::to_string(r.n_traj);
        out.push_back(',');
        out += std::to_string(r.seed);
        out.push_back('\n');
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw error("write failed for '" + path + "'");
}

inline void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    write_file(path, render_csv(rows));
}

} // namespace cascade
