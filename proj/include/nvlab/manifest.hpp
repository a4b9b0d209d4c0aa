#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Experiment manifests: every output artifact is accompanied by a record of
// the command, its ordered parameters, the seed, and the tool version, so a
// run can be replayed byte-identically (quadrature/algebra commands) or to
// stated tolerances (solver commands).
namespace nvlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;  // ordered
    uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string started_at;  // ISO-8601 UTC

    void set(const std::string& key, const std::string& value);
    std::string serialize() const;  // JSON
    static ExperimentManifest parse(const std::string& json_text);
    void write(const std::string& path) const;
    static ExperimentManifest read(const std::string& path);
    // argv-style reconstruction for replay
    std::vector<std::string> to_args() const;
};

// counter-based splittable RNG: one seed per command, deterministic streams
// for parallel sweeps
struct SplitRng {
    uint64_t seed = 0;
    // uniform double in [0,1) at stream position (stream, counter)
    double uniform(uint64_t stream, uint64_t counter) const;
    // uniform in [-1,1]^2 as a complex point
    std::pair<double, double> disk_point(uint64_t stream, uint64_t counter, double radius) const;
};

std::string now_iso8601_utc();

}  // namespace nvlab
