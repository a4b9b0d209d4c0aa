#include "nvlab/manifest.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nvlab {

void ExperimentManifest::set(const std::string& key, const std::string& value) {
    for (auto& kv : parameters)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    parameters.emplace_back(key, value);
}

std::string ExperimentManifest::serialize() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& kv : parameters) params[kv.first] = kv.second;
    j["parameters"] = params;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["started_at"] = started_at;
    return j.dump(2) + "\n";
}

ExperimentManifest ExperimentManifest::parse(const std::string& text) {
    const auto j = nlohmann::ordered_json::parse(text);
    ExperimentManifest m;
    m.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items())
        m.parameters.emplace_back(k, v.get<std::string>());
    m.seed = j.at("seed").get<uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    return m;
}

void ExperimentManifest::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("manifest: cannot open " + path);
    const std::string s = serialize();
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
}

ExperimentManifest ExperimentManifest::read(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("manifest: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::vector<std::string> ExperimentManifest::to_args() const {
    std::vector<std::string> args{command};
    for (const auto& kv : parameters) {
        args.push_back("--" + kv.first);
        if (!kv.second.empty()) args.push_back(kv.second);
    }
    return args;
}

namespace {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double SplitRng::uniform(uint64_t stream, uint64_t counter) const {
    const uint64_t h = splitmix64(splitmix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL)) ^ counter);
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

std::pair<double, double> SplitRng::disk_point(uint64_t stream, uint64_t counter, double radius) const {
    // rejection-free: sqrt-radius times angle
    const double r = radius * std::sqrt(uniform(stream, 2 * counter));
    const double th = 2.0 * M_PI * uniform(stream, 2 * counter + 1);
    return {r * std::cos(th), r * std::sin(th)};
}

std::string now_iso8601_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace nvlab
