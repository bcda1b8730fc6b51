#pragma once

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dp/error.hpp"
#include "dp/version.hpp"

namespace dp {

// FNV-1a over the exact input bytes; identifies a run configuration.
inline std::string fnv1a_hex(const std::string& data) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

// Every CLI run writes one of these next to its outputs. Output files are
// deterministic functions of the inputs; the manifest itself carries the
// only timestamp.
struct RunManifest {
    std::string command_line;
    std::string config_hash;
    std::vector<std::string> outputs;
    nlohmann::json extras = nlohmann::json::object();

    nlohmann::json to_json() const {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        nlohmann::json j = {{"command_line", command_line},
                            {"config_hash", config_hash},
                            {"versions", {{"dp_hierarchy", DP_VERSION}}},
                            {"timestamp_unix_ms",
                             std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
                            {"outputs", outputs}};
        for (auto it = extras.begin(); it != extras.end(); ++it) j[it.key()] = it.value();
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw ConfigError("cannot write manifest: " + path);
        f << to_json().dump(2) << "\n";
    }
};

} // namespace dp
