#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace qshearer {

// Provenance block embedded in every emitted result file. Replaying the
// recorded command and parameters reproduces the result bit-exactly for
// deterministic operations.
struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::string tool_version;
    std::string timestamp;                                   // ISO 8601 UTC
    nlohmann::json input_digests = nlohmann::json::object();  // path -> fnv1a64 hex

    static RunManifest make(const std::string& command, nlohmann::json parameters);
    void add_input(const std::string& path);
    nlohmann::json to_json() const;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace qshearer
