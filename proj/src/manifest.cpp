#include "qshearer/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qshearer {

namespace {
std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
}  // namespace

RunManifest RunManifest::make(const std::string& command, nlohmann::json parameters) {
    RunManifest m;
    m.command = command;
    m.parameters = std::move(parameters);
    m.tool_version = QSHEARER_VERSION;
    m.timestamp = utc_now_iso8601();
    return m;
}

void RunManifest::add_input(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64_file(path)));
    input_digests[path] = buf;
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"command", command},
                          {"parameters", parameters},
                          {"tool_version", tool_version},
                          {"timestamp", timestamp},
                          {"input_digests", input_digests}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input for digest: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

}  // namespace qshearer
