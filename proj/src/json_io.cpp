#include "qshearer/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qshearer {

nlohmann::json hypergraph_to_json(const InteractionHypergraph& h, nlohmann::json meta) {
    nlohmann::json j;
    j["n_qudits"] = h.n_qudits;
    j["edges"] = h.edges;
    j["meta"] = meta.is_null() ? nlohmann::json::object() : meta;
    return j;
}

InteractionHypergraph hypergraph_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("hypergraph json: top level must be an object");
    if (!j.contains("n_qudits") || !j["n_qudits"].is_number_integer())
        throw std::invalid_argument("hypergraph json: field 'n_qudits' missing or not an integer");
    if (!j.contains("edges") || !j["edges"].is_array())
        throw std::invalid_argument("hypergraph json: field 'edges' missing or not an array");
    const int n = j["n_qudits"].get<int>();
    std::vector<std::vector<int>> edges;
    const auto& arr = j["edges"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_array())
            throw std::invalid_argument("hypergraph json: edges[" + std::to_string(i) + "] is not an array");
        std::vector<int> e;
        for (std::size_t k = 0; k < arr[i].size(); ++k) {
            if (!arr[i][k].is_number_integer())
                throw std::invalid_argument("hypergraph json: edges[" + std::to_string(i) + "][" +
                                            std::to_string(k) + "] is not an integer");
            e.push_back(arr[i][k].get<int>());
        }
        edges.push_back(std::move(e));
    }
    // create() re-validates ranges and reports the offending edge/field.
    return InteractionHypergraph::create(n, std::move(edges));
}

InteractionHypergraph load_hypergraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open hypergraph file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    try {
        return hypergraph_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_hypergraph(const InteractionHypergraph& h, const std::string& path, nlohmann::json meta) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write hypergraph file: " + path);
    out << hypergraph_to_json(h, std::move(meta)).dump(2) << "\n";
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace qshearer
