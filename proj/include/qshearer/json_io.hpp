#pragma once

#include <string>

#include <json.hpp>

#include "qshearer/hypergraph.hpp"

namespace qshearer {

// Hypergraph file format:
//   {"n_qudits": N, "edges": [[int,...],...], "meta": {...}}
// Loaders reject malformed input with a field-identifying message.
nlohmann::json hypergraph_to_json(const InteractionHypergraph& h, nlohmann::json meta = {});
InteractionHypergraph hypergraph_from_json(const nlohmann::json& j);

InteractionHypergraph load_hypergraph(const std::string& path);
void save_hypergraph(const InteractionHypergraph& h, const std::string& path, nlohmann::json meta = {});

// All floating-point output carries 17 significant digits so values
// round-trip bit-exactly through result files.
std::string format_double(double x);

}  // namespace qshearer
