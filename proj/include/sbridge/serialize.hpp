#pragma once

#include <string>

#include "sbridge/drift.hpp"
#include "sbridge/sinkhorn.hpp"

namespace sbridge {

// JSON schemas:
//   PotentialPair: {"eps", "f", "g", "iterations", "marginal_error", "converged"}
//   BridgeModel:   {"eps", "atoms", "potential"}
std::string to_json(const PotentialPair& pair);
PotentialPair potential_pair_from_json(const std::string& text);

std::string to_json(const BridgeModel& model);
BridgeModel bridge_model_from_json(const std::string& text);

std::string load_text(const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace sbridge
