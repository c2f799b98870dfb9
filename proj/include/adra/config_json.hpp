#pragma once

#include <string>

#include "adra/config.hpp"
#include "json.hpp"

namespace adra {

// Schema:
//   {"n_devices": 20, "frame_len": 10, "age_threshold": 40,
//    "policy": {"fixed": 0.1} | "adaptive"}
// Parsing does not validate ranges; call validate_config afterwards.
ProtocolConfig config_from_json(const nlohmann::json& j);
ProtocolConfig parse_config(const std::string& text);

/// Echo form, including the derived lambda and epsilon.
nlohmann::json config_to_json(const ProtocolConfig& config);

nlohmann::json policy_to_json(const AccessPolicy& policy);

}  // namespace adra
