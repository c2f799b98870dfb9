#include "adra/config.hpp"

#include <cmath>
#include <cstdio>

#include "adra/config_json.hpp"

namespace adra {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDevicesOutOfRange: return "DevicesOutOfRange";
    case ErrorCode::kFrameLengthOutOfRange: return "FrameLengthOutOfRange";
    case ErrorCode::kThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::kDegenerateChain: return "DegenerateChain";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kAllDegenerate: return "AllDegenerate";
    case ErrorCode::kSizeExceeded: return "SizeExceeded";
    case ErrorCode::kInvalidSimConfig: return "InvalidSimConfig";
  }
  return "Unknown";
}

std::string policy_label(const AccessPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "fixed:%.12g", fixed->p);
    return buf;
  }
  return "adaptive";
}

std::vector<ConfigViolation> check_config(const ProtocolConfig& config) {
  std::vector<ConfigViolation> out;
  if (config.n_devices < 1) {
    out.push_back({ErrorCode::kDevicesOutOfRange,
                   "n_devices must be >= 1, got " + std::to_string(config.n_devices)});
  }
  if (config.frame_len < 1) {
    out.push_back({ErrorCode::kFrameLengthOutOfRange,
                   "frame_len must be >= 1, got " + std::to_string(config.frame_len)});
  }
  if (config.age_threshold < 0) {
    out.push_back({ErrorCode::kThresholdOutOfRange,
                   "age_threshold must be >= 0, got " + std::to_string(config.age_threshold)});
  }
  if (const auto* fixed = std::get_if<FixedPolicy>(&config.policy)) {
    // NaN fails both comparisons.
    if (!(fixed->p > 0.0 && fixed->p <= 1.0)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "transmit probability must be in (0, 1], got %g", fixed->p);
      out.push_back({ErrorCode::kProbabilityOutOfRange, buf});
    }
  }
  return out;
}

ProtocolConfig validate_config(const ProtocolConfig& config) {
  const auto violations = check_config(config);
  if (violations.empty()) return config;
  std::string msg;
  for (const auto& v : violations) {
    if (!msg.empty()) msg += "; ";
    msg += v.message;
  }
  throw Error(violations.front().code, msg);
}

namespace {

AccessPolicy policy_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "adaptive") return AdaptivePolicy{};
    throw nlohmann::json::other_error::create(
        501, "policy string must be \"adaptive\"", &j);
  }
  if (j.is_object() && j.size() == 1 && j.contains("fixed")) {
    return FixedPolicy{j.at("fixed").get<double>()};
  }
  throw nlohmann::json::other_error::create(
      501, "policy must be \"adaptive\" or {\"fixed\": <p>}", &j);
}

}  // namespace

ProtocolConfig config_from_json(const nlohmann::json& j) {
  ProtocolConfig c;
  c.n_devices = j.at("n_devices").get<std::int64_t>();
  c.frame_len = j.at("frame_len").get<std::int64_t>();
  c.age_threshold = j.at("age_threshold").get<std::int64_t>();
  c.policy = policy_from_json(j.at("policy"));
  return c;
}

ProtocolConfig parse_config(const std::string& text) {
  return config_from_json(nlohmann::json::parse(text));
}

nlohmann::json policy_to_json(const AccessPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
    return nlohmann::json{{"fixed", fixed->p}};
  }
  return "adaptive";
}

nlohmann::json config_to_json(const ProtocolConfig& config) {
  nlohmann::json j;
  j["n_devices"] = config.n_devices;
  j["frame_len"] = config.frame_len;
  j["age_threshold"] = config.age_threshold;
  j["policy"] = policy_to_json(config.policy);
  if (config.frame_len >= 1) {
    j["lambda"] = config.lambda();
    j["epsilon"] = config.epsilon();
  }
  return j;
}

}  // namespace adra
