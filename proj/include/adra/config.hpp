#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace adra {

/// Machine-readable failure categories shared by every module.
enum class ErrorCode {
  kDevicesOutOfRange,
  kFrameLengthOutOfRange,
  kThresholdOutOfRange,
  kProbabilityOutOfRange,
  kDegenerateChain,
  kNonConvergence,
  kAllDegenerate,
  kSizeExceeded,
  kInvalidSimConfig,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Transmit with a constant probability in (0, 1].
struct FixedPolicy {
  double p = 1.0;
  bool operator==(const FixedPolicy&) const = default;
};

/// Transmit with probability 1/u, u = number of contenders in the slot.
struct AdaptivePolicy {
  bool operator==(const AdaptivePolicy&) const = default;
};

using AccessPolicy = std::variant<FixedPolicy, AdaptivePolicy>;

inline bool is_adaptive(const AccessPolicy& policy) {
  return std::holds_alternative<AdaptivePolicy>(policy);
}

/// Per-contender transmit probability when `contenders` devices are eligible.
/// Returns 0 when nobody contends.
inline double transmit_probability(const AccessPolicy& policy, int contenders) {
  if (contenders <= 0) return 0.0;
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) return fixed->p;
  return 1.0 / contenders;
}

std::string policy_label(const AccessPolicy& policy);

struct ThresholdSplit {
  std::int64_t lambda = 0;   // whole frames
  std::int64_t epsilon = 0;  // residual slots, in [0, frame_len)
  bool operator==(const ThresholdSplit&) const = default;
};

/// Euclidean split delta = lambda * frame_len + epsilon.
constexpr ThresholdSplit decompose_threshold(std::int64_t delta, std::int64_t frame_len) {
  return {delta / frame_len, delta % frame_len};
}

struct ProtocolConfig {
  std::int64_t n_devices = 1;
  std::int64_t frame_len = 1;
  std::int64_t age_threshold = 0;
  AccessPolicy policy = FixedPolicy{};

  ThresholdSplit split() const { return decompose_threshold(age_threshold, frame_len); }
  std::int64_t lambda() const { return split().lambda; }
  std::int64_t epsilon() const { return split().epsilon; }

  bool operator==(const ProtocolConfig&) const = default;
};

struct ConfigViolation {
  ErrorCode code;
  std::string message;
};

/// Every invariant the config breaks; empty when valid.
std::vector<ConfigViolation> check_config(const ProtocolConfig& config);

/// Returns the config unchanged, or throws Error carrying the first violation
/// (the message lists all of them).
ProtocolConfig validate_config(const ProtocolConfig& config);

}  // namespace adra
