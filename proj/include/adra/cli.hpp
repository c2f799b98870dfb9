#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "adra/config.hpp"

namespace adra::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitModel = 3;

enum class SweepVariable { kThreshold, kPeriod, kDevices };

enum class PolicyClass { kFixedOptimal, kAdaptive };

struct SweepSpec {
  SweepVariable variable = SweepVariable::kThreshold;
  std::vector<std::int64_t> values;
  std::vector<PolicyClass> policy_classes{PolicyClass::kFixedOptimal, PolicyClass::kAdaptive};
  bool emit_simulation = false;
};

/// "a:b:step" (b inclusive) or "v1,v2,...". Throws std::invalid_argument
/// unless the result is non-empty and strictly increasing.
std::vector<std::int64_t> parse_values(const std::string& text);

/// "a,b,c" of probabilities in (0, 1]. Throws std::invalid_argument.
std::vector<double> parse_p_grid(const std::string& text);

/// "fixed:<p>" or "adaptive". Throws std::invalid_argument.
AccessPolicy parse_policy(const std::string& text);

/// %.12g, with NaN printed as "NaN".
std::string format_number(double value);

/// Entry point shared by the binary and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adra::cli
