#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adra/analytic.hpp"
#include "adra/config.hpp"

namespace adra {

struct CurvePoint {
  std::int64_t delta = 0;
  AccessPolicy policy;
  double aoi = 0.0;                  // NaN when the point has no finite AoI
  std::optional<ErrorCode> failure;  // why aoi is NaN
};

struct SearchResult {
  std::int64_t best_delta = 0;
  AccessPolicy best_policy;
  double best_aoi = 0.0;
  std::vector<CurvePoint> curve;  // grid order: policy-major, then delta
};

/// 3 * N * D.
std::int64_t default_delta_max(const ProtocolConfig& config);

/// {0.01, 0.02, ..., 0.20} followed by {0.25, 0.30, ..., 1.00}.
std::vector<double> default_p_grid();

/// Exhaustive search over delta in [0, delta_max] with the template's policy.
/// Points without a finite AoI are recorded and skipped; ties go to the
/// smaller delta. Throws kAllDegenerate when nothing converges.
SearchResult optimize_delta(const ProtocolConfig& base, std::int64_t delta_max,
                            const SolverOptions& options = {});

/// Best fixed transmit probability from p_grid at the template's threshold.
/// Ties go to the smaller p.
SearchResult optimize_p(const ProtocolConfig& base, const std::vector<double>& p_grid,
                        const SolverOptions& options = {});

/// Exhaustive search over delta x p_grid with fixed transmit probabilities;
/// the template's policy is ignored. Ties go to the smaller delta, then the
/// smaller p.
SearchResult optimize_joint(const ProtocolConfig& base, std::int64_t delta_max,
                            const std::vector<double>& p_grid,
                            const SolverOptions& options = {});

struct AiraComparison {
  SearchResult adra;  // optimum over the full grid
  std::int64_t aira_delta = 0;
  AccessPolicy aira_policy;
  double aira_aoi = 0.0;     // optimum restricted to delta = 0
  double improvement = 0.0;  // (aira - adra) / aira
};

/// Policy class follows the template: adaptive searches delta only, fixed
/// searches delta x p_grid.
AiraComparison compare_to_aira(const ProtocolConfig& base, std::int64_t delta_max,
                               const std::vector<double>& p_grid,
                               const SolverOptions& options = {});

}  // namespace adra
