#include "adra/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace adra {

namespace {

// Evaluates one policy over delta = 0..delta_max, reusing one profile table
// per epsilon.
void sweep_delta(const ProtocolConfig& base, const AccessPolicy& policy, std::int64_t delta_max,
                 const SolverOptions& options, std::vector<CurvePoint>& curve) {
  ProtocolConfig config = base;
  config.policy = policy;
  config.age_threshold = 0;
  validate_config(config);
  std::map<std::int64_t, ProfileTable> tables;
  for (std::int64_t delta = 0; delta <= delta_max; ++delta) {
    config.age_threshold = delta;
    const std::int64_t eps = config.epsilon();
    auto it = tables.find(eps);
    if (it == tables.end()) it = tables.emplace(eps, ProfileTable(config)).first;
    CurvePoint point{delta, policy, std::numeric_limits<double>::quiet_NaN(), std::nullopt};
    try {
      point.aoi = analyze(config, it->second, options).avg_aoi;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateChain && e.code() != ErrorCode::kNonConvergence) {
        throw;
      }
      point.failure = e.code();
    }
    curve.push_back(std::move(point));
  }
}

double policy_key(const AccessPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) return fixed->p;
  return 0.0;
}

// Argmin with ties toward smaller delta, then smaller p.
SearchResult pick_best(std::vector<CurvePoint> curve) {
  const CurvePoint* best = nullptr;
  for (const auto& point : curve) {
    if (!std::isfinite(point.aoi)) continue;
    if (best == nullptr || point.aoi < best->aoi ||
        (point.aoi == best->aoi &&
         (point.delta < best->delta ||
          (point.delta == best->delta && policy_key(point.policy) < policy_key(best->policy))))) {
      best = &point;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kAllDegenerate, "no grid point yields a finite average AoI");
  }
  SearchResult result;
  result.best_delta = best->delta;
  result.best_policy = best->policy;
  result.best_aoi = best->aoi;
  result.curve = std::move(curve);
  return result;
}

void require_delta_max(std::int64_t delta_max) {
  if (delta_max < 0) {
    throw Error(ErrorCode::kThresholdOutOfRange, "delta_max must be >= 0");
  }
}

std::vector<double> sorted_grid(const std::vector<double>& p_grid) {
  if (p_grid.empty()) {
    throw Error(ErrorCode::kProbabilityOutOfRange, "p_grid must not be empty");
  }
  std::vector<double> grid = p_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

std::int64_t default_delta_max(const ProtocolConfig& config) {
  return 3 * config.n_devices * config.frame_len;
}

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(k / 100.0);
  for (int k = 25; k <= 100; k += 5) grid.push_back(k / 100.0);
  return grid;
}

SearchResult optimize_delta(const ProtocolConfig& base, std::int64_t delta_max,
                            const SolverOptions& options) {
  require_delta_max(delta_max);
  std::vector<CurvePoint> curve;
  sweep_delta(base, base.policy, delta_max, options, curve);
  return pick_best(std::move(curve));
}

SearchResult optimize_p(const ProtocolConfig& base, const std::vector<double>& p_grid,
                        const SolverOptions& options) {
  const std::vector<double> grid = sorted_grid(p_grid);
  std::vector<CurvePoint> curve;
  for (double p : grid) {
    ProtocolConfig config = base;
    config.policy = FixedPolicy{p};
    CurvePoint point{config.age_threshold, config.policy,
                     std::numeric_limits<double>::quiet_NaN(), std::nullopt};
    try {
      point.aoi = analyze(validate_config(config), options).avg_aoi;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateChain && e.code() != ErrorCode::kNonConvergence) {
        throw;
      }
      point.failure = e.code();
    }
    curve.push_back(std::move(point));
  }
  return pick_best(std::move(curve));
}

SearchResult optimize_joint(const ProtocolConfig& base, std::int64_t delta_max,
                            const std::vector<double>& p_grid, const SolverOptions& options) {
  require_delta_max(delta_max);
  const std::vector<double> grid = sorted_grid(p_grid);
  std::vector<CurvePoint> curve;
  for (double p : grid) sweep_delta(base, FixedPolicy{p}, delta_max, options, curve);
  return pick_best(std::move(curve));
}

AiraComparison compare_to_aira(const ProtocolConfig& base, std::int64_t delta_max,
                               const std::vector<double>& p_grid, const SolverOptions& options) {
  AiraComparison out;
  out.adra = is_adaptive(base.policy) ? optimize_delta(base, delta_max, options)
                                      : optimize_joint(base, delta_max, p_grid, options);
  std::vector<CurvePoint> aira_curve;
  for (const auto& point : out.adra.curve) {
    if (point.delta == 0) aira_curve.push_back(point);
  }
  const SearchResult aira = pick_best(std::move(aira_curve));
  out.aira_delta = aira.best_delta;
  out.aira_policy = aira.best_policy;
  out.aira_aoi = aira.best_aoi;
  out.improvement = (out.aira_aoi - out.adra.best_aoi) / out.aira_aoi;
  return out;
}

}  // namespace adra
