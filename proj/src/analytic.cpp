#include "adra/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adra {

namespace {

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kProbabilityOutOfRange,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

// s * log(p) with the convention 0 * log(0) = 0.
double weighted_log(std::int64_t s, double p) {
  if (s == 0) return 0.0;
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(s) * std::log(p);
}

double log_multinomial(std::int64_t n, std::int64_t s1, std::int64_t s2) {
  const auto lg = [](std::int64_t k) { return std::lgamma(static_cast<double>(k) + 1.0); };
  return lg(n) - lg(s1) - lg(s2) - lg(n - s1 - s2);
}

std::size_t triangle_size(std::int64_t n_others) {
  const auto n = static_cast<std::size_t>(n_others) + 1;
  return n * (n + 1) / 2;
}

std::size_t triangle_index(std::int64_t n_others, std::int64_t s1, std::int64_t s2) {
  const auto a = static_cast<std::size_t>(s1);
  return a * static_cast<std::size_t>(n_others + 1) - a * (a - (a > 0 ? 1 : 0)) / 2 +
         static_cast<std::size_t>(s2);
}

// Row where the tagged device and u-1 others contend.
ChainRow contention_with_tagged(std::int64_t u, const AccessPolicy& policy) {
  if (u <= 0) return {};
  const double p = transmit_probability(policy, static_cast<int>(u));
  const double lone = p * std::pow(1.0 - p, static_cast<double>(u - 1));
  return {1.0 - static_cast<double>(u) * lone, static_cast<double>(u - 1) * lone, lone};
}

// Row where only u other devices contend; the tagged device is silent.
ChainRow contention_without_tagged(std::int64_t u, const AccessPolicy& policy) {
  if (u <= 0) return {};
  const double p = transmit_probability(policy, static_cast<int>(u));
  const double advance = static_cast<double>(u) * p * std::pow(1.0 - p, static_cast<double>(u - 1));
  return {1.0 - advance, advance, 0.0};
}

// Contention rows depend only on the contender count, so they are tabulated
// once per (N, policy).
struct RowCache {
  std::vector<ChainRow> with_tagged;     // index u
  std::vector<ChainRow> without_tagged;  // index u

  RowCache(std::int64_t n_devices, const AccessPolicy& policy) {
    for (std::int64_t u = 0; u <= n_devices; ++u) {
      with_tagged.push_back(contention_with_tagged(u, policy));
      without_tagged.push_back(contention_without_tagged(u, policy));
    }
  }

  // Same case split as chain_row().
  const ChainRow& row(FrameChain chain, std::int64_t s1, std::int64_t s2, bool before_threshold,
                      std::int64_t delivered) const {
    std::int64_t u = 0;
    if (!before_threshold) {
      u = s1 + s2 + 1 - delivered;
    } else if (chain == FrameChain::kAt) {
      u = std::max<std::int64_t>(s2 - delivered, 0);
      return without_tagged[static_cast<std::size_t>(u)];
    } else {
      u = std::max<std::int64_t>(s2 + 1 - delivered, 0);
    }
    return with_tagged[static_cast<std::size_t>(u)];
  }
};

// Forward propagation of the within-frame chain. Writes the per-slot
// absorption increments into alpha (size D) and, when given, every state
// vector into trajectory.
void propagate(FrameChain chain, std::int64_t s1, std::int64_t s2, const ProtocolConfig& config,
               const RowCache& rows, double* alpha,
               std::vector<std::vector<double>>* trajectory) {
  const std::int64_t transient = s1 + s2 + 1;
  const std::int64_t eps = config.epsilon();
  std::vector<double> phi(static_cast<std::size_t>(transient) + 1, 0.0);
  std::vector<double> next(phi.size(), 0.0);
  phi[0] = 1.0;
  if (trajectory) trajectory->push_back(phi);
  const auto suc = static_cast<std::size_t>(transient);
  for (std::int64_t h = 0; h < config.frame_len; ++h) {
    std::fill(next.begin(), next.end(), 0.0);
    double absorbed = 0.0;
    for (std::int64_t y = 0; y < transient; ++y) {
      const double mass = phi[static_cast<std::size_t>(y)];
      if (mass == 0.0) continue;
      const ChainRow& row = rows.row(chain, s1, s2, h < eps, y);
      next[static_cast<std::size_t>(y)] += mass * row.stay;
      if (row.advance != 0.0) next[static_cast<std::size_t>(y) + 1] += mass * row.advance;
      absorbed += mass * row.success;
    }
    next[suc] = phi[suc] + absorbed;
    alpha[h] = absorbed;
    std::swap(phi, next);
    if (trajectory) trajectory->push_back(phi);
  }
}

void require_pair(std::int64_t s1, std::int64_t s2, const ProtocolConfig& config) {
  if (s1 < 0 || s2 < 0 || s1 + s2 > config.n_devices - 1) {
    throw Error(ErrorCode::kSizeExceeded, "pair (" + std::to_string(s1) + ", " +
                                              std::to_string(s2) + ") outside the simplex");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// External chain

double SteadyState::pi(std::int64_t l) const {
  if (l < 1) return 0.0;
  const double q = 1.0 - beta_lambda_plus;
  if (lambda == 0) return std::pow(q, static_cast<double>(l - 1)) / normalizer;
  if (l <= lambda) return 1.0 / normalizer;
  const double entry = 1.0 - beta_lambda;
  if (l == lambda + 1) return entry / normalizer;
  return entry * std::pow(q, static_cast<double>(l - lambda - 1)) / normalizer;
}

double SteadyState::tail_mass() const {
  if (lambda == 0) return 1.0 / (normalizer * beta_lambda_plus);
  if (beta_lambda >= 1.0) return 0.0;
  return (1.0 - beta_lambda) / (beta_lambda_plus * normalizer);
}

double SteadyState::total_mass() const {
  return static_cast<double>(lambda) / normalizer + tail_mass();
}

double SteadyState::tail_first_moment() const {
  const double entry = lambda == 0 ? 1.0 : 1.0 - beta_lambda;
  if (entry <= 0.0) return 0.0;
  const double b = beta_lambda_plus;
  // sum_{k>=0} (lambda + 1 + k) q^k = (lambda + 1) / b + q / b^2
  const double series = static_cast<double>(lambda + 1) / b + (1.0 - b) / (b * b);
  return entry * series / normalizer;
}

SteadyState external_steady_state(double beta_lambda, double beta_lambda_plus,
                                  std::int64_t lambda) {
  require_probability(beta_lambda, "beta_lambda");
  require_probability(beta_lambda_plus, "beta_lambda_plus");
  if (lambda < 0) {
    throw Error(ErrorCode::kThresholdOutOfRange, "lambda must be >= 0");
  }
  // State 0 is transient, so with lambda = 0 the chain enters the tail at
  // state D with certainty and beta_lambda plays no role.
  const bool tail_reachable = lambda == 0 || beta_lambda < 1.0;
  if (tail_reachable && beta_lambda_plus < kDegenerateFloor) {
    throw Error(ErrorCode::kDegenerateChain,
                "success probability above the threshold is " +
                    std::to_string(beta_lambda_plus) + "; the average AoI is unbounded");
  }
  SteadyState s;
  s.beta_lambda = beta_lambda;
  s.beta_lambda_plus = beta_lambda_plus;
  s.lambda = lambda;
  if (lambda == 0) {
    s.normalizer = 1.0 / beta_lambda_plus;
  } else {
    s.normalizer = static_cast<double>(lambda) +
                   (tail_reachable ? (1.0 - beta_lambda) / beta_lambda_plus : 0.0);
  }
  return s;
}

GroupSplit group_split(const SteadyState& steady) {
  if (steady.lambda == 0) return {0.0, 0.0, 1.0};
  GroupSplit g;
  g.p_below = static_cast<double>(steady.lambda - 1) / steady.normalizer;
  g.p_at = 1.0 / steady.normalizer;
  g.p_above = steady.tail_mass();
  return g;
}

// ---------------------------------------------------------------------------
// Joint law of the other devices

JointPmf::JointPmf(std::int64_t n_others)
    : n_others_(n_others), data_(triangle_size(n_others), 0.0) {}

std::size_t JointPmf::index(std::int64_t s1, std::int64_t s2) const {
  return triangle_index(n_others_, s1, s2);
}

double JointPmf::operator()(std::int64_t s1, std::int64_t s2) const {
  if (s1 < 0 || s2 < 0 || s1 + s2 > n_others_) return 0.0;
  return data_[index(s1, s2)];
}

double& JointPmf::at(std::int64_t s1, std::int64_t s2) { return data_[index(s1, s2)]; }

double JointPmf::total() const {
  double sum = 0.0;
  for (double v : data_) sum += v;
  return sum;
}

JointPmf joint_pmf(const GroupSplit& split, std::int64_t n_devices) {
  const std::int64_t n = n_devices - 1;
  JointPmf chi(n);
  for (std::int64_t s1 = 0; s1 <= n; ++s1) {
    for (std::int64_t s2 = 0; s1 + s2 <= n; ++s2) {
      const double log_term = log_multinomial(n, s1, s2) + weighted_log(s1, split.p_at) +
                              weighted_log(s2, split.p_above) +
                              weighted_log(n - s1 - s2, split.p_below);
      chi.at(s1, s2) = std::exp(log_term);
    }
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Internal chains

ChainRow chain_row(FrameChain chain, std::int64_t s1, std::int64_t s2, std::int64_t h,
                   std::int64_t delivered, const ProtocolConfig& config) {
  const bool before_threshold = h < config.epsilon();
  if (before_threshold) {
    // Only devices already above the threshold frame contend.
    if (chain == FrameChain::kAt) return contention_without_tagged(s2 - delivered, config.policy);
    return contention_with_tagged(s2 + 1 - delivered, config.policy);
  }
  return contention_with_tagged(s1 + s2 + 1 - delivered, config.policy);
}

std::vector<std::vector<double>> transition_matrix(FrameChain chain, std::int64_t s1,
                                                   std::int64_t s2, std::int64_t h,
                                                   const ProtocolConfig& config) {
  const auto size = static_cast<std::size_t>(s1 + s2 + 2);
  const std::size_t suc = size - 1;
  std::vector<std::vector<double>> m(size, std::vector<double>(size, 0.0));
  for (std::size_t y = 0; y < suc; ++y) {
    const ChainRow row = chain_row(chain, s1, s2, h, static_cast<std::int64_t>(y), config);
    m[y][y] = row.stay;
    if (y + 1 < suc) m[y][y + 1] = row.advance;
    m[y][suc] = row.success;
  }
  m[suc][suc] = 1.0;
  return m;
}

std::vector<std::vector<double>> chain_trajectory(FrameChain chain, std::int64_t s1,
                                                  std::int64_t s2,
                                                  const ProtocolConfig& config) {
  require_pair(s1, s2, config);
  std::vector<std::vector<double>> trajectory;
  std::vector<double> alpha(static_cast<std::size_t>(config.frame_len));
  propagate(chain, s1, s2, config, RowCache(config.n_devices, config.policy), alpha.data(),
            &trajectory);
  return trajectory;
}

std::vector<double> success_profile_at(std::int64_t s1, std::int64_t s2,
                                       const ProtocolConfig& config) {
  require_pair(s1, s2, config);
  std::vector<double> alpha(static_cast<std::size_t>(config.frame_len));
  propagate(FrameChain::kAt, s1, s2, config, RowCache(config.n_devices, config.policy),
            alpha.data(), nullptr);
  return alpha;
}

std::vector<double> success_profile_above(std::int64_t s1, std::int64_t s2,
                                          const ProtocolConfig& config) {
  require_pair(s1, s2, config);
  std::vector<double> alpha(static_cast<std::size_t>(config.frame_len));
  propagate(FrameChain::kAbove, s1, s2, config, RowCache(config.n_devices, config.policy),
            alpha.data(), nullptr);
  return alpha;
}

// ---------------------------------------------------------------------------
// Profile table

ProfileTable::ProfileTable(const ProtocolConfig& config)
    : n_others_(config.n_devices - 1),
      frame_len_(config.frame_len),
      epsilon_(config.epsilon()),
      policy_(config.policy) {
  validate_config(config);
  const std::size_t pairs = triangle_size(n_others_);
  const auto d = static_cast<std::size_t>(frame_len_);
  alpha_at_.assign(pairs * d, 0.0);
  alpha_above_.assign(pairs * d, 0.0);
  beta_at_.assign(pairs, 0.0);
  beta_above_.assign(pairs, 0.0);
  log_coef_.assign(pairs, 0.0);
  coef_.assign(pairs, 0.0);
  const RowCache rows(config.n_devices, config.policy);
  for (std::int64_t s1 = 0; s1 <= n_others_; ++s1) {
    for (std::int64_t s2 = 0; s1 + s2 <= n_others_; ++s2) {
      const std::size_t i = index(s1, s2);
      double* at = alpha_at_.data() + i * d;
      double* above = alpha_above_.data() + i * d;
      propagate(FrameChain::kAt, s1, s2, config, rows, at, nullptr);
      propagate(FrameChain::kAbove, s1, s2, config, rows, above, nullptr);
      log_coef_[i] = log_multinomial(n_others_, s1, s2);
      coef_[i] = std::exp(log_coef_[i]);
      if (!std::isfinite(coef_[i])) direct_coefs_ = false;
      double b_at = 0.0;
      double b_above = 0.0;
      for (std::size_t h = 0; h < d; ++h) {
        b_at += at[h];
        b_above += above[h];
      }
      beta_at_[i] = b_at;
      beta_above_[i] = b_above;
    }
  }
}

std::size_t ProfileTable::index(std::int64_t s1, std::int64_t s2) const {
  return triangle_index(n_others_, s1, s2);
}

std::span<const double> ProfileTable::at(std::int64_t s1, std::int64_t s2) const {
  const auto d = static_cast<std::size_t>(frame_len_);
  return {alpha_at_.data() + index(s1, s2) * d, d};
}

std::span<const double> ProfileTable::above(std::int64_t s1, std::int64_t s2) const {
  const auto d = static_cast<std::size_t>(frame_len_);
  return {alpha_above_.data() + index(s1, s2) * d, d};
}

bool ProfileTable::matches(const ProtocolConfig& config) const {
  return config.n_devices - 1 == n_others_ && config.frame_len == frame_len_ &&
         config.epsilon() == epsilon_ && config.policy == policy_;
}

SuccessProfile aggregate_profiles(const JointPmf& chi, const ProfileTable& table) {
  const auto d = static_cast<std::size_t>(table.frame_len());
  SuccessProfile out;
  out.alpha_at.assign(d, 0.0);
  out.alpha_above.assign(d, 0.0);
  const std::int64_t n = table.n_others();
  for (std::int64_t s1 = 0; s1 <= n; ++s1) {
    for (std::int64_t s2 = 0; s1 + s2 <= n; ++s2) {
      const double w = chi(s1, s2);
      if (w == 0.0) continue;
      const auto at = table.at(s1, s2);
      const auto above = table.above(s1, s2);
      for (std::size_t h = 0; h < d; ++h) {
        out.alpha_at[h] += w * at[h];
        out.alpha_above[h] += w * above[h];
      }
    }
  }
  for (std::size_t h = 0; h < d; ++h) {
    out.beta_at += out.alpha_at[h];
    out.beta_above += out.alpha_above[h];
  }
  return out;
}

SuccessProfile aggregate_profiles(const JointPmf& chi, const ProtocolConfig& config) {
  return aggregate_profiles(chi, ProfileTable(config));
}

// ---------------------------------------------------------------------------
// Fixed point

std::array<double, 2> ProfileTable::weighted_betas(const GroupSplit& split) const {
  const std::int64_t n = n_others_;
  double b_at = 0.0;
  double b_above = 0.0;
  if (direct_coefs_) {
    // Same multinomial as joint_pmf, with the coefficients and powers
    // tabulated instead of recomputed per entry.
    const auto powers = [n](double base) {
      std::vector<double> out(static_cast<std::size_t>(n) + 1);
      for (std::int64_t k = 0; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] = k == 0 ? 1.0 : std::pow(base, static_cast<double>(k));
      }
      return out;
    };
    const std::vector<double> at = powers(split.p_at);
    const std::vector<double> above = powers(split.p_above);
    const std::vector<double> below = powers(split.p_below);
    std::size_t i = 0;
    for (std::int64_t s1 = 0; s1 <= n; ++s1) {
      for (std::int64_t s2 = 0; s1 + s2 <= n; ++s2, ++i) {
        const double w = coef_[i] * at[static_cast<std::size_t>(s1)] *
                         above[static_cast<std::size_t>(s2)] *
                         below[static_cast<std::size_t>(n - s1 - s2)];
        b_at += w * beta_at_[i];
        b_above += w * beta_above_[i];
      }
    }
  } else {
    std::size_t i = 0;
    for (std::int64_t s1 = 0; s1 <= n; ++s1) {
      for (std::int64_t s2 = 0; s1 + s2 <= n; ++s2, ++i) {
        const double w = std::exp(log_coef_[i] + weighted_log(s1, split.p_at) +
                                  weighted_log(s2, split.p_above) +
                                  weighted_log(n - s1 - s2, split.p_below));
        b_at += w * beta_at_[i];
        b_above += w * beta_above_[i];
      }
    }
  }
  return {b_at, b_above};
}

std::array<double, 2> fixed_point_map(std::array<double, 2> betas, std::int64_t lambda,
                                      const ProfileTable& table) {
  const SteadyState steady = external_steady_state(betas[0], betas[1], lambda);
  const auto [b_at, b_above] = table.weighted_betas(group_split(steady));
  return {std::clamp(b_at, 0.0, 1.0), std::clamp(b_above, 0.0, 1.0)};
}

AnalyticSolution solve_fixed_point(const ProtocolConfig& config, const ProfileTable& table,
                                   const SolverOptions& options) {
  validate_config(config);
  if (!table.matches(config)) {
    throw Error(ErrorCode::kInvalidSimConfig, "profile table built for a different config");
  }
  const std::int64_t lambda = config.lambda();
  const double gamma = options.damping;
  std::array<double, 2> x = options.initial;
  for (int k = 0; k <= options.max_iters; ++k) {
    const std::array<double, 2> f = fixed_point_map(x, lambda, table);
    const double residual = std::max(std::abs(f[0] - x[0]), std::abs(f[1] - x[1]));
    if (residual <= options.tol) {
      // A map that sends the tail success probability to zero is a collapse,
      // not a fixed point, even once the damped iterate is within tolerance.
      const bool tail_reachable = lambda == 0 || x[0] < 1.0;
      if (tail_reachable && f[1] < kDegenerateFloor) {
        throw Error(ErrorCode::kDegenerateChain,
                    "fixed point has zero success probability above the threshold");
      }
      // One undamped step usually lands closer; keep it when it also passes.
      double best_residual = residual;
      try {
        const std::array<double, 2> ff = fixed_point_map(f, lambda, table);
        const double polished = std::max(std::abs(ff[0] - f[0]), std::abs(ff[1] - f[1]));
        if (polished <= residual) {
          x = f;
          best_residual = polished;
        }
      } catch (const Error&) {
      }
      AnalyticSolution sol;
      sol.steady = external_steady_state(x[0], x[1], lambda);
      sol.profile = aggregate_profiles(joint_pmf(group_split(sol.steady), config.n_devices), table);
      sol.residual = best_residual;
      sol.iterations = k;
      return sol;
    }
    x[0] = (1.0 - gamma) * x[0] + gamma * f[0];
    x[1] = (1.0 - gamma) * x[1] + gamma * f[1];
  }
  throw Error(ErrorCode::kNonConvergence,
              "fixed point did not converge within " + std::to_string(options.max_iters) +
                  " iterations");
}

AnalyticSolution solve_fixed_point(const ProtocolConfig& config, const SolverOptions& options) {
  return solve_fixed_point(config, ProfileTable(validate_config(config)), options);
}

std::vector<AnalyticSolution> find_fixed_points(
    const ProtocolConfig& config, std::span<const std::array<double, 2>> initial_guesses,
    const SolverOptions& options) {
  const ProfileTable table(validate_config(config));
  std::vector<AnalyticSolution> found;
  for (const auto& guess : initial_guesses) {
    SolverOptions opts = options;
    opts.initial = guess;
    try {
      AnalyticSolution sol = solve_fixed_point(config, table, opts);
      const bool seen = std::any_of(found.begin(), found.end(), [&](const AnalyticSolution& s) {
        return std::abs(s.steady.beta_lambda - sol.steady.beta_lambda) < 1e-6 &&
               std::abs(s.steady.beta_lambda_plus - sol.steady.beta_lambda_plus) < 1e-6;
      });
      if (!seen) {
        sol.avg_aoi = average_aoi(config, sol);
        found.push_back(std::move(sol));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonConvergence && e.code() != ErrorCode::kDegenerateChain) {
        throw;
      }
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Average AoI
//
// Within a frame that starts at age l*D the mean age is l(h+1) + (D-1)/2 when
// the tagged device succeeds in slot h, and l*D + (D-1)/2 when it fails.

namespace {

struct FrameMoments {
  double weighted_slots_at = 0.0;     // sum_h alpha_at[h] (h+1)
  double weighted_slots_above = 0.0;  // sum_h alpha_above[h] (h+1) + (1 - beta_above) D
};

FrameMoments frame_moments(const SuccessProfile& profile, std::int64_t frame_len) {
  FrameMoments m;
  for (std::size_t h = 0; h < profile.alpha_at.size(); ++h) {
    m.weighted_slots_at += profile.alpha_at[h] * static_cast<double>(h + 1);
    m.weighted_slots_above += profile.alpha_above[h] * static_cast<double>(h + 1);
  }
  m.weighted_slots_above += (1.0 - profile.beta_above) * static_cast<double>(frame_len);
  return m;
}

}  // namespace

double average_aoi(const ProtocolConfig& config, const AnalyticSolution& solution) {
  const SteadyState& s = solution.steady;
  const auto d = static_cast<double>(config.frame_len);
  const double half = (d - 1.0) / 2.0;
  const FrameMoments m = frame_moments(solution.profile, config.frame_len);
  const double tail = m.weighted_slots_above * s.tail_first_moment() + half * s.tail_mass();
  if (s.lambda == 0) return tail;

  const auto lam = static_cast<double>(s.lambda);
  const double below = (d * lam * (lam - 1.0) / 2.0 + half * (lam - 1.0)) / s.normalizer;
  const double beta_at = solution.profile.beta_at;
  const double at = (lam * m.weighted_slots_at + half * beta_at +
                     (1.0 - beta_at) * (lam * d + half)) /
                    s.normalizer;
  return below + at + tail;
}

double average_aoi_truncated(const ProtocolConfig& config, const AnalyticSolution& solution,
                             double rel_tail) {
  const SteadyState& s = solution.steady;
  const auto d = static_cast<double>(config.frame_len);
  const double half = (d - 1.0) / 2.0;
  const FrameMoments m = frame_moments(solution.profile, config.frame_len);
  const double beta_at = solution.profile.beta_at;

  double sum = 0.0;
  for (std::int64_t l = 1; l <= s.lambda; ++l) {
    const double pi = s.pi(l);
    const auto lv = static_cast<double>(l);
    if (l < s.lambda) {
      sum += pi * (lv * d + half);
    } else {
      sum += pi * (lv * m.weighted_slots_at + half * beta_at + (1.0 - beta_at) * (lv * d + half));
    }
  }
  const double q = 1.0 - s.beta_lambda_plus;
  double pi = s.pi(s.lambda + 1);
  // pi / beta_lambda_plus is the mass of the tail still to come.
  for (std::int64_t l = s.lambda + 1; pi > 0.0 && pi / s.beta_lambda_plus > rel_tail; ++l) {
    sum += pi * (static_cast<double>(l) * m.weighted_slots_above + half);
    pi *= q;
  }
  return sum;
}

AnalyticSolution analyze(const ProtocolConfig& config, const ProfileTable& table,
                         const SolverOptions& options) {
  AnalyticSolution sol = solve_fixed_point(config, table, options);
  sol.avg_aoi = average_aoi(config, sol);
  if (options.selection == FixedPointSelection::kSingleStart) return sol;

  SolverOptions low = options;
  low.initial = options.low_start;
  AnalyticSolution alt = solve_fixed_point(config, table, low);
  alt.avg_aoi = average_aoi(config, alt);
  const bool distinct =
      std::abs(alt.steady.beta_lambda - sol.steady.beta_lambda) >= 1e-6 ||
      std::abs(alt.steady.beta_lambda_plus - sol.steady.beta_lambda_plus) >= 1e-6;
  if (!distinct) return sol;
  AnalyticSolution& worse = alt.avg_aoi > sol.avg_aoi ? alt : sol;
  worse.fixed_points_found = 2;
  return worse;
}

AnalyticSolution analyze(const ProtocolConfig& config, const SolverOptions& options) {
  return analyze(config, ProfileTable(validate_config(config)), options);
}

}  // namespace adra
