#pragma once

// Multi-layer Markov model of age-dependent random access under periodic
// traffic. The external chain tracks the tagged device's age at frame starts
// (multiples of the frame length). Two internal absorbing chains give the
// per-slot success probabilities inside a frame, for a frame-start age exactly
// at lambda*D ("at") and above it ("above"). The two per-frame success
// probabilities close the loop through a fixed point.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "adra/config.hpp"

namespace adra {

/// Success probabilities below this floor make the tail of the external chain
/// non-recurrent in practice; the AoI is then unbounded.
inline constexpr double kDegenerateFloor = 1e-12;

/// Stationary law of the external chain over frame-start ages l*D, l >= 1.
struct SteadyState {
  double beta_lambda = 0.0;       // per-frame success from age lambda*D
  double beta_lambda_plus = 0.0;  // per-frame success from ages above lambda*D
  double normalizer = 1.0;        // lambda + (1 - beta_lambda) / beta_lambda_plus
  std::int64_t lambda = 0;

  /// Stationary probability of frame-start age l*D (0 for l < 1).
  double pi(std::int64_t l) const;

  /// Sum over l >= 1 of pi(l), evaluated in closed form.
  double total_mass() const;

  /// Probability that the frame-start age exceeds lambda*D.
  double tail_mass() const;

  /// Sum over l > lambda of l * pi(l), evaluated in closed form.
  double tail_first_moment() const;
};

/// Throws Error{kDegenerateChain} when the tail is reachable and
/// beta_lambda_plus < kDegenerateFloor.
SteadyState external_steady_state(double beta_lambda, double beta_lambda_plus,
                                  std::int64_t lambda);

/// Mass of frame-start ages below, exactly at, and above lambda*D.
struct GroupSplit {
  double p_below = 0.0;
  double p_at = 0.0;
  double p_above = 1.0;
};

GroupSplit group_split(const SteadyState& steady);

/// Joint law of (S1, S2): how many of the other N-1 devices start a frame
/// exactly at the threshold frame (S1) and above it (S2).
class JointPmf {
 public:
  JointPmf() = default;
  explicit JointPmf(std::int64_t n_others);

  std::int64_t n_others() const { return n_others_; }

  /// Zero outside the simplex s1 + s2 <= n_others.
  double operator()(std::int64_t s1, std::int64_t s2) const;
  double& at(std::int64_t s1, std::int64_t s2);

  double total() const;

 private:
  std::size_t index(std::int64_t s1, std::int64_t s2) const;

  std::int64_t n_others_ = 0;
  std::vector<double> data_;
};

/// Multinomial(N-1; p_at, p_above, p_below), evaluated in log space.
JointPmf joint_pmf(const GroupSplit& split, std::int64_t n_devices);

/// Which internal chain: frame-start age exactly lambda*D, or above it.
enum class FrameChain { kAt, kAbove };

/// One row of a within-frame transition matrix. The transient state counts
/// how many other devices already delivered this frame; `advance` moves to the
/// next count, `success` absorbs into the tagged-success state.
struct ChainRow {
  double stay = 1.0;
  double advance = 0.0;
  double success = 0.0;
};

/// Row of slot h's transition matrix for transient state `delivered`.
/// Rows with no contenders are identity rows.
ChainRow chain_row(FrameChain chain, std::int64_t s1, std::int64_t s2, std::int64_t h,
                   std::int64_t delivered, const ProtocolConfig& config);

/// Dense (s1+s2+2)^2 transition matrix for slot h; the last index is the
/// absorbing success state.
std::vector<std::vector<double>> transition_matrix(FrameChain chain, std::int64_t s1,
                                                   std::int64_t s2, std::int64_t h,
                                                   const ProtocolConfig& config);

/// State vectors at slot boundaries 0..D (D+1 entries, each s1+s2+2 long).
std::vector<std::vector<double>> chain_trajectory(FrameChain chain, std::int64_t s1,
                                                  std::int64_t s2,
                                                  const ProtocolConfig& config);

/// Per-slot success probabilities of the tagged device given (s1, s2).
std::vector<double> success_profile_at(std::int64_t s1, std::int64_t s2,
                                       const ProtocolConfig& config);
std::vector<double> success_profile_above(std::int64_t s1, std::int64_t s2,
                                          const ProtocolConfig& config);

/// All per-pair profiles for one (N, D, epsilon, policy). They do not depend
/// on lambda or on the fixed-point unknowns, so one table serves every
/// iteration and every threshold sharing the same epsilon.
class ProfileTable {
 public:
  explicit ProfileTable(const ProtocolConfig& config);

  std::int64_t n_others() const { return n_others_; }
  std::int64_t frame_len() const { return frame_len_; }
  std::int64_t epsilon() const { return epsilon_; }

  std::span<const double> at(std::int64_t s1, std::int64_t s2) const;
  std::span<const double> above(std::int64_t s1, std::int64_t s2) const;
  double beta_at(std::int64_t s1, std::int64_t s2) const { return beta_at_[index(s1, s2)]; }
  double beta_above(std::int64_t s1, std::int64_t s2) const {
    return beta_above_[index(s1, s2)];
  }

  /// True when the table was built for a config with the same N, D, epsilon
  /// and policy.
  bool matches(const ProtocolConfig& config) const;

  /// (sum chi * beta_at, sum chi * beta_above) with chi = joint_pmf(split, N).
  std::array<double, 2> weighted_betas(const GroupSplit& split) const;

 private:
  std::size_t index(std::int64_t s1, std::int64_t s2) const;

  std::int64_t n_others_;
  std::int64_t frame_len_;
  std::int64_t epsilon_;
  AccessPolicy policy_;
  std::vector<double> alpha_at_;
  std::vector<double> alpha_above_;
  std::vector<double> beta_at_;
  std::vector<double> beta_above_;
  std::vector<double> log_coef_;
  std::vector<double> coef_;
  bool direct_coefs_ = true;  // coef_ finite for every pair
};

struct SuccessProfile {
  std::vector<double> alpha_at;
  std::vector<double> alpha_above;
  double beta_at = 0.0;
  double beta_above = 0.0;
};

SuccessProfile aggregate_profiles(const JointPmf& chi, const ProfileTable& table);
SuccessProfile aggregate_profiles(const JointPmf& chi, const ProtocolConfig& config);

/// How analyze() settles on one fixed point when the map has several.
enum class FixedPointSelection {
  // Only the iterate started from `initial`.
  kSingleStart,
  // Also iterate from `low_start` and keep the solution with the larger AoI.
  // Contention-collapse equilibria (near-zero success) are the ones a long
  // simulation settles into, so this is the long-run prediction.
  kPessimistic,
};

struct SolverOptions {
  double damping = 0.5;
  std::array<double, 2> initial{0.5, 0.5};
  double tol = 1e-10;
  int max_iters = 10'000;
  FixedPointSelection selection = FixedPointSelection::kPessimistic;
  std::array<double, 2> low_start{1e-3, 1e-3};
};

struct AnalyticSolution {
  SteadyState steady;
  SuccessProfile profile;
  double avg_aoi = 0.0;  // filled by average_aoi / analyze
  double residual = 0.0;
  int iterations = 0;
  int fixed_points_found = 1;  // distinct fixed points seen by analyze()
};

/// One application of the fixed-point map (beta_lambda, beta_lambda_plus) ->
/// per-frame success probabilities implied by the induced (S1, S2) law.
std::array<double, 2> fixed_point_map(std::array<double, 2> betas, std::int64_t lambda,
                                      const ProfileTable& table);

/// Damped Picard iteration from options.initial (options.selection is not
/// consulted). Throws kNonConvergence or kDegenerateChain.
AnalyticSolution solve_fixed_point(const ProtocolConfig& config,
                                   const SolverOptions& options = {});
AnalyticSolution solve_fixed_point(const ProtocolConfig& config, const ProfileTable& table,
                                   const SolverOptions& options = {});

/// Distinct fixed points reached from each initial guess (deduplicated at
/// 1e-6). Guesses that fail to converge are skipped.
std::vector<AnalyticSolution> find_fixed_points(
    const ProtocolConfig& config, std::span<const std::array<double, 2>> initial_guesses,
    const SolverOptions& options = {});

/// Network-wide time-average AoI in slots, with the geometric tail summed in
/// closed form.
double average_aoi(const ProtocolConfig& config, const AnalyticSolution& solution);

/// Same quantity by direct summation over l, stopping once the remaining
/// tail mass drops below rel_tail. Cross-check only.
double average_aoi_truncated(const ProtocolConfig& config, const AnalyticSolution& solution,
                             double rel_tail = 1e-12);

/// validate -> solve -> average_aoi, applying options.selection. Under
/// kPessimistic a failure from either start is propagated.
AnalyticSolution analyze(const ProtocolConfig& config, const SolverOptions& options = {});
AnalyticSolution analyze(const ProtocolConfig& config, const ProfileTable& table,
                         const SolverOptions& options = {});

}  // namespace adra
