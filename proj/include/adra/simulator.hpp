#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adra/config.hpp"

namespace adra {

inline constexpr std::int64_t kDefaultSimSlots = 1'000'000;
inline constexpr std::int64_t kDefaultWarmupFrames = 100;
inline constexpr int kDefaultSimRuns = 10;

struct SimConfig {
  ProtocolConfig protocol;
  std::int64_t horizon_slots = kDefaultSimSlots;  // includes the warmup
  std::int64_t warmup_slots = 0;
  std::uint64_t seed = 1;
  int runs = kDefaultSimRuns;
  // Verify age evolution and access rules at every slot; throws
  // std::logic_error on the first violation.
  bool check_invariants = false;
};

/// Desk-scale defaults: ~10^6 slots rounded down to whole frames, 100-frame
/// warmup.
SimConfig default_sim_config(const ProtocolConfig& protocol);

/// Throws Error on any broken invariant (kInvalidSimConfig for the
/// horizon/warmup/runs fields).
void validate_sim_config(const SimConfig& config);

struct RunResult {
  double avg_aoi = 0.0;       // time and device average over measured slots
  double success_rate = 0.0;  // deliveries per device per measured frame
};

struct SimReport {
  std::vector<double> per_run_aoi;
  double mean_aoi = 0.0;
  std::optional<double> std_err;  // empty when runs == 1
  double success_rate = 0.0;
};

/// 64-bit stream seed for one replication; a pure function of its inputs.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t run_index);

RunResult run_once(const SimConfig& config, int run_index);

/// Replications 0..runs-1, aggregated in run order.
SimReport run_replicated(const SimConfig& config);

/// Exact per-slot success probabilities of the tagged device in one frame by
/// enumerating every transmit/no-transmit outcome of every pending, eligible
/// device in every slot. `s1` other devices start the frame at the threshold
/// frame, `s2` above it; the tagged device is above when tagged_above.
/// Limited to s1 + s2 <= 3 and frame_len <= 4 (kSizeExceeded otherwise).
std::vector<double> brute_force_frame_oracle(std::int64_t s1, std::int64_t s2,
                                             const ProtocolConfig& config, bool tagged_above);

}  // namespace adra
