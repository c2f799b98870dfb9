#include "adra/simulator.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace adra {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fail_invariant(const std::string& what) {
  throw std::logic_error("simulator invariant violated: " + what);
}

}  // namespace

SimConfig default_sim_config(const ProtocolConfig& protocol) {
  SimConfig c;
  c.protocol = protocol;
  const std::int64_t d = protocol.frame_len;
  c.horizon_slots = d >= 1 ? (kDefaultSimSlots / d) * d : kDefaultSimSlots;
  c.warmup_slots = kDefaultWarmupFrames * d;
  if (c.warmup_slots >= c.horizon_slots) c.warmup_slots = 0;
  return c;
}

void validate_sim_config(const SimConfig& config) {
  validate_config(config.protocol);
  const std::int64_t d = config.protocol.frame_len;
  if (config.horizon_slots < 1 || config.horizon_slots % d != 0) {
    throw Error(ErrorCode::kInvalidSimConfig,
                "horizon_slots must be a positive multiple of frame_len (" + std::to_string(d) +
                    "), got " + std::to_string(config.horizon_slots));
  }
  if (config.warmup_slots < 0 || config.warmup_slots >= config.horizon_slots) {
    throw Error(ErrorCode::kInvalidSimConfig, "warmup_slots must lie in [0, horizon_slots)");
  }
  if (config.runs < 1) {
    throw Error(ErrorCode::kInvalidSimConfig, "runs must be >= 1");
  }
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t run_index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(run_index + 0x632be59bd9b4e019ULL));
}

RunResult run_once(const SimConfig& config, int run_index) {
  validate_sim_config(config);
  const ProtocolConfig& proto = config.protocol;
  const auto n = static_cast<std::size_t>(proto.n_devices);
  const std::int64_t d = proto.frame_len;
  const std::int64_t threshold = proto.age_threshold;
  const bool adaptive = is_adaptive(proto.policy);
  const double fixed_p = adaptive ? 0.0 : std::get<FixedPolicy>(proto.policy).p;
  const bool check = config.check_invariants;

  std::mt19937_64 rng(stream_seed(config.seed, static_cast<std::uint64_t>(run_index)));

  std::vector<std::int64_t> age(n, 0);
  std::vector<char> pending(n, 0);
  std::vector<std::size_t> contenders;
  contenders.reserve(n);
  std::int64_t total_age = 0;  // sum of ages at the start of the current slot

  long double age_sum = 0.0L;
  std::int64_t deliveries = 0;

  for (std::int64_t t = 0; t < config.horizon_slots; ++t) {
    const std::int64_t h = t % d;
    if (h == 0) std::fill(pending.begin(), pending.end(), 1);
    const bool measured = t >= config.warmup_slots;
    if (measured) age_sum += static_cast<long double>(total_age);

    contenders.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] && age[i] >= threshold) contenders.push_back(i);
    }

    std::size_t winner = n;
    int transmitters = 0;
    if (!contenders.empty()) {
      const double p = adaptive ? 1.0 / static_cast<double>(contenders.size()) : fixed_p;
      for (std::size_t i : contenders) {
        if (p >= 1.0 || unit(rng) < p) {
          ++transmitters;
          winner = i;
          if (check && age[i] < threshold) fail_invariant("transmission below the threshold");
        }
      }
      if (check && adaptive && contenders.size() == 1 && transmitters != 1) {
        fail_invariant("lone adaptive contender did not transmit");
      }
    }

    for (std::size_t i = 0; i < n; ++i) ++age[i];
    total_age += static_cast<std::int64_t>(n);
    if (transmitters == 1) {
      if (check && !pending[winner]) fail_invariant("second delivery within one frame");
      pending[winner] = 0;
      const std::int64_t reset = h + 1;  // t + 1 - m*D
      total_age += reset - age[winner];
      age[winner] = reset;
      if (measured) ++deliveries;
    }
    if (check) {
      std::int64_t recount = 0;
      for (std::size_t i = 0; i < n; ++i) recount += age[i];
      if (recount != total_age) fail_invariant("running age total drifted");
      if (transmitters == 1 && age[winner] != h + 1) fail_invariant("reset value");
    }
  }

  const auto measured_slots = static_cast<long double>(config.horizon_slots - config.warmup_slots);
  RunResult r;
  r.avg_aoi = static_cast<double>(age_sum / (measured_slots * static_cast<long double>(n)));
  r.success_rate = static_cast<double>(static_cast<long double>(deliveries) * d /
                                       (measured_slots * static_cast<long double>(n)));
  return r;
}

SimReport run_replicated(const SimConfig& config) {
  validate_sim_config(config);
  SimReport report;
  double rate_sum = 0.0;
  for (int r = 0; r < config.runs; ++r) {
    const RunResult one = run_once(config, r);
    report.per_run_aoi.push_back(one.avg_aoi);
    rate_sum += one.success_rate;
  }
  const auto k = static_cast<double>(config.runs);
  double sum = 0.0;
  for (double v : report.per_run_aoi) sum += v;
  report.mean_aoi = sum / k;
  report.success_rate = rate_sum / k;
  if (config.runs > 1) {
    double ss = 0.0;
    for (double v : report.per_run_aoi) ss += (v - report.mean_aoi) * (v - report.mean_aoi);
    report.std_err = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
  }
  return report;
}

std::vector<double> brute_force_frame_oracle(std::int64_t s1, std::int64_t s2,
                                             const ProtocolConfig& config, bool tagged_above) {
  validate_config(config);
  if (s1 < 0 || s2 < 0 || s1 + s2 > 3 || config.frame_len > 4) {
    throw Error(ErrorCode::kSizeExceeded,
                "brute-force oracle limited to s1 + s2 <= 3 and frame_len <= 4");
  }
  const std::int64_t d = config.frame_len;
  const std::int64_t eps = config.epsilon();
  const int devices = static_cast<int>(1 + s1 + s2);  // bit 0 is the tagged device

  // Devices at the threshold frame (and the tagged device unless it is above)
  // become eligible from slot epsilon; devices above are eligible throughout.
  const auto eligible = [&](int dev, std::int64_t h) {
    if (dev == 0) return tagged_above || h >= eps;
    if (dev <= s1) return h >= eps;
    return true;
  };

  std::vector<double> alpha(static_cast<std::size_t>(d), 0.0);
  std::function<void(std::int64_t, unsigned, double)> visit = [&](std::int64_t h, unsigned pend,
                                                                   double prob) {
    if (h == d || prob == 0.0) return;
    std::vector<int> active;
    for (int dev = 0; dev < devices; ++dev) {
      if ((pend >> dev & 1U) && eligible(dev, h)) active.push_back(dev);
    }
    const int u = static_cast<int>(active.size());
    const double p = transmit_probability(config.policy, u);
    for (unsigned subset = 0; subset < (1U << u); ++subset) {
      double w = prob;
      int count = 0;
      int sender = -1;
      for (int k = 0; k < u; ++k) {
        if (subset >> k & 1U) {
          w *= p;
          ++count;
          sender = active[static_cast<std::size_t>(k)];
        } else {
          w *= 1.0 - p;
        }
      }
      if (w == 0.0) continue;
      if (count == 1 && sender == 0) {
        alpha[static_cast<std::size_t>(h)] += w;
        continue;
      }
      const unsigned next = count == 1 ? pend & ~(1U << sender) : pend;
      visit(h + 1, next, w);
    }
  };
  visit(0, (1U << devices) - 1U, 1.0);
  return alpha;
}

}  // namespace adra
