// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion,
// preceded by the measurements behind it, and exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "adra/analytic.hpp"
#include "adra/optimizer.hpp"
#include "adra/simulator.hpp"

using namespace adra;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Verdict {
  int id;
  bool pass;
  std::string summary;
};

std::vector<Verdict> verdicts;

void report(int id, bool pass, const std::string& summary) {
  verdicts.push_back({id, pass, summary});
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", summary.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Optimal ADRA and AIRA per (N, D, class), shared by criteria 3 and 4.
struct ClassOptimum {
  double adra_aoi;
  double improvement;
  std::int64_t best_delta;
  std::string best_policy;
};

std::map<std::tuple<std::int64_t, std::int64_t, bool>, ClassOptimum> optimum_cache;

const ClassOptimum& class_optimum(std::int64_t n, std::int64_t d, bool adaptive) {
  const auto key = std::make_tuple(n, d, adaptive);
  if (auto it = optimum_cache.find(key); it != optimum_cache.end()) return it->second;
  const ProtocolConfig base{n, d, 0,
                            adaptive ? AccessPolicy{AdaptivePolicy{}} : AccessPolicy{FixedPolicy{}}};
  const auto t0 = std::chrono::steady_clock::now();
  const AiraComparison cmp = compare_to_aira(base, default_delta_max(base), default_p_grid());
  const ClassOptimum opt{cmp.adra.best_aoi, cmp.improvement, cmp.adra.best_delta,
                         policy_label(cmp.adra.best_policy)};
  std::printf("  N=%-3lld D=%-3lld %-8s ADRA %9.4f (delta=%lld, %s)  AIRA %9.4f  improvement %6.2f%%  [%.1fs]\n",
              static_cast<long long>(n), static_cast<long long>(d),
              adaptive ? "adaptive" : "fixed", opt.adra_aoi,
              static_cast<long long>(opt.best_delta), opt.best_policy.c_str(), cmp.aira_aoi,
              100 * opt.improvement, seconds_since(t0));
  std::fflush(stdout);
  return optimum_cache.emplace(key, opt).first->second;
}

// --- 1: analytic vs simulation ---------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int points = 0;
  for (std::int64_t d : {10, 30}) {
    for (bool adaptive : {false, true}) {
      for (std::int64_t k2 : {0, 1, 2, 4, 8, 16}) {  // delta = k2 * D / 2
        ProtocolConfig config{20, d, k2 * d / 2, AdaptivePolicy{}};
        if (!adaptive) {
          config.policy = optimize_p(config, default_p_grid()).best_policy;
        }
        const double model = analyze(config).avg_aoi;
        SimConfig sim = default_sim_config(config);
        sim.seed = kSeed;
        const SimReport rep = run_replicated(sim);
        const double rel = std::abs(model - rep.mean_aoi) / rep.mean_aoi;
        worst = std::max(worst, rel);
        ++points;
        std::printf("  D=%-3lld delta=%-4lld %-12s analytic %9.4f  sim %9.4f +- %.4f  rel %6.3f%%%s\n",
                    static_cast<long long>(d), static_cast<long long>(config.age_threshold),
                    policy_label(config.policy).c_str(), model, rep.mean_aoi,
                    rep.std_err.value_or(0.0), 100 * rel, rel > 0.02 ? "  <-- over 2%" : "");
        std::fflush(stdout);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report(1, worst <= 0.02 && elapsed <= 600.0,
         fmt("%d points, worst relative error %.3f%% (limit 2%%), %.0fs (limit 600s)", points,
             100 * worst, elapsed));
}

// --- 2: U-shape of the threshold curve ---------------------------------------

void criterion_2() {
  const ProtocolConfig base{20, 10, 0, AdaptivePolicy{}};
  const SearchResult r = optimize_delta(base, 200);
  std::vector<double> aoi;
  for (const auto& point : r.curve) aoi.push_back(point.aoi);
  const auto argmin = static_cast<std::size_t>(r.best_delta);
  std::size_t first_flat = 0;
  bool strict = true;
  for (std::size_t i = 1; i <= argmin; ++i) {
    if (!(aoi[i] < aoi[i - 1])) {
      if (strict) first_flat = i;
      strict = false;
    }
  }
  const bool rises = aoi[200] > aoi[argmin];
  std::printf("  delta 0..200: argmin %zu (%.4f), AoI(0) %.4f, AoI(200) %.4f\n", argmin,
              aoi[argmin], aoi[0], aoi[200]);
  if (!strict) {
    std::printf("  first non-decrease at delta=%zu: AoI(%zu)=%.15g, AoI(%zu)=%.15g\n", first_flat,
                first_flat - 1, aoi[first_flat - 1], first_flat, aoi[first_flat]);
  }
  report(2, strict && rises,
         fmt("strictly decreasing to argmin: %s; AoI(200) > min: %s", strict ? "yes" : "no",
             rises ? "yes" : "no"));
}

// --- 3: improvement bands ----------------------------------------------------

void criterion_3() {
  bool pass = true;
  std::string detail;
  for (bool adaptive : {false, true}) {
    const double lo = adaptive ? 0.12 : 0.09;
    const double hi = adaptive ? 0.45 : 0.40;
    for (std::int64_t d : {10, 30}) {
      const double imp = class_optimum(20, d, adaptive).improvement;
      pass = pass && imp >= lo && imp <= hi;
      detail += fmt("%s D=%lld %.2f%% in [%.0f, %.0f]; ", adaptive ? "adaptive" : "fixed",
                    static_cast<long long>(d), 100 * imp, 100 * lo, 100 * hi);
    }
  }
  report(3, pass, detail);
}

// --- 4: trends over the frame length -----------------------------------------

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
}

void criterion_4() {
  const std::vector<std::int64_t> periods{5, 10, 20, 30, 40};
  bool pass = true;
  std::string detail;
  std::map<std::pair<std::int64_t, bool>, double> imp_at_5;
  for (std::int64_t n : {20, 40}) {
    for (bool adaptive : {false, true}) {
      std::vector<double> x, aoi, imp;
      for (std::int64_t d : periods) {
        const ClassOptimum& opt = class_optimum(n, d, adaptive);
        x.push_back(static_cast<double>(d));
        aoi.push_back(opt.adra_aoi);
        imp.push_back(opt.improvement);
      }
      bool nondecreasing = true, nonincreasing = true;
      for (std::size_t i = 1; i < x.size(); ++i) {
        nondecreasing = nondecreasing && aoi[i] >= aoi[i - 1];
        nonincreasing = nonincreasing && imp[i] <= imp[i - 1];
      }
      const double r2 = r_squared(x, aoi);
      imp_at_5[{n, adaptive}] = imp[0];
      const bool ok = nondecreasing && nonincreasing && r2 >= 0.98;
      pass = pass && ok;
      std::printf("  N=%lld %-8s AoI non-decreasing %s, R^2 %.4f, improvement non-increasing %s\n",
                  static_cast<long long>(n), adaptive ? "adaptive" : "fixed",
                  nondecreasing ? "yes" : "no", r2, nonincreasing ? "yes" : "no");
      detail += fmt("N=%lld %s R2=%.4f; ", static_cast<long long>(n),
                    adaptive ? "adaptive" : "fixed", r2);
    }
  }
  for (bool adaptive : {false, true}) {
    const bool larger = imp_at_5[{40, adaptive}] > imp_at_5[{20, adaptive}];
    std::printf("  D=5 %-8s improvement N=40 %.2f%% > N=20 %.2f%%: %s\n",
                adaptive ? "adaptive" : "fixed", 100 * imp_at_5[{40, adaptive}],
                100 * imp_at_5[{20, adaptive}], larger ? "yes" : "no");
    pass = pass && larger;
  }
  report(4, pass, detail);
}

// --- 5: oracle equivalences --------------------------------------------------

void criterion_5() {
  // (a) chain profiles vs exhaustive enumeration
  double worst_a = 0.0;
  int instances = 0;
  for (std::int64_t d = 1; d <= 4; ++d) {
    for (std::int64_t eps = 0; eps < d; ++eps) {
      std::vector<AccessPolicy> policies{AdaptivePolicy{}};
      for (double p : {0.3, 0.7, 1.0}) policies.push_back(FixedPolicy{p});
      for (const auto& policy : policies) {
        const ProtocolConfig c{4, d, 2 * d + eps, policy};
        for (std::int64_t s1 = 0; s1 <= 3; ++s1) {
          for (std::int64_t s2 = 0; s1 + s2 <= 3; ++s2) {
            const auto at = success_profile_at(s1, s2, c);
            const auto above = success_profile_above(s1, s2, c);
            const auto o_at = brute_force_frame_oracle(s1, s2, c, false);
            const auto o_above = brute_force_frame_oracle(s1, s2, c, true);
            for (std::int64_t h = 0; h < d; ++h) {
              worst_a = std::max(worst_a, std::abs(at[h] - o_at[h]));
              worst_a = std::max(worst_a, std::abs(above[h] - o_above[h]));
            }
            instances += 2;
          }
        }
      }
    }
  }
  // (b) single-slot frames
  double worst_b = 0.0;
  int cases_b = 0;
  for (std::int64_t n : {2, 5, 10, 20}) {
    for (double p : {0.02, 0.05, 0.1, 0.3}) {
      for (std::int64_t delta : {0, 1, 2, 5, 20}) {
        const ProtocolConfig c{n, 1, delta, FixedPolicy{p}};
        AnalyticSolution sol;
        try {
          sol = analyze(c);
        } catch (const Error&) {
          continue;
        }
        const GroupSplit g = group_split(sol.steady);
        const double beta = sol.steady.beta_lambda_plus;
        const double rhs = p * std::pow(1 - p * (g.p_at + g.p_above), static_cast<double>(n - 1));
        worst_b = std::max(worst_b, std::abs(beta - rhs));
        worst_b = std::max(worst_b, std::abs(sol.steady.beta_lambda - beta));
        ++cases_b;
      }
    }
  }
  // (c) zero threshold
  double worst_c = 0.0;
  int cases_c = 0;
  for (std::int64_t n : {2, 10, 20, 40}) {
    for (std::int64_t d : {1, 5, 10, 30}) {
      for (AccessPolicy policy : {AccessPolicy{AdaptivePolicy{}}, AccessPolicy{FixedPolicy{0.05}},
                                  AccessPolicy{FixedPolicy{0.2}}}) {
        const auto sol = analyze({n, d, 0, policy});
        const double beta = sol.steady.beta_lambda_plus;
        worst_c = std::max(worst_c, std::abs(sol.steady.beta_lambda - beta));
        for (std::int64_t l = 1; l <= 200; ++l) {
          const double expect = beta * std::pow(1 - beta, static_cast<double>(l - 1));
          worst_c = std::max(worst_c, std::abs(sol.steady.pi(l) - expect));
        }
        ++cases_c;
      }
    }
  }
  const bool pass = worst_a <= 1e-12 && worst_b <= 1e-10 && worst_c <= 1e-10 && cases_b > 0;
  report(5, pass,
         fmt("(a) %d profiles, max diff %.2e (limit 1e-12); (b) %d cases, max diff %.2e; "
             "(c) %d cases, max diff %.2e (limits 1e-10)",
             instances, worst_a, cases_b, worst_b, cases_c, worst_c));
}

// --- 6: exact hand values ----------------------------------------------------

void criterion_6() {
  bool pass = true;
  std::string detail;
  for (std::int64_t d : {1, 10, 30}) {
    const ProtocolConfig c{1, d, 0, FixedPolicy{1.0}};
    const double exact = (static_cast<double>(d) + 1.0) / 2.0;
    const double model = analyze(c).avg_aoi;
    SimConfig sim = default_sim_config(c);
    sim.seed = kSeed;
    const double simulated = run_replicated(sim).mean_aoi;
    const double rel = std::abs(simulated - exact) / exact;
    pass = pass && model == exact && rel <= 0.005;
    detail += fmt("D=%lld analytic %.17g (exact %g) sim %.6f; ", static_cast<long long>(d), model,
                  exact, simulated);
  }
  report(6, pass, detail);
}

// --- 7: randomized property suite --------------------------------------------

void criterion_7() {
  std::mt19937_64 rng(kSeed);
  auto uniform_int = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  constexpr int kSamples = 600;
  int rows_bad = 0, monotone_bad = 0, mass_bad = 0, alpha_bad = 0, bound_bad = 0, determinism_bad = 0;
  int analyzed = 0, degenerate = 0;
  for (int i = 0; i < kSamples; ++i) {
    const std::int64_t n = uniform_int(1, 12);
    const std::int64_t d = uniform_int(1, 12);
    const std::int64_t delta = uniform_int(0, 3 * n * d);
    AccessPolicy policy = AdaptivePolicy{};
    if (uniform_int(0, 1) == 0) policy = FixedPolicy{static_cast<double>(uniform_int(1, 100)) / 100.0};
    const ProtocolConfig c{n, d, delta, policy};

    for (std::int64_t s1 = 0; s1 < n; ++s1) {
      for (std::int64_t s2 = 0; s1 + s2 < n; ++s2) {
        for (FrameChain chain : {FrameChain::kAt, FrameChain::kAbove}) {
          for (std::int64_t h = 0; h < d; ++h) {
            for (const auto& row : transition_matrix(chain, s1, s2, h, c)) {
              double sum = 0.0;
              bool negative = false;
              for (double v : row) sum += v, negative = negative || v < 0.0;
              if (negative || std::abs(sum - 1.0) > 1e-12) ++rows_bad;
            }
          }
          const auto traj = chain_trajectory(chain, s1, s2, c);
          double beta = 0.0;
          for (std::size_t h = 0; h < traj.size(); ++h) {
            for (double v : traj[h]) {
              if (v < 0.0 || v > 1.0 + 1e-15) ++monotone_bad;
            }
            if (h > 0) {
              if (traj[h].back() < traj[h - 1].back()) ++monotone_bad;
              beta += traj[h].back() - traj[h - 1].back();
            }
          }
          if (beta > 1.0 + 1e-12) ++alpha_bad;
        }
      }
    }

    try {
      const AnalyticSolution sol = analyze(c);
      ++analyzed;
      double direct = 0.0;
      for (std::int64_t l = 1; l <= sol.steady.lambda; ++l) direct += sol.steady.pi(l);
      if (std::abs(sol.steady.total_mass() - 1.0) > 1e-12 ||
          std::abs(direct + sol.steady.tail_mass() - 1.0) > 1e-12) {
        ++mass_bad;
      }
      if (sol.profile.beta_at > 1.0 + 1e-12 || sol.profile.beta_above > 1.0 + 1e-12) ++alpha_bad;
      if (!(sol.avg_aoi >= (static_cast<double>(d) + 1.0) / 2.0)) ++bound_bad;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateChain && e.code() != ErrorCode::kNonConvergence) throw;
      ++degenerate;
    }

    SimConfig sim;
    sim.protocol = c;
    sim.horizon_slots = 200 * d;
    sim.warmup_slots = 20 * d;
    sim.runs = 2;
    sim.seed = rng();
    sim.check_invariants = true;
    const SimReport a = run_replicated(sim);
    const SimReport b = run_replicated(sim);
    if (a.per_run_aoi != b.per_run_aoi || a.mean_aoi != b.mean_aoi || a.std_err != b.std_err) {
      ++determinism_bad;
    }
  }
  const bool pass = rows_bad + monotone_bad + mass_bad + alpha_bad + bound_bad + determinism_bad == 0;
  report(7, pass,
         fmt("%d configs (%d solved, %d without a finite AoI); violations: rows %d, "
             "absorption %d, mass %d, alpha-sum %d, AoI bound %d, determinism %d",
             kSamples, analyzed, degenerate, rows_bad, monotone_bad, mass_bad, alpha_bad,
             bound_bad, determinism_bad));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_1();

  int failed = 0;
  for (const auto& v : verdicts) failed += v.pass ? 0 : 1;
  std::printf("\n%d of %zu criteria passed in %.0fs\n",
              static_cast<int>(verdicts.size()) - failed, verdicts.size(), seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
