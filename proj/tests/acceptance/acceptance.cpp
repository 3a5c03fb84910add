// Desk-scale acceptance suite: U=10, M=3, T=2000, default constants, seeds
// 1..10. Prints one PASS/FAIL line per criterion; exits non-zero if any fail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "omora/allocator.hpp"
#include "omora/association.hpp"
#include "omora/cost.hpp"
#include "omora/simulation.hpp"
#include "test_support.hpp"

namespace {

using namespace omora;

constexpr int kSeeds = 10;
const std::vector<PolicyKind> kCompared{PolicyKind::OmoraSdp, PolicyKind::NL, PolicyKind::NM};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string series(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt("%.6g", v[i]);
  return s + "]";
}

struct RunStats {
  double cost = 0.0;
  double queue = 0.0;
  double final_queue_per_slot = 0.0;  // mean over MIDs of Q_u(T+1) / T
  int drift_violations = 0;
};

class RunCache {
 public:
  const RunStats& get(const NetworkConfig& cfg, PolicyKind policy, std::uint64_t seed) {
    const auto key = std::make_tuple(config_hash(cfg), static_cast<int>(policy), seed);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const RunSummary s = run(cfg, policy, seed);
    RunStats r{s.avg_service_cost, s.avg_queue_bits, 0.0, s.drift_bound_violations};
    for (double q : s.final_queues) r.final_queue_per_slot += q / s.slots;
    r.final_queue_per_slot /= static_cast<double>(s.final_queues.size());
    ++runs_;
    return cache_.emplace(key, r).first->second;
  }

  // Seed means of (cost, queue).
  std::pair<double, double> mean(const NetworkConfig& cfg, PolicyKind policy) {
    double c = 0.0, q = 0.0;
    for (int s = 1; s <= kSeeds; ++s) {
      const RunStats& r = get(cfg, policy, static_cast<std::uint64_t>(s));
      c += r.cost;
      q += r.queue;
    }
    return {c / kSeeds, q / kSeeds};
  }

  [[nodiscard]] int runs() const { return runs_; }

 private:
  std::map<std::tuple<std::string, int, std::uint64_t>, RunStats> cache_;
  int runs_ = 0;
};

// Adjacent pairs where v[i+1] < v[i] (rising) or v[i+1] > v[i] (falling).
int breaks(const std::vector<double>& v, bool rising) {
  int n = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (rising ? v[i + 1] < v[i] : v[i + 1] > v[i]) ++n;
  }
  return n;
}

Verdict closed_form_oracle() {
  RngStream s = rng_stream(20240611, "acceptance-allocator");
  const int grid = 1000000;
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const testing::AllocCase c = testing::random_alloc_case(s);
    const double of = frequency_objective(optimal_frequency(c.ctx, c.cfg).value, c.ctx, c.cfg);
    const double ofg = frequency_objective(grid_oracle_frequency(c.ctx, c.cfg, grid), c.ctx, c.cfg);
    const double op = power_objective(optimal_power(c.ctx, c.cfg).value, c.ctx, c.cfg);
    const double opg = power_objective(grid_oracle_power(c.ctx, c.cfg, grid), c.ctx, c.cfg);
    for (auto [closed, oracle] : {std::pair{of, ofg}, std::pair{op, opg}}) {
      const double gap = (closed - oracle) / std::max(std::abs(oracle), std::numeric_limits<double>::min());
      if (closed > oracle) worst = std::max(worst, gap);
      if (closed > oracle + 1e-9 * std::abs(oracle)) ++failures;
    }
  }
  return {"closed-form-oracle", failures == 0,
          "1000 contexts, 1e6-point grids, worst relative excess " + fmt("%.3g", worst) + ", failures " +
              std::to_string(failures)};
}

Verdict migration_identity() {
  int checked = 0, failures = 0;
  for (int M = 1; M <= 6; ++M) {
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        std::vector<std::uint8_t> prev(M, 0), cur(M, 0);
        prev[a] = cur[b] = 1;
        for (double eps : {0.01, 0.1, 1.0, 10.0}) {
          ++checked;
          if (migration_cost(prev, cur, eps) != (a == b ? 0.0 : eps)) ++failures;
        }
      }
    }
  }
  return {"migration-identity", failures == 0,
          std::to_string(checked) + " (M, prev, cur, eps) cases, failures " + std::to_string(failures)};
}

Verdict association_pipeline() {
  RngStream s = rng_stream(20240612, "acceptance-association");
  const int n = 1000;
  int bound_failures = 0, infeasible = 0, within = 0;
  for (int i = 0; i < n; ++i) {
    AssignmentProblem p = testing::random_slot_problem(s);
    p.cap_max = 4 + i % 7;
    const AssociationResult exact = solve_exact(p);
    const AssociationResult r = solve_sdr_rounding(p);
    const double scale = p.costs.cwiseAbs().maxCoeff() * static_cast<double>(p.costs.rows());
    if (r.relaxed_objective > exact.objective + 1e-6 * scale) ++bound_failures;
    if (!testing::feasible_assignment(r.assoc, p.cap_max)) ++infeasible;
    if (r.objective <= exact.objective + 0.05 * testing::cost_spread(p)) ++within;
  }
  const bool pass = bound_failures == 0 && infeasible == 0 && within >= 950;
  return {"association-pipeline", pass,
          std::to_string(n) + " instances, bound failures " + std::to_string(bound_failures) + ", infeasible " +
              std::to_string(infeasible) + ", within 5% of spread " + std::to_string(within)};
}

Verdict v_tradeoff(RunCache& cache) {
  const std::vector<double> Vs{1e8, 1e9, 1e10, 1e11};
  bool pass = true;
  std::string detail;
  for (PolicyKind p : kCompared) {
    std::vector<double> cost, queue;
    for (double V : Vs) {
      const auto [c, q] = cache.mean(with_axis_value(NetworkConfig{}, SweepAxis::V, V), p);
      cost.push_back(c);
      queue.push_back(q);
    }
    const int bc = breaks(cost, false), bq = breaks(queue, true);
    pass = pass && bc <= 1 && bq <= 1;
    detail += std::string(policy_name(p)) + " cost " + series(cost) + " breaks " + std::to_string(bc) + ", queue " +
              series(queue) + " breaks " + std::to_string(bq) + "; ";
  }
  return {"v-tradeoff", pass, detail};
}

Verdict policy_ranking(RunCache& cache) {
  const NetworkConfig cfg;
  const double omora = cache.mean(cfg, PolicyKind::OmoraSdp).first;
  const double nl = cache.mean(cfg, PolicyKind::NL).first;
  const double nm = cache.mean(cfg, PolicyKind::NM).first;
  return {"policy-ranking", omora < nl && omora < nm,
          "V=1e10 cost omora-sdp " + fmt("%.6g", omora) + ", nl " + fmt("%.6g", nl) + ", nm " + fmt("%.6g", nm)};
}

Verdict rate_floor_trend(RunCache& cache) {
  const std::vector<double> rates{0.5e6, 1.0e6, 1.5e6, 2.0e6};
  std::map<PolicyKind, std::vector<double>> cost;
  for (PolicyKind p : kCompared) {
    for (double r : rates) cost[p].push_back(cache.mean(with_axis_value(NetworkConfig{}, SweepAxis::RateMin, r), p).first);
  }
  bool pass = true;
  std::string detail;
  for (PolicyKind p : kCompared) {
    const int b = breaks(cost[p], true);
    pass = pass && b == 0;
    detail += std::string(policy_name(p)) + " " + series(cost[p]) + " breaks " + std::to_string(b) + "; ";
  }
  const auto& o = cost[PolicyKind::OmoraSdp];
  for (PolicyKind p : {PolicyKind::NL, PolicyKind::NM}) {
    const double lo = cost[p].front() - o.front();
    const double hi = cost[p].back() - o.back();
    pass = pass && hi > lo;
    detail += std::string(policy_name(p)) + " gap " + fmt("%.6g", lo) + " -> " + fmt("%.6g", hi) + "; ";
  }
  return {"rate-floor-trend", pass, detail};
}

Verdict migration_unit_trend(RunCache& cache) {
  const std::vector<double> eps{0.01, 0.1, 1.0, 10.0};
  std::vector<double> omora, nm;
  for (double e : eps) {
    const NetworkConfig cfg = with_axis_value(NetworkConfig{}, SweepAxis::MigrationUnit, e);
    omora.push_back(cache.mean(cfg, PolicyKind::OmoraSdp).first);
    nm.push_back(cache.mean(cfg, PolicyKind::NM).first);
  }
  const int b = breaks(omora, true);
  const bool nm_flat = std::all_of(nm.begin(), nm.end(), [&](double v) { return v == nm.front(); });
  const double rel = std::abs(omora.back() - nm.back()) / nm.back();
  return {"migration-unit-trend", b == 0 && nm_flat && rel <= 0.05,
          "omora-sdp " + series(omora) + " breaks " + std::to_string(b) + ", nm " + series(nm) +
              (nm_flat ? " constant" : " not constant") + ", gap at eps=10 " + fmt("%.4g", 100 * rel) + "%"};
}

Verdict stability(RunCache& cache) {
  const NetworkConfig cfg;
  const double limit = 0.05 * cfg.arrival_high;
  double worst = 0.0;
  int drift = 0;
  for (int s = 1; s <= kSeeds; ++s) {
    const RunStats& r = cache.get(cfg, PolicyKind::OmoraSdp, static_cast<std::uint64_t>(s));
    worst = std::max(worst, r.final_queue_per_slot);
    drift += r.drift_violations;
  }
  return {"stability", worst < limit && drift == 0,
          "worst mean Q(T+1)/T " + fmt("%.6g", worst) + " vs limit " + fmt("%.6g", limit) +
              ", drift-bound violations " + std::to_string(drift)};
}

Verdict determinism() {
  const NetworkConfig cfg;
  std::string bytes[2];
  for (std::string& b : bytes) {
    const RunSummary s = run(cfg, PolicyKind::OmoraSdp, 1);
    std::ostringstream os;
    write_summary_csv(os, {summary_row(s)});
    write_trace_csv(os, s.trace);
    b = os.str();
  }
  return {"determinism", bytes[0] == bytes[1],
          "omora-sdp seed 1, " + std::to_string(bytes[0].size()) + " CSV bytes per run"};
}

}  // namespace

int main() {
  RunCache cache;
  const std::vector<std::function<Verdict()>> criteria{
      closed_form_oracle,
      migration_identity,
      association_pipeline,
      [&] { return v_tradeoff(cache); },
      [&] { return policy_ranking(cache); },
      [&] { return rate_floor_trend(cache); },
      [&] { return migration_unit_trend(cache); },
      [&] { return stability(cache); },
      determinism,
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const Verdict v = c();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed (" << cache.runs()
            << " simulation runs)" << std::endl;
  return failed == 0 ? 0 : 1;
}
