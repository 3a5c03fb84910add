#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "omora/allocator.hpp"
#include "omora/association.hpp"
#include "omora/channel.hpp"
#include "omora/config.hpp"
#include "omora/random.hpp"

namespace omora::testing {

struct AllocCase {
  NetworkConfig cfg;
  AllocContext ctx;
};

/// Allocation contexts spanning the evaluation ranges: V from 1e6 to 1e14,
/// thresholds up to 2 Mbit/s, queues up to 2e7 bits, distances up to 140 m.
inline AllocCase random_alloc_case(RngStream& s) {
  AllocCase c;
  c.cfg.lyapunov_V = std::pow(10.0, s.uniform(6.0, 14.0));
  c.cfg.rate_min = s.uniform() < 0.3 ? 0.0 : s.uniform(0.0, 2e6);
  c.ctx.queue = s.uniform() < 0.1 ? 0.0 : s.uniform(0.0, 2e7);
  c.ctx.arrival = s.uniform(0.95e6, 1.5e6);
  c.ctx.gain = channel_gain(s.exponential(1.0), s.uniform(1.0, 140.0), c.cfg);
  c.ctx.other_rate = s.uniform(0.0, 3e6);
  return c;
}

/// Per-slot association instance drawn like a simulated slot: queues up to
/// 3e7 bits, random previous servers, distances 1-140 m, powers in
/// [0, P_max], V from 1e8 to 1e13 and eps from 0.01 to 10.
inline AssignmentProblem random_slot_problem(RngStream& s, int U = 10, int M = 3) {
  NetworkConfig cfg;
  cfg.num_mids = U;
  cfg.num_servers = M;
  cfg.cap_max = U;
  cfg.lyapunov_V = std::pow(10.0, std::floor(s.uniform(8.0, 14.0)));
  const double eps[] = {0.01, 0.1, 1.0, 10.0};
  cfg.migration_unit = eps[static_cast<int>(s.uniform() * 4)];
  Eigen::MatrixXd rates(U, M);
  std::vector<double> queues(U);
  AssocMatrix prev(U, M);
  for (int u = 0; u < U; ++u) {
    queues[u] = s.uniform(0.0, 3e7);
    prev.set(u, static_cast<int>(s.uniform() * M), true);
    const double power = cfg.p_max * s.uniform();
    for (int m = 0; m < M; ++m) {
      const double gain = channel_gain(s.exponential(1.0), s.uniform(1.0, 140.0), cfg);
      rates(u, m) = offload_rate(gain, power, cfg);
    }
  }
  return build_costs(queues, rates, prev, cfg);
}

/// Brute-force optimum over all M^U assignments.
inline double enumerate_optimum(const AssignmentProblem& p, AssocMatrix* argmin = nullptr) {
  const int U = static_cast<int>(p.costs.rows());
  const int M = static_cast<int>(p.costs.cols());
  std::vector<int> pick(U, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> load(M, 0);
    double v = 0.0;
    bool ok = true;
    for (int u = 0; u < U; ++u) {
      v += p.costs(u, pick[u]);
      if (++load[pick[u]] > p.cap_max) ok = false;
    }
    if (ok && v < best) {
      best = v;
      if (argmin != nullptr) *argmin = AssocMatrix::from_servers(pick, M);
    }
    int u = 0;
    while (u < U && ++pick[u] == M) pick[u++] = 0;
    if (u == U) break;
  }
  return best;
}

/// max - min over all cost entries.
inline double cost_spread(const AssignmentProblem& p) { return p.costs.maxCoeff() - p.costs.minCoeff(); }

inline bool feasible_assignment(const AssocMatrix& x, int cap_max) {
  for (int u = 0; u < x.mids(); ++u) {
    if (x.row_sum(u) != 1) return false;
  }
  for (int m = 0; m < x.servers(); ++m) {
    if (x.column_sum(m) > cap_max) return false;
  }
  return true;
}

}  // namespace omora::testing
