#include "omora/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "omora/allocator.hpp"
#include "omora/association.hpp"
#include "omora/channel.hpp"
#include "omora/cost.hpp"

namespace omora {
namespace {

struct Iterate {
  Decision decision;
  double objective = 0.0;
  int violations = 0;
};

int count_violations(const std::vector<MidMetrics>& mids) {
  return static_cast<int>(std::count_if(mids.begin(), mids.end(), [](const MidMetrics& m) { return m.rate_violation; }));
}

double objective_of(const SlotState& state, const std::vector<MidMetrics>& mids, const NetworkConfig& cfg) {
  double drift = 0.0;
  double penalty = 0.0;
  for (std::size_t u = 0; u < mids.size(); ++u) {
    drift += state.queues[u] * (state.arrivals[u] - mids[u].executed);
    penalty += mids[u].service_cost;
  }
  return drift + cfg.lyapunov_V * penalty;
}

SlotDecision decide(const SlotState& state, const NetworkConfig& cfg, PolicyKind policy,
                    const ControllerOptions& options) {
  const int U = static_cast<int>(state.positions.size());
  const int M = static_cast<int>(state.server_positions.size());
  const Eigen::MatrixXd gains = channel_gains(state, cfg);

  Decision cur;
  cur.assoc = state.prev_assoc.is_cold() ? initial_association(gains, cfg.cap_max) : state.prev_assoc;
  cur.tx_power.assign(U, 0.5 * cfg.p_max);
  cur.cpu_freq.assign(U, 0.0);

  SlotDecision out;
  auto& diag = out.diagnostics;
  diag.rate_infeasible.assign(U, false);
  std::vector<bool> infeasible(U, false);

  Iterate best;
  bool have_best = false;
  std::vector<double> solved_power;  // tx powers behind the last association solve
  const bool moves_assoc = policy != PolicyKind::NM;

  for (int k = 1; k <= options.max_iterations; ++k) {
    std::fill(infeasible.begin(), infeasible.end(), false);
    for (int u = 0; u < U; ++u) {
      const int m = *cur.assoc.server_of(u);
      AllocContext ctx{state.queues[u], state.arrivals[u], gains(u, m), 0.0};
      if (policy != PolicyKind::NL) {
        ctx.other_rate = offload_rate(ctx.gain, cur.tx_power[u], cfg);
        const AllocResult f = optimal_frequency(ctx, cfg);
        cur.cpu_freq[u] = f.value;
        if (!f.feasible) infeasible[u] = true;
      }
      ctx.other_rate = local_rate(cur.cpu_freq[u], cfg.comp_intensity);
      const AllocResult p = optimal_power(ctx, cfg);
      cur.tx_power[u] = p.value;
      if (!p.feasible) infeasible[u] = true;
    }

    if (moves_assoc && cur.tx_power != solved_power) {
      Eigen::MatrixXd rates(U, M);
      for (int u = 0; u < U; ++u) {
        for (int m = 0; m < M; ++m) rates(u, m) = offload_rate(gains(u, m), cur.tx_power[u], cfg);
      }
      const AssignmentProblem problem = build_costs(state.queues, rates, state.prev_assoc, cfg);
      const AssociationResult r = policy == PolicyKind::OmoraExact ? solve_exact(problem)
                                                                   : solve_sdr_rounding(problem, options.sdp);
      ++diag.association_solves;
      diag.sdp_iterations += r.sdp_iterations;
      solved_power = cur.tx_power;
      const double current = assignment_objective(problem, cur.assoc);
      const double margin = 1e-12 * std::max(1.0, std::abs(current));
      if (r.objective < current - margin) cur.assoc = r.assoc;
    }

    const std::vector<MidMetrics> mids = evaluate_decision(state, cur, gains, cfg);
    const double obj = objective_of(state, mids, cfg);
    const int violations = count_violations(mids);
    if (!diag.objective_trace.empty()) {
      const double prev = diag.objective_trace.back();
      if (obj > prev + 1e-9 * std::max(1.0, std::abs(prev))) ++diag.non_monotone_steps;
    }
    diag.objective_trace.push_back(obj);
    diag.iterations = k;

    if (!have_best || violations < best.violations || (violations == best.violations && obj < best.objective)) {
      best = {cur, obj, violations};
      have_best = true;
      diag.best_iteration = k;
      for (int u = 0; u < U; ++u) diag.rate_infeasible[u] = infeasible[u] || mids[u].rate_violation;
    }

    if (diag.objective_trace.size() >= 2) {
      const double prev = diag.objective_trace[diag.objective_trace.size() - 2];
      if (std::abs(prev - obj) <= options.relative_tolerance * std::max(1.0, std::abs(prev))) break;
    }
  }

  out.decision = std::move(best.decision);
  return out;
}

}  // namespace

PolicyKind parse_policy(std::string_view name) {
  if (name == "omora-sdp") return PolicyKind::OmoraSdp;
  if (name == "omora-exact") return PolicyKind::OmoraExact;
  if (name == "nl") return PolicyKind::NL;
  if (name == "nm") return PolicyKind::NM;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected omora-sdp, omora-exact, nl or nm)");
}

std::string_view policy_name(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::OmoraSdp: return "omora-sdp";
    case PolicyKind::OmoraExact: return "omora-exact";
    case PolicyKind::NL: return "nl";
    case PolicyKind::NM: return "nm";
  }
  return "unknown";
}

AssocMatrix initial_association(const Eigen::MatrixXd& gains, int cap_max) {
  const int U = static_cast<int>(gains.rows());
  const int M = static_cast<int>(gains.cols());
  if (static_cast<long long>(cap_max) * M < U) throw std::invalid_argument("initial_association: capacity too small");
  std::vector<int> pairs(static_cast<std::size_t>(U) * M);
  std::iota(pairs.begin(), pairs.end(), 0);
  std::stable_sort(pairs.begin(), pairs.end(), [&](int a, int b) { return gains(a / M, a % M) > gains(b / M, b % M); });
  AssocMatrix x(U, M);
  std::vector<int> load(M, 0);
  std::vector<bool> placed(U, false);
  for (int pair : pairs) {
    const int u = pair / M;
    const int m = pair % M;
    if (placed[u] || load[m] >= cap_max) continue;
    x.set(u, m, true);
    placed[u] = true;
    ++load[m];
  }
  return x;
}

std::vector<MidMetrics> evaluate_decision(const SlotState& state, const Decision& decision,
                                          const Eigen::MatrixXd& gains, const NetworkConfig& cfg) {
  const int U = static_cast<int>(state.positions.size());
  std::vector<MidMetrics> out(U);
  for (int u = 0; u < U; ++u) {
    const auto m = decision.assoc.server_of(u);
    if (!m) throw std::invalid_argument("evaluate_decision: MID " + std::to_string(u) + " is not associated");
    MidMetrics& r = out[u];
    const double r_local = local_rate(decision.cpu_freq[u], cfg.comp_intensity);
    const double r_off = offload_rate(gains(u, *m), decision.tx_power[u], cfg);
    r.total_rate = r_local + r_off;
    r.local = r_local * cfg.slot_length;
    r.offloaded = r_off * cfg.slot_length;
    r.executed = r.local + r.offloaded;
    r.queue = state.queues[u];
    r.wasted = r.executed - std::min(r.executed, r.queue);
    r.migration = migration_cost(state.prev_assoc.row(u), decision.assoc.row(u), cfg.migration_unit);
    const CostBreakdown c = cost_breakdown(decision.cpu_freq[u], decision.tx_power[u], r.migration, cfg);
    r.power = c.total_power;
    r.service_cost = c.service;
    r.rate_violation = r.total_rate < cfg.rate_min * (1.0 - 1e-9);
  }
  return out;
}

double p2_objective(const SlotState& state, const Decision& decision, const Eigen::MatrixXd& gains,
                    const NetworkConfig& cfg) {
  return objective_of(state, evaluate_decision(state, decision, gains, cfg), cfg);
}

double p2_objective(const SlotState& state, const Decision& decision, const NetworkConfig& cfg) {
  return p2_objective(state, decision, channel_gains(state, cfg), cfg);
}

SlotDecision decide_slot(const SlotState& state, const NetworkConfig& cfg, PolicyKind policy,
                         const ControllerOptions& options) {
  const std::string where = "slot " + std::to_string(state.t) + ": ";
  try {
    return decide(state, cfg, policy, options);
  } catch (const AssociationError& e) {
    throw AssociationError(where + e.what(), e.dump());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + e.what());
  }
}

}  // namespace omora
