#include "omora/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "omora/channel.hpp"
#include "omora/queueing.hpp"
#include "omora/random.hpp"

namespace omora {

RunSummary run(const NetworkConfig& config, PolicyKind policy, std::uint64_t seed, const ControllerOptions& options) {
  const NetworkConfig cfg = validate_config(config);
  const int U = cfg.num_mids;
  const int T = cfg.horizon;
  const Area area{cfg.area_width, cfg.area_height};

  RunSummary s;
  s.policy = policy;
  s.seed = seed;
  s.cfg_hash = config_hash(cfg);
  s.slots = T;
  s.final_queues.assign(U, 0.0);
  if (T == 0) return s;

  RngStream placement = rng_stream(seed, "placement");
  RngStream mobility = rng_stream(seed, "mobility");
  RngStream fading = rng_stream(seed, "fading");
  RngStream arrivals = rng_stream(seed, "arrivals");
  const WorkBounds bounds = work_bounds(cfg);

  SlotState state;
  state.server_positions = server_sites(cfg.num_servers, area);
  state.positions = initial_positions(U, area, placement);
  state.queues.assign(U, 0.0);
  state.prev_assoc = AssocMatrix(U, cfg.num_servers);

  const int first_averaged = T > cfg.warmup ? cfg.warmup + 1 : 1;
  s.averaged_slots = T - first_averaged + 1;
  s.slot_metrics.reserve(T);
  s.trace.reserve(static_cast<std::size_t>(T) * U);

  double cost_sum = 0.0, queue_sum = 0.0, power_sum = 0.0, migration_sum = 0.0;
  long long violations = 0;

  for (int t = 1; t <= T; ++t) {
    state.t = t;
    state.arrivals = draw_arrivals(cfg, arrivals);
    if (t >= 2) state.positions = step_mobility(state.positions, cfg.step_length, area, mobility);
    state.fading = draw_fading(U, cfg.num_servers, fading);

    const SlotDecision sd = decide_slot(state, cfg, policy, options);
    validate_decision(sd.decision, cfg);
    const Eigen::MatrixXd gains = channel_gains(state, cfg);
    SlotMetrics metrics{t, evaluate_decision(state, sd.decision, gains, cfg)};

    std::vector<double> served(U);
    double slot_cost = 0.0;
    double slot_queue = 0.0;
    double slot_power = 0.0;
    double slot_migration = 0.0;
    int slot_violations = 0;
    for (int u = 0; u < U; ++u) {
      const MidMetrics& m = metrics.mids[u];
      served[u] = m.executed;
      slot_cost += m.service_cost;
      slot_queue += state.queues[u];
      slot_power += m.power;
      slot_migration += m.migration;
      if (m.rate_violation) ++slot_violations;
      if (sd.diagnostics.rate_infeasible[u]) ++s.infeasible_flags;
      s.wasted_total += m.wasted;
      s.trace.push_back({t, u, state.queues[u], state.arrivals[u], m.local, m.offloaded, sd.decision.tx_power[u],
                         sd.decision.cpu_freq[u], *sd.decision.assoc.server_of(u), m.service_cost});
    }
    s.non_monotone_steps += sd.diagnostics.non_monotone_steps;

    const std::vector<double> next = update_queues(state.queues, served, state.arrivals);
    const double drift = lyapunov(next) - lyapunov(state.queues);
    const double bound =
        drift_penalty_bound(state.queues, state.arrivals, served, bounds, slot_cost, cfg.lyapunov_V);
    const double lhs = drift + cfg.lyapunov_V * slot_cost;
    if (lhs > bound + 1e-12 * (std::abs(bound) + std::abs(lhs))) ++s.drift_bound_violations;

    if (t >= first_averaged) {
      cost_sum += slot_cost;
      queue_sum += slot_queue;
      power_sum += slot_power;
      migration_sum += slot_migration;
      violations += slot_violations;
    }
    s.slot_metrics.push_back(std::move(metrics));
    state.queues = next;
    state.prev_assoc = sd.decision.assoc;
  }

  const double n = s.averaged_slots;
  s.avg_service_cost = cost_sum / n;
  s.avg_queue_bits = queue_sum / n;
  s.avg_power = power_sum / n;
  s.avg_migration = migration_sum / n;
  s.rate_violation_frac = static_cast<double>(violations) / (n * U);
  s.final_queues = state.queues;
  return s;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "V") return SweepAxis::V;
  if (name == "R_th") return SweepAxis::RateMin;
  if (name == "eps") return SweepAxis::MigrationUnit;
  throw std::invalid_argument("unknown sweep axis '" + name + "' (expected V, R_th or eps)");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::V: return "V";
    case SweepAxis::RateMin: return "R_th";
    case SweepAxis::MigrationUnit: return "eps";
  }
  return "unknown";
}

NetworkConfig with_axis_value(const NetworkConfig& cfg, SweepAxis axis, double value) {
  NetworkConfig c = cfg;
  switch (axis) {
    case SweepAxis::V: c.lyapunov_V = value; break;
    case SweepAxis::RateMin: c.rate_min = value; break;
    case SweepAxis::MigrationUnit: c.migration_unit = value; break;
  }
  return validate_config(c);
}

SummaryRow summary_row(const RunSummary& s, const std::string& axis_value) {
  return {axis_value,        std::string(policy_name(s.policy)), std::to_string(s.seed),
          s.avg_service_cost, s.avg_queue_bits,                   s.rate_violation_frac,
          s.avg_power,        s.avg_migration};
}

SummaryRow mean_row(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("mean_row: no rows");
  SummaryRow m{rows.front().axis_value, rows.front().policy, "mean"};
  for (const auto& r : rows) {
    m.avg_service_cost += r.avg_service_cost;
    m.avg_queue_bits += r.avg_queue_bits;
    m.rate_violation_frac += r.rate_violation_frac;
    m.avg_power += r.avg_power;
    m.avg_migration += r.avg_migration;
  }
  const double n = static_cast<double>(rows.size());
  m.avg_service_cost /= n;
  m.avg_queue_bits /= n;
  m.rate_violation_frac /= n;
  m.avg_power /= n;
  m.avg_migration /= n;
  return m;
}

std::vector<SummaryRow> sweep(const NetworkConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                              const std::vector<PolicyKind>& policies, const std::vector<std::uint64_t>& seeds,
                              const ControllerOptions& options) {
  if (values.empty()) throw std::invalid_argument("sweep: no axis values");
  if (policies.empty()) throw std::invalid_argument("sweep: no policies");
  if (seeds.empty()) throw std::invalid_argument("sweep: no seeds");
  std::vector<SummaryRow> rows;
  for (double v : values) {
    const NetworkConfig c = with_axis_value(cfg, axis, v);
    const std::string label = format_number(v);
    for (PolicyKind p : policies) {
      std::vector<SummaryRow> per_seed;
      for (std::uint64_t seed : seeds) per_seed.push_back(summary_row(run(c, p, seed, options), label));
      rows.insert(rows.end(), per_seed.begin(), per_seed.end());
      rows.push_back(mean_row(per_seed));
    }
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    os << r.axis_value << ',' << r.policy << ',' << r.seed << ',' << format_number(r.avg_service_cost) << ','
       << format_number(r.avg_queue_bits) << ',' << format_number(r.rate_violation_frac) << ','
       << format_number(r.avg_power) << ',' << format_number(r.avg_migration) << '\n';
  }
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceHeader << '\n';
  for (const auto& r : rows) {
    os << r.t << ',' << r.mid << ',' << format_number(r.queue) << ',' << format_number(r.arrival) << ','
       << format_number(r.local) << ',' << format_number(r.offloaded) << ',' << format_number(r.tx_power) << ','
       << format_number(r.cpu_freq) << ',' << r.server << ',' << format_number(r.service_cost) << '\n';
  }
}

namespace {

template <class Rows, class Writer>
void write_file(const std::string& path, const Rows& rows, Writer writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(os, rows);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  write_file(path, rows, [](std::ostream& os, const auto& r) { write_summary_csv(os, r); });
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  write_file(path, rows, [](std::ostream& os, const auto& r) { write_trace_csv(os, r); });
}

}  // namespace omora
