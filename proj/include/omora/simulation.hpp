#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "omora/config.hpp"
#include "omora/controller.hpp"
#include "omora/model.hpp"

namespace omora {

/// One row of the per-slot trace CSV.
struct TraceRow {
  int t = 0;
  int mid = 0;
  double queue = 0.0;    // Q_u(t)
  double arrival = 0.0;  // A_u(t)
  double local = 0.0;    // D_u^l(t)
  double offloaded = 0.0;
  double tx_power = 0.0;
  double cpu_freq = 0.0;
  int server = 0;
  double service_cost = 0.0;
};

struct RunSummary {
  PolicyKind policy = PolicyKind::OmoraSdp;
  std::uint64_t seed = 0;
  std::string cfg_hash;
  int slots = 0;           // T
  int averaged_slots = 0;  // slots entering the time averages

  // Time averages over the averaged slots; per-slot sums over MIDs.
  double avg_service_cost = 0.0;
  double avg_queue_bits = 0.0;
  double avg_power = 0.0;
  double avg_migration = 0.0;
  double rate_violation_frac = 0.0;  // share of (slot, MID) pairs below R_th
  double wasted_total = 0.0;         // bits of service beyond the backlog, whole run

  std::vector<double> final_queues;  // Q_u(T + 1)
  int drift_bound_violations = 0;    // slots where the realised drift bound failed
  int non_monotone_steps = 0;        // alternation steps that raised the objective
  int infeasible_flags = 0;          // (slot, MID) pairs flagged rate-infeasible

  std::vector<SlotMetrics> slot_metrics;
  std::vector<TraceRow> trace;
};

/// Slots 1..T: draw arrivals, move MIDs (from slot 2), draw fading, decide,
/// account costs and service, update queues. Randomness comes from streams
/// keyed by `seed` only, so every policy sees the same environment.
/// Averages cover slots after `warmup`, or every slot when T <= warmup.
RunSummary run(const NetworkConfig& cfg, PolicyKind policy, std::uint64_t seed,
               const ControllerOptions& options = {});

enum class SweepAxis { V, RateMin, MigrationUnit };

/// CLI names: V, R_th, eps.
SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);
NetworkConfig with_axis_value(const NetworkConfig& cfg, SweepAxis axis, double value);

/// One row of the summary CSV. `axis_value` is empty outside sweeps and
/// `seed` is "mean" for seed-averaged rows.
struct SummaryRow {
  std::string axis_value;
  std::string policy;
  std::string seed;
  double avg_service_cost = 0.0;
  double avg_queue_bits = 0.0;
  double rate_violation_frac = 0.0;
  double avg_power = 0.0;
  double avg_migration = 0.0;
};

SummaryRow summary_row(const RunSummary& s, const std::string& axis_value = "");
/// Column-wise mean of `rows`, labelled with the first row's axis value and policy.
SummaryRow mean_row(const std::vector<SummaryRow>& rows);

/// For each value, each policy: one row per seed followed by a seed-mean row.
std::vector<SummaryRow> sweep(const NetworkConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                              const std::vector<PolicyKind>& policies, const std::vector<std::uint64_t>& seeds,
                              const ControllerOptions& options = {});

/// "%.9g" formatting used by every CSV writer.
std::string format_number(double v);

inline constexpr const char* kSummaryHeader =
    "axis_value,policy,seed,avg_service_cost,avg_queue_bits,rate_violation_frac,avg_power,avg_migration";
inline constexpr const char* kTraceHeader = "t,mid,Q,A,D_local,D_off,p_tx,f,assoc,cost";

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

}  // namespace omora
