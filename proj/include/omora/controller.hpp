#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "omora/config.hpp"
#include "omora/model.hpp"
#include "omora/sdp.hpp"

namespace omora {

/// OMORA with relaxation-and-rounding association, OMORA with the exact
/// association oracle, no local computing (NL) and no migration (NM).
enum class PolicyKind { OmoraSdp, OmoraExact, NL, NM };

/// CLI names: omora-sdp, omora-exact, nl, nm. Throws std::invalid_argument
/// for anything else.
PolicyKind parse_policy(std::string_view name);
std::string_view policy_name(PolicyKind policy);

struct ControllerOptions {
  int max_iterations = 50;
  double relative_tolerance = 1e-6;
  sdp::SdpOptions sdp;
};

struct SlotDiagnostics {
  std::vector<double> objective_trace;  // P2 value after every iteration
  int iterations = 0;
  int best_iteration = 0;
  int non_monotone_steps = 0;
  int association_solves = 0;
  int sdp_iterations = 0;
  /// MIDs whose rate floor could not be met inside the power/frequency box.
  std::vector<bool> rate_infeasible;
};

struct SlotDecision {
  Decision decision;
  SlotDiagnostics diagnostics;
};

/// Capacity-respecting greedy association: (MID, server) pairs in
/// descending channel gain, ties by MID then server index.
AssocMatrix initial_association(const Eigen::MatrixXd& gains, int cap_max);

/// Realised per-MID outcome of a decision: rates, served bits, power,
/// migration and service cost. `queue` and `wasted` use state.queues.
std::vector<MidMetrics> evaluate_decision(const SlotState& state, const Decision& decision,
                                          const Eigen::MatrixXd& gains, const NetworkConfig& cfg);

/// sum_u Q_u (A_u - D_u) + V sum_u (P_u + phi c_u).
double p2_objective(const SlotState& state, const Decision& decision, const NetworkConfig& cfg);
double p2_objective(const SlotState& state, const Decision& decision, const Eigen::MatrixXd& gains,
                    const NetworkConfig& cfg);

/// Alternating per-slot minimisation of the drift-plus-penalty objective:
/// frequency, then power, then association, repeated until the relative
/// improvement drops below the tolerance or the iteration cap is hit.
/// NL pins f to 0; NM keeps the previous association (the greedy initial
/// one in a cold slot). Returns the best iterate. Solver failures are
/// rethrown with the slot index prepended.
SlotDecision decide_slot(const SlotState& state, const NetworkConfig& cfg, PolicyKind policy,
                         const ControllerOptions& options = {});

}  // namespace omora
