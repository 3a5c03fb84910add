#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omora/config.hpp"
#include "omora/model.hpp"
#include "omora/sdp.hpp"

namespace omora {

/// Raised when an association stage receives or produces data that breaks
/// its contract. `dump` carries a JSON snapshot of the offending instance.
class AssociationError : public std::runtime_error {
 public:
  AssociationError(const std::string& what, std::string dump)
      : std::runtime_error(what), dump_(std::move(dump)) {}
  [[nodiscard]] const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

/// Linear-cost capacitated assignment: minimise sum a_u^m x_u^m with one
/// server per MID and at most `cap_max` MIDs per server.
struct AssignmentProblem {
  Eigen::MatrixXd costs;  // a_u^m, U x M
  int cap_max = 0;
  AssocMatrix prev_assoc;
};

/// a_u^m = 1/2 V phi eps (1 - 2 x_u^m(t-1)) - Q_u r_{u,m} tau, where
/// rates(u, m) is MID u's uplink rate towards server m at its current power.
AssignmentProblem build_costs(std::span<const double> queues, const Eigen::MatrixXd& rates,
                              const AssocMatrix& prev_assoc, const NetworkConfig& cfg);

/// sum_u a_u^{m(u)} for a one-hot association.
double assignment_objective(const AssignmentProblem& problem, const AssocMatrix& assoc);

/// Lifted relaxation: one (M+1)x(M+1) block W_u = [w_u; 1][w_u; 1]^T per MID
/// with the rank constraint dropped.
///   objective   Tr(V_u^o W_u),          V_u^o   = [0, a_u/2; a_u^T/2, 0]
///   link        Tr(V_{u,m}^x W_u) = 0,  V_{u,m}^x = [diag(e_m), -e_m/2; -e_m^T/2, 0]
///   one server  sum_m Tr(V_{u,m}^e W_u) = 1,  V_{u,m}^e = [0, e_m/2; e_m^T/2, 0]
///   corner      W_u[M][M] = 1
///   capacity    sum_u Tr(V_{u,m}^e W_u) <= N_max
/// Constraint order: for each MID the M links, the one-server row and the
/// corner; then the M capacity rows.
sdp::BlockSdp build_sdr(const AssignmentProblem& problem);

struct SdrSolution {
  std::vector<sdp::BlockMatrix> W;  // per MID
  double objective = 0.0;
  double dual_objective = 0.0;
  sdp::SdpStatus status = sdp::SdpStatus::NumericalFailure;
  int iterations = 0;
};

/// Solves the relaxation and rescales every block by its corner entry.
/// Throws AssociationError when the solver does not report optimality.
SdrSolution solve_sdr(const AssignmentProblem& problem, const sdp::SdpOptions& options = {});

/// Throws AssociationError unless every W_u is PSD (min eigenvalue >= -1e-8),
/// has unit corner (1e-8), satisfies the link rows (1e-6), the one-server
/// row (1e-6) and the capacity rows (1e-6).
void check_sdr(const AssignmentProblem& problem, const SdrSolution& solution);

/// z_u^m = W_u[m][m] clipped to [0, 1]. Rows drifting from 1 by more than
/// 1e-9 are renormalised; by more than 1e-6 the solution is rejected.
Eigen::MatrixXd extract_fractional(const AssignmentProblem& problem, const SdrSolution& solution);

struct BipartiteEdge {
  int mid = 0;
  int server = 0;
  int slot = 0;  // 0-based copy index within the server
  double weight = 0.0;
};

/// MIDs on the left, J_m = ceil(sum_u z_u^m) copies of each server on the right.
struct BipartiteGraph {
  int mids = 0;
  std::vector<int> slots;  // J_m per server
  std::vector<BipartiteEdge> edges;

  [[nodiscard]] int total_slots() const;
  /// Column index of copy `slot` of `server` in the flattened right side.
  [[nodiscard]] int column(int server, int slot) const;
  [[nodiscard]] double incident_weight_of_mid(int mid) const;
  [[nodiscard]] double incident_weight_of_slot(int server, int slot) const;
};

/// Slot-node construction: per server, MIDs sorted by z descending (ties by
/// index) fill consecutive unit-capacity copies; a MID straddling a copy
/// boundary is split across the two copies. Throws AssociationError when a
/// row of z does not sum to 1 within 1e-6.
BipartiteGraph build_bipartite(const Eigen::MatrixXd& z);

/// Maximum-weight matching saturating every row of a rows x cols weight
/// matrix (rows <= cols); entries where `allowed` is false are never used.
/// Returns the matched column per row. Throws std::runtime_error when no
/// row-saturating matching exists.
std::vector<int> max_weight_matching(const Eigen::MatrixXd& weight,
                                     const std::vector<std::vector<bool>>& allowed);

/// Complete max-weight matching on the graph; x_u^m = 1 when MID u is
/// matched to a copy of server m.
AssocMatrix match_and_extract(const BipartiteGraph& graph, int servers);

struct AssociationResult {
  AssocMatrix assoc;
  double objective = 0.0;  // sum a_u^m x_u^m of `assoc`
  double relaxed_objective = 0.0;
  Eigen::MatrixXd fractional;
  int sdp_iterations = 0;
};

/// Relaxation, fractional extraction, slot graph and matching in sequence.
AssociationResult solve_sdr_rounding(const AssignmentProblem& problem, const sdp::SdpOptions& options = {});

/// Exact integer optimum via successive-shortest-path min-cost flow
/// (source -> MID -> server -> sink, server capacity cap_max).
AssociationResult solve_exact(const AssignmentProblem& problem);

/// JSON snapshots for failure triage.
std::string to_json(const AssignmentProblem& problem);
std::string to_json(const SdrSolution& solution);

}  // namespace omora
