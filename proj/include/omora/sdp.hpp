#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace omora::sdp {

/// Largest supported block dimension. Blocks use fixed-capacity storage so
/// the interior-point loop never touches the heap for block algebra.
inline constexpr int kMaxBlockDim = 16;

using BlockMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxBlockDim, kMaxBlockDim>;

/// Entry of a symmetric matrix: (row, col) and its mirror both hold `value`.
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Sparse symmetric coefficient matrix restricted to one block.
struct BlockTerm {
  int block = 0;
  std::vector<SymEntry> entries;
};

enum class Sense { Equal, LessEqual, GreaterEqual };

/// sum_k <A_k, X_{block_k}>  (sense)  rhs
struct Constraint {
  std::vector<BlockTerm> terms;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

/// min sum_b <C_b, X_b>  s.t. linear constraints,  X_b PSD for every block.
struct BlockSdp {
  std::vector<int> block_dims;
  std::vector<BlockMatrix> objective;  // C_b, symmetric
  std::vector<Constraint> constraints;

  /// Appends a block with a zero objective and returns its index.
  int add_block(int dim);
  /// Throws std::invalid_argument on inconsistent dimensions, out-of-range
  /// entries or asymmetric objective blocks.
  void validate() const;
  /// Dense form of one constraint's coefficient matrix on block b.
  [[nodiscard]] BlockMatrix dense_coefficient(int constraint, int block) const;
};

enum class SdpStatus { Optimal, MaxIterations, Infeasible, NumericalFailure };

const char* to_string(SdpStatus status);

struct SdpOptions {
  double gap_tolerance = 1e-7;          // relative duality gap
  /// Primal: max_i |b_i - A_i(X)| / (1 + max_i |b_i|). Dual: Frobenius
  /// norm of C - A^T y - Z over 1 + ||C||, both on normalised data.
  double feasibility_tolerance = 1e-8;
  int max_iterations = 200;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  std::vector<BlockMatrix> X;  // primal, per block
  std::vector<BlockMatrix> Z;  // dual slack, per block
  std::vector<double> slack;   // per constraint; 0 for equalities
  Eigen::VectorXd y;           // dual multipliers, per constraint
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

/// Infeasible-start primal-dual path-following method (HKM direction,
/// Mehrotra predictor-corrector). Inequalities are turned into equalities
/// with one non-negative 1x1 slack block each. Data are normalised by the
/// largest objective and right-hand-side magnitudes before iterating and
/// the iterates start from identity matrices. Deterministic: the same
/// instance and options give a bit-identical iterate path.
SdpSolution solve(const BlockSdp& problem, const SdpOptions& options = {});

struct ResidualReport {
  std::vector<double> min_eigenvalue;  // per block
  /// Equality: lhs - rhs. Inequality: amount of violation (>= 0).
  std::vector<double> constraint_residual;
  double max_abs_residual = 0.0;
  double min_eigenvalue_overall = 0.0;
  double primal_objective = 0.0;  // recomputed <C, X>
  double dual_objective = 0.0;    // recomputed b^T y
  double duality_gap = 0.0;       // primal - dual
};

/// Independent feasibility/optimality audit of a solution.
ResidualReport check_solution(const BlockSdp& problem, const SdpSolution& solution);

}  // namespace omora::sdp
