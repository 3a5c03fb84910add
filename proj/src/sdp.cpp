#include "omora/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace omora::sdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
  int constraint = 0;
  std::vector<SymEntry> entries;
};

// Equality-only problem: original blocks followed by one 1x1 slack block per
// inequality; data already normalised.
struct StandardForm {
  std::vector<int> dims;
  std::vector<BlockMatrix> C;
  Eigen::VectorXd b;
  std::vector<std::vector<Term>> terms;  // per block
  std::vector<int> slack_block;          // per constraint, -1 for equalities
  int original_blocks = 0;
  int order = 0;                         // sum of block dimensions
};

double inner(const BlockMatrix& a, const BlockMatrix& b) { return (a.array() * b.array()).sum(); }

// tr(A G) for symmetric sparse A and a general square G.
double trace_product(const std::vector<SymEntry>& entries, const BlockMatrix& g) {
  double s = 0.0;
  for (const auto& e : entries) {
    s += e.row == e.col ? e.value * g(e.row, e.row) : e.value * (g(e.row, e.col) + g(e.col, e.row));
  }
  return s;
}

// out = X * A for sparse symmetric A.
void multiply_sparse_right(const BlockMatrix& x, const std::vector<SymEntry>& entries, BlockMatrix& out) {
  out.setZero(x.rows(), x.cols());
  for (const auto& e : entries) {
    out.col(e.col) += e.value * x.col(e.row);
    if (e.row != e.col) out.col(e.row) += e.value * x.col(e.col);
  }
}

void add_sparse(const std::vector<SymEntry>& entries, double scale, BlockMatrix& out) {
  for (const auto& e : entries) {
    out(e.row, e.col) += scale * e.value;
    if (e.row != e.col) out(e.col, e.row) += scale * e.value;
  }
}

// Largest alpha with X + alpha dX PSD (infinity if unbounded, 0 on failure).
double max_step(const BlockMatrix& x, const BlockMatrix& dx) {
  if (x.rows() == 1) return dx(0, 0) >= 0.0 ? kInf : -x(0, 0) / dx(0, 0);
  Eigen::LLT<BlockMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  BlockMatrix t = llt.matrixL().solve(dx);
  BlockMatrix s = llt.matrixL().solve(t.transpose());
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<BlockMatrix> es(s, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

BlockMatrix symmetrize(const BlockMatrix& a) { return 0.5 * (a + a.transpose()); }

StandardForm to_standard_form(const BlockSdp& p, double cscale, double bscale) {
  StandardForm sf;
  sf.original_blocks = static_cast<int>(p.block_dims.size());
  sf.dims = p.block_dims;
  for (const auto& c : p.objective) sf.C.push_back(c / cscale);
  const int m = static_cast<int>(p.constraints.size());
  sf.b.resize(m);
  sf.slack_block.assign(m, -1);
  sf.terms.resize(sf.dims.size());
  for (int i = 0; i < m; ++i) {
    const auto& con = p.constraints[i];
    sf.b(i) = con.rhs / bscale;
    for (const auto& t : con.terms) sf.terms[t.block].push_back({i, t.entries});
    if (con.sense != Sense::Equal) {
      const int blk = static_cast<int>(sf.dims.size());
      sf.dims.push_back(1);
      sf.C.push_back(BlockMatrix::Zero(1, 1));
      sf.terms.emplace_back();
      sf.terms.back().push_back({i, {{0, 0, con.sense == Sense::LessEqual ? 1.0 : -1.0}}});
      sf.slack_block[i] = blk;
    }
  }
  for (int d : sf.dims) sf.order += d;
  return sf;
}

// A(K) for per-block matrices K.
Eigen::VectorXd apply_operator(const StandardForm& sf, const std::vector<BlockMatrix>& k) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sf.b.size());
  for (std::size_t blk = 0; blk < sf.dims.size(); ++blk) {
    for (const auto& t : sf.terms[blk]) out(t.constraint) += trace_product(t.entries, k[blk]);
  }
  return out;
}

// sum_i y_i A_i on one block.
BlockMatrix apply_adjoint(const StandardForm& sf, int blk, const Eigen::VectorXd& y) {
  BlockMatrix out = BlockMatrix::Zero(sf.dims[blk], sf.dims[blk]);
  for (const auto& t : sf.terms[blk]) add_sparse(t.entries, y(t.constraint), out);
  return out;
}

// Gram matrix <A_i, A_j> of the constraint operator.
Eigen::MatrixXd gram(const StandardForm& sf) {
  const int m = static_cast<int>(sf.b.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t blk = 0; blk < sf.dims.size(); ++blk) {
    const auto& terms = sf.terms[blk];
    for (const auto& tj : terms) {
      BlockMatrix aj = BlockMatrix::Zero(sf.dims[blk], sf.dims[blk]);
      add_sparse(tj.entries, 1.0, aj);
      for (const auto& ti : terms) g(ti.constraint, tj.constraint) += trace_product(ti.entries, aj);
    }
  }
  return g;
}

}  // namespace

int BlockSdp::add_block(int dim) {
  if (dim < 1 || dim > kMaxBlockDim) throw std::invalid_argument("block dimension out of range");
  block_dims.push_back(dim);
  objective.push_back(BlockMatrix::Zero(dim, dim));
  return static_cast<int>(block_dims.size()) - 1;
}

void BlockSdp::validate() const {
  if (objective.size() != block_dims.size()) throw std::invalid_argument("sdp: objective/block count mismatch");
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    const int n = block_dims[b];
    if (n < 1 || n > kMaxBlockDim) throw std::invalid_argument("sdp: block dimension out of range");
    if (objective[b].rows() != n || objective[b].cols() != n) {
      throw std::invalid_argument("sdp: objective block " + std::to_string(b) + " has wrong size");
    }
    if ((objective[b] - objective[b].transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + objective[b].cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("sdp: objective block " + std::to_string(b) + " is not symmetric");
    }
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (const auto& t : constraints[i].terms) {
      if (t.block < 0 || t.block >= static_cast<int>(block_dims.size())) {
        throw std::invalid_argument("sdp: constraint " + std::to_string(i) + " references a missing block");
      }
      for (const auto& e : t.entries) {
        if (e.row < 0 || e.col < 0 || e.row >= block_dims[t.block] || e.col >= block_dims[t.block]) {
          throw std::invalid_argument("sdp: constraint " + std::to_string(i) + " entry out of range");
        }
      }
    }
  }
}

BlockMatrix BlockSdp::dense_coefficient(int constraint, int block) const {
  BlockMatrix a = BlockMatrix::Zero(block_dims[block], block_dims[block]);
  for (const auto& t : constraints[constraint].terms) {
    if (t.block == block) add_sparse(t.entries, 1.0, a);
  }
  return a;
}

const char* to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::MaxIterations: return "max-iters";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

SdpSolution solve(const BlockSdp& problem, const SdpOptions& options) {
  problem.validate();

  double cscale = 0.0;
  for (const auto& c : problem.objective) cscale = std::max(cscale, c.cwiseAbs().maxCoeff());
  double bscale = 0.0;
  for (const auto& c : problem.constraints) bscale = std::max(bscale, std::abs(c.rhs));
  if (cscale == 0.0) cscale = 1.0;
  if (bscale == 0.0) bscale = 1.0;

  const StandardForm sf = to_standard_form(problem, cscale, bscale);
  const int nblocks = static_cast<int>(sf.dims.size());
  const int m = static_cast<int>(sf.b.size());

  std::vector<BlockMatrix> X(nblocks), Z(nblocks), Zinv(nblocks), Rd(nblocks);
  std::vector<BlockMatrix> dX(nblocks), dZ(nblocks), dXa(nblocks), dZa(nblocks), K(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    X[b] = BlockMatrix::Identity(sf.dims[b], sf.dims[b]);
    Z[b] = BlockMatrix::Identity(sf.dims[b], sf.dims[b]);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd schur(m, m);
  // Least-norm correction keeping A(dX) = r_p exact when the Schur system
  // becomes ill-conditioned near the boundary.
  const Eigen::LDLT<Eigen::MatrixXd> gram_ldlt(gram(sf));
  BlockMatrix xa, g;

  double cnorm = 0.0;
  for (const auto& c : sf.C) cnorm += c.squaredNorm();
  cnorm = std::sqrt(cnorm);
  const double bmax = sf.b.lpNorm<Eigen::Infinity>() * bscale;

  SdpSolution sol;
  sol.status = SdpStatus::MaxIterations;
  auto fill = [&](SdpStatus status, int iters, std::string msg) {
    sol.status = status;
    sol.iterations = iters;
    sol.message = std::move(msg);
  };

  int iter = 0;
  for (;; ++iter) {
    // Residuals and convergence test.
    const Eigen::VectorXd rp = sf.b - apply_operator(sf, X);
    double dinf2 = 0.0;
    double xz = 0.0;
    double pobj = 0.0;
    for (int b = 0; b < nblocks; ++b) {
      Rd[b] = sf.C[b] - apply_adjoint(sf, b, y) - Z[b];
      dinf2 += Rd[b].squaredNorm();
      xz += inner(X[b], Z[b]);
      pobj += inner(sf.C[b], X[b]);
    }
    const double dobj = sf.b.dot(y);
    const double mu = xz / sf.order;
    sol.primal_infeasibility = rp.lpNorm<Eigen::Infinity>() * bscale / (1.0 + bmax);
    sol.dual_infeasibility = std::sqrt(dinf2) / (1.0 + cnorm);
    sol.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.primal_objective = pobj * cscale * bscale;
    sol.dual_objective = dobj * cscale * bscale;

    if (sol.relative_gap <= options.gap_tolerance && sol.primal_infeasibility <= options.feasibility_tolerance &&
        sol.dual_infeasibility <= options.feasibility_tolerance) {
      fill(SdpStatus::Optimal, iter, "converged");
      break;
    }
    if (iter >= options.max_iterations) {
      fill(SdpStatus::MaxIterations, iter, "iteration limit reached");
      break;
    }
    double xmax = 0.0;
    for (int b = 0; b < nblocks; ++b) xmax = std::max(xmax, X[b].cwiseAbs().maxCoeff());
    if (xmax > 1e12 || y.cwiseAbs().maxCoeff() > 1e12) {
      fill(SdpStatus::Infeasible, iter, "iterates diverged; problem is likely infeasible or unbounded");
      break;
    }

    // Z^{-1} and the Schur complement M_ij = sum_b tr(A_i X A_j Z^{-1}).
    bool ok = true;
    for (int b = 0; b < nblocks && ok; ++b) {
      Eigen::LLT<BlockMatrix> llt(Z[b]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      Zinv[b] = llt.solve(BlockMatrix::Identity(sf.dims[b], sf.dims[b]));
    }
    if (!ok) {
      fill(SdpStatus::NumericalFailure, iter, "dual slack lost positive definiteness");
      break;
    }
    schur.setZero();
    for (int b = 0; b < nblocks; ++b) {
      const auto& terms = sf.terms[b];
      for (const auto& tj : terms) {
        multiply_sparse_right(X[b], tj.entries, xa);
        g.noalias() = xa * Zinv[b];
        for (const auto& ti : terms) schur(ti.constraint, tj.constraint) += trace_product(ti.entries, g);
      }
    }
    schur = 0.5 * (schur + schur.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      const double reg = 1e-13 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
      schur.diagonal().array() += reg;
      schur_llt.compute(schur);
      if (schur_llt.info() != Eigen::Success) {
        fill(SdpStatus::NumericalFailure, iter, "Schur complement is not positive definite");
        break;
      }
    }

    // Solves for (dX, dy, dZ) given the centring target and second-order term.
    auto direction = [&](double sigma_mu, bool corrector, Eigen::VectorXd& dy) {
      for (int b = 0; b < nblocks; ++b) {
        K[b] = -X[b] - X[b] * Rd[b] * Zinv[b];
        if (sigma_mu != 0.0) K[b] += sigma_mu * Zinv[b];
        if (corrector) K[b] -= dXa[b] * dZa[b] * Zinv[b];
      }
      dy = schur_llt.solve(rp - apply_operator(sf, K));
      for (int b = 0; b < nblocks; ++b) {
        dZ[b] = Rd[b] - apply_adjoint(sf, b, dy);
        BlockMatrix dxb = -X[b] - X[b] * dZ[b] * Zinv[b];
        if (sigma_mu != 0.0) dxb += sigma_mu * Zinv[b];
        if (corrector) dxb -= dXa[b] * dZa[b] * Zinv[b];
        dX[b] = symmetrize(dxb);
      }
      const Eigen::VectorXd miss = rp - apply_operator(sf, dX);
      const Eigen::VectorXd lift = gram_ldlt.solve(miss);
      for (int b = 0; b < nblocks; ++b) dX[b] += apply_adjoint(sf, b, lift);
    };
    auto step_lengths = [&](double& ap, double& ad) {
      ap = kInf;
      ad = kInf;
      for (int b = 0; b < nblocks; ++b) {
        ap = std::min(ap, max_step(X[b], dX[b]));
        ad = std::min(ad, max_step(Z[b], dZ[b]));
      }
    };

    // Predictor.
    Eigen::VectorXd dy;
    direction(0.0, false, dy);
    double ap = 0.0;
    double ad = 0.0;
    step_lengths(ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xz_aff = 0.0;
    for (int b = 0; b < nblocks; ++b) {
      xz_aff += inner(X[b] + ap * dX[b], Z[b] + ad * dZ[b]);
      dXa[b] = dX[b];
      dZa[b] = dZ[b];
    }
    const double mu_aff = xz_aff / sf.order;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    direction(sigma * mu, true, dy);
    step_lengths(ap, ad);
    constexpr double kStepFraction = 0.95;
    ap = std::min(1.0, kStepFraction * ap);
    ad = std::min(1.0, kStepFraction * ad);
    if (ap <= 0.0 || ad <= 0.0 || !std::isfinite(ap) || !std::isfinite(ad)) {
      fill(SdpStatus::NumericalFailure, iter, "no admissible step length");
      break;
    }
    for (int b = 0; b < nblocks; ++b) {
      X[b] += ap * dX[b];
      Z[b] += ad * dZ[b];
    }
    y += ad * dy;
  }

  // Undo the normalisation.
  sol.X.resize(sf.original_blocks);
  sol.Z.resize(sf.original_blocks);
  for (int b = 0; b < sf.original_blocks; ++b) {
    sol.X[b] = X[b] * bscale;
    sol.Z[b] = Z[b] * cscale;
  }
  sol.slack.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (sf.slack_block[i] >= 0) sol.slack[i] = X[sf.slack_block[i]](0, 0) * bscale;
  }
  sol.y = y * cscale;
  return sol;
}

ResidualReport check_solution(const BlockSdp& problem, const SdpSolution& solution) {
  ResidualReport r;
  const int nblocks = static_cast<int>(problem.block_dims.size());
  if (static_cast<int>(solution.X.size()) != nblocks) throw std::invalid_argument("check_solution: block count mismatch");

  r.min_eigenvalue_overall = kInf;
  for (int b = 0; b < nblocks; ++b) {
    const BlockMatrix xs = symmetrize(solution.X[b]);
    Eigen::SelfAdjointEigenSolver<BlockMatrix> es(xs, Eigen::EigenvaluesOnly);
    r.min_eigenvalue.push_back(es.eigenvalues()(0));
    r.min_eigenvalue_overall = std::min(r.min_eigenvalue_overall, es.eigenvalues()(0));
    r.primal_objective += inner(problem.objective[b], solution.X[b]);
  }
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& c = problem.constraints[i];
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += trace_product(t.entries, solution.X[t.block]);
    double res = 0.0;
    switch (c.sense) {
      case Sense::Equal: res = lhs - c.rhs; break;
      case Sense::LessEqual: res = std::max(0.0, lhs - c.rhs); break;
      case Sense::GreaterEqual: res = std::max(0.0, c.rhs - lhs); break;
    }
    r.constraint_residual.push_back(res);
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(res));
    if (i < static_cast<std::size_t>(solution.y.size())) r.dual_objective += c.rhs * solution.y(static_cast<Eigen::Index>(i));
  }
  r.duality_gap = r.primal_objective - r.dual_objective;
  return r;
}

}  // namespace omora::sdp
