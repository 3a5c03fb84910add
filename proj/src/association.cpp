#include "omora/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace omora {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Mass below this is treated as zero when building slot nodes.
constexpr double kMassTolerance = 1e-9;
// Slack allowed on a server's total mass before an extra copy is opened.
constexpr double kSlotTolerance = 1e-6;
constexpr double kCornerTolerance = 1e-8;

int mids_of(const AssignmentProblem& p) { return static_cast<int>(p.costs.rows()); }
int servers_of(const AssignmentProblem& p) { return static_cast<int>(p.costs.cols()); }

}  // namespace

AssignmentProblem build_costs(std::span<const double> queues, const Eigen::MatrixXd& rates,
                              const AssocMatrix& prev_assoc, const NetworkConfig& cfg) {
  const int U = static_cast<int>(rates.rows());
  const int M = static_cast<int>(rates.cols());
  if (static_cast<int>(queues.size()) != U) throw std::invalid_argument("build_costs: queue/rate size mismatch");
  if (prev_assoc.mids() != U || prev_assoc.servers() != M) {
    throw std::invalid_argument("build_costs: previous association has wrong shape");
  }
  const double handover = 0.5 * cfg.lyapunov_V * cfg.migration_weight * cfg.migration_unit;
  AssignmentProblem p;
  p.costs.resize(U, M);
  p.cap_max = cfg.cap_max;
  p.prev_assoc = prev_assoc;
  for (int u = 0; u < U; ++u) {
    for (int m = 0; m < M; ++m) {
      const double prev = prev_assoc.at(u, m) ? 1.0 : 0.0;
      p.costs(u, m) = handover * (1.0 - 2.0 * prev) - queues[u] * rates(u, m) * cfg.slot_length;
    }
  }
  return p;
}

double assignment_objective(const AssignmentProblem& problem, const AssocMatrix& assoc) {
  double s = 0.0;
  for (int u = 0; u < mids_of(problem); ++u) {
    for (int m = 0; m < servers_of(problem); ++m) {
      if (assoc.at(u, m)) s += problem.costs(u, m);
    }
  }
  return s;
}

sdp::BlockSdp build_sdr(const AssignmentProblem& problem) {
  const int U = mids_of(problem);
  const int M = servers_of(problem);
  const int last = M;  // index of the homogenising coordinate
  sdp::BlockSdp s;
  for (int u = 0; u < U; ++u) {
    const int b = s.add_block(M + 1);
    for (int m = 0; m < M; ++m) {
      s.objective[b](m, last) = 0.5 * problem.costs(u, m);
      s.objective[b](last, m) = 0.5 * problem.costs(u, m);
    }
    for (int m = 0; m < M; ++m) {
      s.constraints.push_back({{{b, {{m, m, 1.0}, {m, last, -0.5}}}}, sdp::Sense::Equal, 0.0});
    }
    sdp::BlockTerm one_server{b, {}};
    for (int m = 0; m < M; ++m) one_server.entries.push_back({m, last, 0.5});
    s.constraints.push_back({{one_server}, sdp::Sense::Equal, 1.0});
    s.constraints.push_back({{{b, {{last, last, 1.0}}}}, sdp::Sense::Equal, 1.0});
  }
  for (int m = 0; m < M; ++m) {
    sdp::Constraint cap{{}, sdp::Sense::LessEqual, static_cast<double>(problem.cap_max)};
    for (int u = 0; u < U; ++u) cap.terms.push_back({u, {{m, last, 0.5}}});
    s.constraints.push_back(std::move(cap));
  }
  return s;
}

SdrSolution solve_sdr(const AssignmentProblem& problem, const sdp::SdpOptions& options) {
  const sdp::BlockSdp relaxation = build_sdr(problem);
  const sdp::SdpSolution raw = sdp::solve(relaxation, options);
  SdrSolution out;
  out.W = raw.X;
  out.objective = 0.0;
  out.dual_objective = raw.dual_objective;
  out.status = raw.status;
  out.iterations = raw.iterations;
  if (raw.status != sdp::SdpStatus::Optimal) {
    throw AssociationError(std::string("association relaxation did not converge: ") + sdp::to_string(raw.status) +
                               " (" + raw.message + ")",
                           to_json(problem));
  }
  // W_u and W_u / W_u[M][M] lift the same point; the scaled copy has an exact
  // unit corner and leaves the homogeneous link rows untouched.
  const int M = servers_of(problem);
  for (std::size_t u = 0; u < out.W.size(); ++u) {
    const double corner = out.W[u](M, M);
    if (!(corner > 0.5)) throw AssociationError("relaxed block has a degenerate corner", to_json(problem));
    out.W[u] /= corner;
    out.objective += (relaxation.objective[u].array() * out.W[u].array()).sum();
  }
  return out;
}

void check_sdr(const AssignmentProblem& problem, const SdrSolution& solution) {
  const int U = mids_of(problem);
  const int M = servers_of(problem);
  auto reject = [&](const std::string& why) {
    nlohmann::json j;
    j["problem"] = nlohmann::json::parse(to_json(problem));
    j["solution"] = nlohmann::json::parse(to_json(solution));
    throw AssociationError("relaxed association rejected: " + why, j.dump(2));
  };
  if (static_cast<int>(solution.W.size()) != U) reject("block count mismatch");
  std::vector<double> load(M, 0.0);
  for (int u = 0; u < U; ++u) {
    const auto& W = solution.W[u];
    if (W.rows() != M + 1 || W.cols() != M + 1) reject("block of MID " + std::to_string(u) + " has wrong size");
    const sdp::BlockMatrix sym = 0.5 * (W + W.transpose());
    Eigen::SelfAdjointEigenSolver<sdp::BlockMatrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-8) reject("block of MID " + std::to_string(u) + " is not PSD");
    if (std::abs(W(M, M) - 1.0) > kCornerTolerance) reject("corner of MID " + std::to_string(u) + " is not 1");
    double row = 0.0;
    for (int m = 0; m < M; ++m) {
      if (std::abs(W(m, m) - W(m, M)) > 1e-6) reject("link row violated for MID " + std::to_string(u));
      row += W(m, M);
      load[m] += W(m, M);
    }
    if (std::abs(row - 1.0) > 1e-6) reject("one-server row violated for MID " + std::to_string(u));
  }
  for (int m = 0; m < M; ++m) {
    if (load[m] > problem.cap_max + 1e-6) reject("capacity of server " + std::to_string(m) + " exceeded");
  }
}

Eigen::MatrixXd extract_fractional(const AssignmentProblem& problem, const SdrSolution& solution) {
  check_sdr(problem, solution);
  const int U = mids_of(problem);
  const int M = servers_of(problem);
  Eigen::MatrixXd z(U, M);
  for (int u = 0; u < U; ++u) {
    for (int m = 0; m < M; ++m) z(u, m) = std::clamp(solution.W[u](m, m), 0.0, 1.0);
    const double sum = z.row(u).sum();
    if (std::abs(sum - 1.0) > 1e-6) {
      throw AssociationError("fractional row of MID " + std::to_string(u) + " sums to " + std::to_string(sum),
                             to_json(solution));
    }
    if (std::abs(sum - 1.0) > 1e-9) z.row(u) /= sum;
  }
  return z;
}

int BipartiteGraph::total_slots() const { return std::accumulate(slots.begin(), slots.end(), 0); }

int BipartiteGraph::column(int server, int slot) const {
  return std::accumulate(slots.begin(), slots.begin() + server, 0) + slot;
}

double BipartiteGraph::incident_weight_of_mid(int mid) const {
  double s = 0.0;
  for (const auto& e : edges) {
    if (e.mid == mid) s += e.weight;
  }
  return s;
}

double BipartiteGraph::incident_weight_of_slot(int server, int slot) const {
  double s = 0.0;
  for (const auto& e : edges) {
    if (e.server == server && e.slot == slot) s += e.weight;
  }
  return s;
}

BipartiteGraph build_bipartite(const Eigen::MatrixXd& z) {
  const int U = static_cast<int>(z.rows());
  const int M = static_cast<int>(z.cols());
  for (int u = 0; u < U; ++u) {
    if ((z.row(u).array() < -kMassTolerance).any() || (z.row(u).array() > 1.0 + kMassTolerance).any() ||
        std::abs(z.row(u).sum() - 1.0) > 1e-6) {
      nlohmann::json j;
      j["row"] = u;
      j["z"] = nlohmann::json::array();
      for (int m = 0; m < M; ++m) j["z"].push_back(z(u, m));
      throw AssociationError("fractional association row " + std::to_string(u) + " is not a distribution", j.dump());
    }
  }

  BipartiteGraph g;
  g.mids = U;
  g.slots.assign(M, 0);
  std::vector<int> order(U);
  for (int m = 0; m < M; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return z(a, m) > z(b, m); });
    const double total = z.col(m).sum();
    const int J = std::max(0, static_cast<int>(std::ceil(total - kSlotTolerance)));
    g.slots[m] = J;
    if (J == 0) continue;

    if (J == 1) {
      for (int u : order) {
        if (z(u, m) > kMassTolerance) g.edges.push_back({u, m, 0, z(u, m)});
      }
      continue;
    }

    // Copy s (1-based) holds cumulative mass (s-1, s]; a MID whose mass
    // crosses s is split between copies s and s+1.
    double cum = 0.0;
    int s = 1;
    for (int u : order) {
      const double mass = z(u, m);
      if (mass <= kMassTolerance) break;
      if (s > J) {
        g.edges.push_back({u, m, J - 1, mass});
        continue;
      }
      if (cum + mass < s - kMassTolerance) {
        g.edges.push_back({u, m, s - 1, mass});
        cum += mass;
        continue;
      }
      const double first = s - cum;
      const double second = cum + mass - s;
      if (first > kMassTolerance) g.edges.push_back({u, m, s - 1, first});
      if (second > kMassTolerance && s + 1 <= J) g.edges.push_back({u, m, s, second});
      cum += mass;
      ++s;
    }
  }
  return g;
}

std::vector<int> max_weight_matching(const Eigen::MatrixXd& weight,
                                     const std::vector<std::vector<bool>>& allowed) {
  const int n = static_cast<int>(weight.rows());
  const int m = static_cast<int>(weight.cols());
  if (n > m) throw std::runtime_error("matching: more rows than columns");
  if (n == 0) return {};

  // Shortest augmenting path Hungarian method on cost = -weight; forbidden
  // cells get a cost no complete matching over allowed cells can reach.
  double wmax = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (allowed[i][j]) wmax = std::max(wmax, std::abs(weight(i, j)));
    }
  }
  const double forbidden = (2.0 * n + 1.0) * (wmax + 1.0);
  auto cost = [&](int i, int j) { return allowed[i][j] ? -weight(i, j) : forbidden; };

  std::vector<double> pu(n + 1, 0.0), pv(m + 1, 0.0), minv(m + 1);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          pu[match[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (match[j] != 0) col_of_row[match[j] - 1] = j - 1;
  }
  for (int i = 0; i < n; ++i) {
    if (col_of_row[i] < 0 || !allowed[i][col_of_row[i]]) {
      throw std::runtime_error("matching: no complete matching over allowed cells");
    }
  }
  return col_of_row;
}

AssocMatrix match_and_extract(const BipartiteGraph& graph, int servers) {
  const int cols = graph.total_slots();
  if (cols < graph.mids) {
    throw AssociationError("slot graph has fewer server copies than MIDs", "{}");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(graph.mids, cols);
  std::vector<std::vector<bool>> allowed(graph.mids, std::vector<bool>(cols, false));
  std::vector<int> server_of_col(cols);
  for (int m = 0, c = 0; m < servers; ++m) {
    for (int s = 0; s < graph.slots[m]; ++s) server_of_col[c++] = m;
  }
  for (const auto& e : graph.edges) {
    const int c = graph.column(e.server, e.slot);
    w(e.mid, c) += e.weight;
    allowed[e.mid][c] = true;
  }
  std::vector<int> col;
  try {
    col = max_weight_matching(w, allowed);
  } catch (const std::runtime_error& e) {
    throw AssociationError(std::string("rounding failed: ") + e.what(), "{}");
  }
  AssocMatrix x(graph.mids, servers);
  for (int u = 0; u < graph.mids; ++u) x.set(u, server_of_col[col[u]], true);
  return x;
}

AssociationResult solve_sdr_rounding(const AssignmentProblem& problem, const sdp::SdpOptions& options) {
  const SdrSolution sdr = solve_sdr(problem, options);
  AssociationResult r;
  r.fractional = extract_fractional(problem, sdr);
  r.assoc = match_and_extract(build_bipartite(r.fractional), servers_of(problem));
  r.objective = assignment_objective(problem, r.assoc);
  r.relaxed_objective = sdr.objective;
  r.sdp_iterations = sdr.iterations;
  return r;
}

AssociationResult solve_exact(const AssignmentProblem& problem) {
  const int U = mids_of(problem);
  const int M = servers_of(problem);
  if (static_cast<long long>(problem.cap_max) * M < U) {
    throw AssociationError("assignment infeasible: cap_max * servers < MIDs", to_json(problem));
  }

  // Nodes: 0 source, 1..U MIDs, U+1..U+M servers, U+M+1 sink.
  struct Arc {
    int to;
    int cap;
    double cost;
  };
  const int source = 0;
  const int sink = U + M + 1;
  const int nodes = U + M + 2;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(nodes);
  auto add_arc = [&](int from, int to, int cap, double cost) {
    out[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, cap, cost});
    out[to].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0, -cost});
  };
  for (int u = 0; u < U; ++u) add_arc(source, 1 + u, 1, 0.0);
  for (int u = 0; u < U; ++u) {
    for (int m = 0; m < M; ++m) add_arc(1 + u, 1 + U + m, 1, problem.costs(u, m));
  }
  for (int m = 0; m < M; ++m) add_arc(1 + U + m, sink, problem.cap_max, 0.0);

  const double scale = std::max(1.0, problem.costs.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * scale;
  for (int flow = 0; flow < U; ++flow) {
    // Bellman-Ford on the residual graph (arc costs may be negative).
    std::vector<double> dist(nodes, kInf);
    std::vector<int> via(nodes, -1);
    dist[source] = 0.0;
    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (int v = 0; v < nodes; ++v) {
        if (dist[v] == kInf) continue;
        for (int a : out[v]) {
          if (arcs[a].cap <= 0) continue;
          const double nd = dist[v] + arcs[a].cost;
          if (nd < dist[arcs[a].to] - eps) {
            dist[arcs[a].to] = nd;
            via[arcs[a].to] = a;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == kInf) throw AssociationError("min-cost flow: no augmenting path", to_json(problem));
    for (int v = sink; v != source;) {
      const int a = via[v];
      arcs[a].cap -= 1;
      arcs[a ^ 1].cap += 1;
      v = arcs[a ^ 1].to;
    }
  }

  AssociationResult r;
  r.assoc = AssocMatrix(U, M);
  for (int u = 0; u < U; ++u) {
    for (int a : out[1 + u]) {
      const int to = arcs[a].to;
      if ((a & 1) == 0 && to > U && to <= U + M && arcs[a].cap == 0) r.assoc.set(u, to - 1 - U, true);
    }
  }
  r.objective = assignment_objective(problem, r.assoc);
  r.relaxed_objective = r.objective;
  r.fractional = Eigen::MatrixXd::Zero(U, M);
  for (int u = 0; u < U; ++u) {
    for (int m = 0; m < M; ++m) r.fractional(u, m) = r.assoc.at(u, m) ? 1.0 : 0.0;
  }
  return r;
}

std::string to_json(const AssignmentProblem& problem) {
  nlohmann::json j;
  j["cap_max"] = problem.cap_max;
  j["costs"] = nlohmann::json::array();
  j["prev_assoc"] = nlohmann::json::array();
  for (int u = 0; u < mids_of(problem); ++u) {
    std::vector<double> row(servers_of(problem));
    std::vector<int> prev(servers_of(problem), 0);
    for (int m = 0; m < servers_of(problem); ++m) {
      row[m] = problem.costs(u, m);
      if (problem.prev_assoc.mids() == mids_of(problem) && problem.prev_assoc.servers() == servers_of(problem)) {
        prev[m] = problem.prev_assoc.at(u, m) ? 1 : 0;
      }
    }
    j["costs"].push_back(row);
    j["prev_assoc"].push_back(prev);
  }
  return j.dump(2);
}

std::string to_json(const SdrSolution& solution) {
  nlohmann::json j;
  j["status"] = sdp::to_string(solution.status);
  j["objective"] = solution.objective;
  j["dual_objective"] = solution.dual_objective;
  j["iterations"] = solution.iterations;
  j["W"] = nlohmann::json::array();
  for (const auto& W : solution.W) {
    nlohmann::json block = nlohmann::json::array();
    for (int r = 0; r < W.rows(); ++r) {
      std::vector<double> row(W.cols());
      for (int c = 0; c < W.cols(); ++c) row[c] = W(r, c);
      block.push_back(row);
    }
    j["W"].push_back(block);
  }
  return j.dump(2);
}

}  // namespace omora
