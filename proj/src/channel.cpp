#include "omora/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace omora {
namespace {

// Folds a coordinate back into [0, len] by repeated mirroring.
double reflect(double v, double len) {
  const double period = 2.0 * len;
  v = std::fmod(v, period);
  if (v < 0.0) v += period;
  return v > len ? period - v : v;
}

}  // namespace

std::vector<Point> step_mobility(std::span<const Point> positions, double step_length,
                                 const Area& area, RngStream& stream) {
  std::vector<Point> next(positions.begin(), positions.end());
  for (auto& p : next) {
    const double heading = 2.0 * std::numbers::pi * stream.uniform();
    if (step_length == 0.0) continue;
    p.x = reflect(p.x + step_length * std::cos(heading), area.width);
    p.y = reflect(p.y + step_length * std::sin(heading), area.height);
  }
  return next;
}

Eigen::MatrixXd draw_fading(int mids, int servers, RngStream& stream) {
  Eigen::MatrixXd h(mids, servers);
  for (int u = 0; u < mids; ++u) {
    for (int m = 0; m < servers; ++m) h(u, m) = stream.exponential(1.0);
  }
  return h;
}

double channel_gain(double fading, double dist, const NetworkConfig& cfg) {
  const double d = std::max(dist, cfg.ref_dist);
  return fading * cfg.pathloss_const * std::pow(cfg.ref_dist / d, cfg.pathloss_exp);
}

Eigen::MatrixXd channel_gains(const SlotState& state, const NetworkConfig& cfg) {
  const int U = static_cast<int>(state.positions.size());
  const int M = static_cast<int>(state.server_positions.size());
  Eigen::MatrixXd H(U, M);
  for (int u = 0; u < U; ++u) {
    for (int m = 0; m < M; ++m) {
      H(u, m) = channel_gain(state.fading(u, m), distance(state.positions[u], state.server_positions[m]), cfg);
    }
  }
  return H;
}

double offload_rate(double gain, double tx_power, const NetworkConfig& cfg) {
  return cfg.bandwidth * std::log2(1.0 + gain * tx_power / cfg.noise_plus_interference());
}

std::vector<Point> server_sites(int servers, const Area& area) {
  const Point centre{area.width / 2.0, area.height / 2.0};
  if (servers == 1) return {centre};
  const double radius = 0.3 * std::min(area.width, area.height);
  std::vector<Point> sites;
  sites.reserve(servers);
  for (int m = 0; m < servers; ++m) {
    const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * m / servers;
    sites.push_back({centre.x + radius * std::cos(angle), centre.y + radius * std::sin(angle)});
  }
  return sites;
}

std::vector<Point> initial_positions(int mids, const Area& area, RngStream& stream) {
  std::vector<Point> pos(mids);
  for (auto& p : pos) {
    p.x = stream.uniform(0.0, area.width);
    p.y = stream.uniform(0.0, area.height);
  }
  return pos;
}

}  // namespace omora
