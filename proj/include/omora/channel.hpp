#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "omora/config.hpp"
#include "omora/model.hpp"
#include "omora/random.hpp"

namespace omora {

struct Area {
  double width = 0.0;
  double height = 0.0;
};

/// Random-walk step: every MID moves `step_length` metres in a uniformly
/// drawn direction, with specular reflection at the area boundary.
std::vector<Point> step_mobility(std::span<const Point> positions, double step_length,
                                 const Area& area, RngStream& stream);

/// Fresh block-fading matrix, i.i.d. Exp(1) entries, U x M.
Eigen::MatrixXd draw_fading(int mids, int servers, RngStream& stream);

/// H = h * g0 * (d0 / d)^theta, with d clamped to at least d0.
double channel_gain(double fading, double dist, const NetworkConfig& cfg);

/// Channel gain of every MID-server pair, U x M.
Eigen::MatrixXd channel_gains(const SlotState& state, const NetworkConfig& cfg);

/// Uplink rate omega * log2(1 + H p / (chi + sigma^2)) [bit/s].
double offload_rate(double gain, double tx_power, const NetworkConfig& cfg);

/// Local processing rate f / gamma [bit/s].
inline double local_rate(double freq, double comp_intensity) { return freq / comp_intensity; }

/// Fixed server sites: evenly spaced on a circle around the area centre
/// (an inscribed equilateral triangle for three servers).
std::vector<Point> server_sites(int servers, const Area& area);

/// Uniform initial MID positions.
std::vector<Point> initial_positions(int mids, const Area& area, RngStream& stream);

}  // namespace omora
