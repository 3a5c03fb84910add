#include "omora/queueing.hpp"

#include <cmath>
#include <stdexcept>

namespace omora {

std::vector<double> draw_arrivals(const NetworkConfig& cfg, RngStream& stream) {
  std::vector<double> a(cfg.num_mids);
  for (auto& v : a) v = stream.uniform(cfg.arrival_low, cfg.arrival_high);
  return a;
}

std::vector<double> update_queues(std::span<const double> queues, std::span<const double> served,
                                  std::span<const double> arrived) {
  if (served.size() != queues.size() || arrived.size() != queues.size()) {
    throw std::invalid_argument("update_queues: length mismatch");
  }
  std::vector<double> next(queues.size());
  for (std::size_t u = 0; u < queues.size(); ++u) next[u] = update_queue(queues[u], served[u], arrived[u]);
  return next;
}

double lyapunov(std::span<const double> queues) {
  double s = 0.0;
  for (double q : queues) s += q * q;
  return 0.5 * s;
}

WorkBounds work_bounds(const NetworkConfig& cfg) {
  const double snr = cfg.pathloss_const * cfg.p_max / cfg.noise_plus_interference();
  WorkBounds b;
  b.served_max = cfg.bandwidth * std::log2(1.0 + snr) * cfg.slot_length +
                 cfg.f_max * cfg.slot_length / cfg.comp_intensity;
  b.arrival_max = cfg.arrival_high;
  return b;
}

double drift_penalty_bound(std::span<const double> queues, std::span<const double> arrived,
                           std::span<const double> served, const WorkBounds& bounds,
                           double total_cost, double V) {
  const double n = static_cast<double>(queues.size());
  double value = 0.5 * n * (bounds.served_max * bounds.served_max + bounds.arrival_max * bounds.arrival_max);
  for (std::size_t u = 0; u < queues.size(); ++u) value += queues[u] * (arrived[u] - served[u]);
  return value + V * total_cost;
}

}  // namespace omora
