#include "omora/cost.hpp"

#include <stdexcept>

namespace omora {
namespace {

int ones(std::span<const std::uint8_t> row) {
  int n = 0;
  for (auto b : row) {
    if (b > 1) return -1;
    n += b;
  }
  return n;
}

}  // namespace

double migration_cost(std::span<const std::uint8_t> prev, std::span<const std::uint8_t> cur, double eps) {
  if (prev.size() != cur.size()) throw std::invalid_argument("migration_cost: row length mismatch");
  const int n_prev = ones(prev);
  if (ones(cur) != 1) throw std::invalid_argument("migration_cost: current row is not one-hot");
  if (n_prev == 0) return 0.0;
  if (n_prev != 1) throw std::invalid_argument("migration_cost: previous row is not one-hot");

  double c = 0.0;
  for (std::size_t m = 0; m < cur.size(); ++m) {
    const double xp = prev[m];
    const double xc = cur[m];
    c += 0.5 * eps * ((1.0 - xp) * xc + (1.0 - xc) * xp);
  }
  return c;
}

CostBreakdown cost_breakdown(double freq, double tx_power, double migration, const NetworkConfig& cfg) {
  CostBreakdown b;
  b.local_power = local_power(freq, cfg.energy_coeff);
  b.offload_power = offload_power(tx_power, cfg.amp_coeff, cfg.circuit_power);
  b.total_power = b.local_power + b.offload_power;
  b.migration = migration;
  b.service = service_cost(b.total_power, migration, cfg.migration_weight);
  return b;
}

}  // namespace omora
