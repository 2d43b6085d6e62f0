#include "ruinkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruinkit/bisection.hpp"
#include "ruinkit/error.hpp"
#include "ruinkit/parallel.hpp"

namespace ruinkit {
namespace {

void require_load(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream msg;
    msg << "load rho must lie in (0,1) (got " << rho << ")";
    throw DomainError(msg.str());
  }
}

constexpr int kMaxBisections = 200;
constexpr int kMaxDoublings = 4000;

}  // namespace

double exact_ruin_abate_whitt(double mu, double rho, double u) {
  ClaimModel::abate_whitt(mu);  // same parameter checks as the claim model
  require_load(rho);
  if (!(u >= 0.0)) throw DomainError("exact_ruin_abate_whitt: u must be >= 0");
  const double c = 0.5 * (1.0 + mu);
  const double disc = c * c - (1.0 - rho) * mu;
  if (!(disc > 0.0)) throw DomainError("exact_ruin_abate_whitt: nonpositive discriminant");
  const double d = std::sqrt(disc);
  const double v1 = c + d;
  const double v2 = c - d;
  return rho / (v1 - v2) * (v1 * zeta(v2 * v2 * u) - v2 * zeta(v1 * v1 * u));
}

double excess_quantile(const ClaimModel& model, double v) {
  if (!(v >= 0.0 && v < 1.0)) throw DomainError("excess_quantile: v must lie in [0,1)");
  if (v == 0.0) return 0.0;
  if (model.family() == Family::pareto) {
    return (std::pow(1.0 - v, -1.0 / (model.shape() - 1.0)) - 1.0) / model.scale();
  }
  const double target = 1.0 - v;
  double hi = excess_mean(model).value_or(model.mean());
  for (int i = 0; excess_ccdf(model, hi) > target; ++i) {
    hi *= 2.0;
    if (i > kMaxDoublings || !std::isfinite(hi)) {
      throw NumericError("excess_quantile: no upper bracket for v=" + std::to_string(v));
    }
  }
  return bisect([&](double u) { return excess_ccdf(model, u) - target; }, 0.0, hi, 1e-10,
                kMaxBisections);
}

double sample_excess(const ClaimModel& model, Xoshiro256& rng) {
  return excess_quantile(model, rng.uniform());
}

double sample_maximum(const ClaimModel& model, double rho, Xoshiro256& rng) {
  double total = 0.0;
  while (rng.uniform() < rho) total += sample_excess(model, rng);
  return total;
}

SimulatedMaximum::SimulatedMaximum(const ClaimModel& model, double rho, std::uint64_t samples,
                                   std::uint64_t seed, unsigned partitions) {
  require_load(rho);
  if (samples < 1) throw DomainError("Monte Carlo needs at least one sample");
  if (partitions < 1) throw DomainError("Monte Carlo needs at least one partition");
  std::vector<std::vector<double>> parts(partitions);
  const std::uint64_t base = samples / partitions;
  const std::uint64_t extra = samples % partitions;
  parallel_for(partitions, [&](std::size_t p) {
    const std::uint64_t count = base + (p < extra ? 1 : 0);
    Xoshiro256 rng(partition_seed(seed, p));
    auto& out = parts[p];
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(sample_maximum(model, rho, rng));
  });
  sorted_.reserve(samples);
  for (const auto& part : parts) sorted_.insert(sorted_.end(), part.begin(), part.end());
  std::sort(sorted_.begin(), sorted_.end());
}

double SimulatedMaximum::tail(double u) const {
  const auto above = sorted_.end() - std::upper_bound(sorted_.begin(), sorted_.end(), u);
  return static_cast<double>(above) / static_cast<double>(sorted_.size());
}

double SimulatedMaximum::half_width(double u) const {
  const double p = tail(u);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(sorted_.size()));
}

McEstimate mc_ruin(const ClaimModel& model, double rho, const McConfig& cfg) {
  for (std::size_t i = 0; i < cfg.u_grid.size(); ++i) {
    if (!(cfg.u_grid[i] >= 0.0)) throw DomainError("mc_ruin: grid points must be >= 0");
    if (i > 0 && !(cfg.u_grid[i] > cfg.u_grid[i - 1])) {
      throw DomainError("mc_ruin: grid must be strictly increasing");
    }
  }
  const SimulatedMaximum sim(model, rho, cfg.samples, cfg.seed, cfg.partitions);
  McEstimate est;
  est.samples = sim.samples();
  est.points.reserve(cfg.u_grid.size());
  for (const double u : cfg.u_grid) est.points.push_back({u, sim.tail(u), sim.half_width(u)});
  return est;
}

Tabulated grid_convolve(const Tabulated& a, const Tabulated& b) {
  const std::size_t n = a.x.size();
  if (n < 2 || a.values.size() != n || b.x.size() != n || b.values.size() != n) {
    throw DomainError("grid_convolve: both functions need the same grid of >= 2 points");
  }
  const double h = a.x[1] - a.x[0];
  if (a.x[0] != 0.0 || !(h > 0.0)) throw DomainError("grid_convolve: grid must start at 0");
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = h * static_cast<double>(i);
    if (std::fabs(a.x[i] - expected) > 1e-9 * h || std::fabs(b.x[i] - expected) > 1e-9 * h) {
      throw DomainError("grid_convolve: grid is not uniform at index " + std::to_string(i));
    }
  }
  const auto& av = a.values;
  const auto& bv = b.values;
  Tabulated c{a.x, std::vector<double>(n)};
  for (std::size_t m = 0; m < n; ++m) {
    double sum = av[m] * bv[0];
    for (std::size_t j = 1; j <= m; ++j) {
      sum += 0.5 * (av[m - j] + av[m - j + 1]) * (bv[j] - bv[j - 1]);
    }
    c.values[m] = sum;
  }
  return c;
}

}  // namespace ruinkit
