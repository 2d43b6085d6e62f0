#include "ruinkit/pk.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "ruinkit/bisection.hpp"
#include "ruinkit/error.hpp"

namespace ruinkit {
namespace {

void require_load(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream msg;
    msg << "load rho must lie in (0,1) (got " << rho << ")";
    throw DomainError(msg.str());
  }
}

// 1 - rho L(-x), finite away from the rates.
double characteristic(const HyperExp& hx, double rho, double x) {
  double sum = 0.0;
  const auto& rates = hx.rates();
  const auto& weights = hx.weights();
  for (std::size_t j = 0; j < rates.size(); ++j) sum += weights[j] * rates[j] / (rates[j] - x);
  return 1.0 - rho * sum;
}

}  // namespace

double RuinSolution::transform(double s) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < decay_rates.size(); ++i) {
    sum += coefficients[i] * decay_rates[i] / (decay_rates[i] + s);
  }
  return 1.0 - rho + rho * sum;
}

double hyperexp_lt(const HyperExp& hx, double s) {
  if (!(s >= 0.0)) throw DomainError("hyperexp_lt: s must be >= 0");
  double sum = 0.0;
  const auto& rates = hx.rates();
  const auto& weights = hx.weights();
  for (std::size_t j = 0; j < rates.size(); ++j) sum += weights[j] * rates[j] / (rates[j] + s);
  return sum;
}

std::vector<double> solve_roots(const HyperExp& hx, double rho) {
  require_load(rho);
  const auto& rates = hx.rates();
  // One phase: 1 - rho rate / (rate - x) = 0 at x = rate (1 - rho).
  if (rates.size() == 1) return {rates[0] * (1.0 - rho)};
  const auto f = [&](double x) { return characteristic(hx, rho, x); };
  std::vector<double> etas;
  etas.reserve(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double left = i == 0 ? 0.0 : rates[i - 1];
    const double right = rates[i];
    const double offset = 1e-9 * (right - left);
    // f decreases from +inf (or 1 - rho at 0) to -inf across the bracket.
    const double lo = i == 0 ? 0.0 : left + offset;
    const double hi = right - offset;
    if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "solve_roots: no sign change in bracket " << i + 1 << " (" << left << ", " << right
          << ")";
      throw NumericError(msg.str());
    }
    etas.push_back(bisect(f, lo, hi, 0.0));  // to adjacent doubles
  }
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double left = i == 0 ? 0.0 : rates[i - 1];
    if (!(etas[i] > left && etas[i] < rates[i])) {
      throw NumericError("solve_roots: root " + std::to_string(i + 1) + " escaped its bracket");
    }
  }
  return etas;
}

std::vector<double> residues(const HyperExp& hx, double rho, std::span<const double> etas) {
  require_load(rho);
  if (etas.size() != hx.phases()) throw DomainError("residues: need one root per phase");
  const auto& rates = hx.rates();
  const auto& weights = hx.weights();
  std::vector<double> coeffs;
  coeffs.reserve(etas.size());
  for (const double eta : etas) {
    double lt = 0.0;
    double slope = 0.0;  // sum w_j rate_j / (rate_j - eta)^2
    for (std::size_t j = 0; j < rates.size(); ++j) {
      const double inv = 1.0 / (rates[j] - eta);
      lt += weights[j] * rates[j] * inv;
      slope += weights[j] * rates[j] * inv * inv;
    }
    coeffs.push_back((1.0 - rho) * lt / (eta * rho * slope));
  }
  const double total = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "residues: coefficients sum to " << total << ", root set is inconsistent";
    throw NumericError(msg.str());
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!(coeffs[i] > 0.0)) {
      throw NumericError("residues: coefficient " + std::to_string(i + 1) + " is not positive");
    }
  }
  // The coefficients sum to one exactly; removing the rounding drift keeps
  // psi(0) = rho to the last bit.
  for (double& c : coeffs) c /= total;
  return coeffs;
}

HyperExp merge_coincident_rates(const HyperExp& hx) {
  const auto& rates = hx.rates();
  const auto& weights = hx.weights();
  std::vector<double> merged_rates{rates.front()};
  std::vector<double> merged_weights{weights.front()};
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (rates[i] - merged_rates.back() < 1e-12 * merged_rates.back()) {
      merged_weights.back() += weights[i];
    } else {
      merged_rates.push_back(rates[i]);
      merged_weights.push_back(weights[i]);
    }
  }
  if (merged_rates.size() == rates.size()) return hx;
  return HyperExp(std::move(merged_rates), std::move(merged_weights), hx.accuracy());
}

RuinSolution solve_ruin(const HyperExp& hx, double rho) {
  require_load(rho);
  const HyperExp merged = merge_coincident_rates(hx);
  RuinSolution sol;
  sol.rho = rho;
  sol.decay_rates = solve_roots(merged, rho);
  sol.coefficients = residues(merged, rho, sol.decay_rates);
  sol.epsilon = hx.accuracy();
  sol.delta = sol.epsilon > 0.0 ? certified_bound(sol.epsilon, rho) : 0.0;
  return sol;
}

double ruin_spectral(const RuinSolution& sol, double u) {
  if (!(u >= 0.0)) throw DomainError("ruin_spectral: u must be >= 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < sol.decay_rates.size(); ++i) {
    sum += sol.coefficients[i] * std::exp(-sol.decay_rates[i] * u);
  }
  return sol.rho * sum;
}

double certified_bound(double epsilon, double rho) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("certified_bound: epsilon must be in (0,1)");
  require_load(rho);
  return epsilon * rho / (1.0 - rho);
}

int phases_for_bound(double delta, double rho) {
  if (!(delta > 0.0)) throw DomainError("phases_for_bound: delta must be positive");
  require_load(rho);
  const double x = rho / ((1.0 - rho) * delta);
  // Absorb representation error in delta (0.02 is not exact in binary) so
  // integral ratios such as 50 are not pushed up to the next integer.
  const double k = std::ceil(x * (1.0 - 1e-12)) - 1.0;
  if (k > 1e9) throw DomainError("phases_for_bound: delta too small for this load");
  return k < 1.0 ? 1 : static_cast<int>(k);
}

}  // namespace ruinkit
