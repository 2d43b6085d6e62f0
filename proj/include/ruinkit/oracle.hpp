#pragma once

// Reference values for validating the approximations: the exact Abate-Whitt
// ruin probability, Monte Carlo on the geometric-sum representation of M,
// and a grid Stieltjes convolution.

#include <cstdint>
#include <vector>

#include "ruinkit/distributions.hpp"
#include "ruinkit/rng.hpp"

namespace ruinkit {

/// psi(u) = rho/(v1-v2) (v1 zeta(v2^2 u) - v2 zeta(v1^2 u)) with
/// v_{1,2} = (1+mu)/2 +- sqrt(((1+mu)/2)^2 - (1-rho) mu).
double exact_ruin_abate_whitt(double mu, double rho, double u);

/// Inverse of the excess CDF at v in [0,1).
double excess_quantile(const ClaimModel& model, double v);

/// One draw from the excess distribution by inverse transform.
double sample_excess(const ClaimModel& model, Xoshiro256& rng);

/// One draw of M = X_1 + ... + X_N with P(N = n) = (1-rho) rho^n.
double sample_maximum(const ClaimModel& model, double rho, Xoshiro256& rng);

struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20'130'515;
  std::vector<double> u_grid;
  /// Replications are split into this many independently seeded streams.
  /// The merged estimate depends on (seed, partitions), not on threads.
  unsigned partitions = 16;
};

struct McPoint {
  double u = 0.0;
  double estimate = 0.0;
  double half_width_95 = 0.0;  // 1.96 sqrt(p (1-p) / n)
};

struct McEstimate {
  std::uint64_t samples = 0;
  std::vector<McPoint> points;
};

/// Sorted Monte Carlo draws of M, queried as an empirical ruin probability.
class SimulatedMaximum {
 public:
  SimulatedMaximum(const ClaimModel& model, double rho, std::uint64_t samples, std::uint64_t seed,
                   unsigned partitions = 16);

  std::uint64_t samples() const { return sorted_.size(); }
  /// Fraction of draws with M > u.
  double tail(double u) const;
  double half_width(double u) const;
  const std::vector<double>& draws() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

McEstimate mc_ruin(const ClaimModel& model, double rho, const McConfig& cfg);

/// A function tabulated at points x (the convolution requires x uniform and
/// starting at 0).
struct Tabulated {
  std::vector<double> x;
  std::vector<double> values;
};

template <class F>
Tabulated tabulate_uniform(double step, std::size_t points, F&& f) {
  Tabulated t;
  t.x.resize(points);
  t.values.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    t.x[i] = step * static_cast<double>(i);
    t.values[i] = f(t.x[i]);
  }
  return t;
}

/// Stieltjes convolution of two CDFs tabulated on the same uniform grid,
/// (A*B)(u) = int_0^u A(u-x) dB(x), by the trapezoidal rule:
///   C[n] = A[n] B[0] + sum_{j=1..n} (A[n-j] + A[n-j+1]) / 2 (B[j] - B[j-1]).
/// Atoms at 0 enter through A[0], B[0]. Symmetric in A and B.
Tabulated grid_convolve(const Tabulated& a, const Tabulated& b);

}  // namespace ruinkit
