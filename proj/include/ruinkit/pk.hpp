#pragma once

// Closed-form ruin probability for hyperexponential excess claims.
//
// With L the Laplace transform of the excess distribution, the maximum of
// the claim surplus process satisfies
//   E exp(-sM) = (1-rho) / (1 - rho L(s)) = 1 - rho + rho M+(s),
// and for a k-phase L the conditional part M+ is again hyperexponential:
//   M+(s) = sum_i R_i eta_i / (eta_i + s).
// The eta_i are the zeros of 1 - rho L(-x), one below the smallest rate and
// one between each pair of consecutive rates.

#include <span>
#include <vector>

#include "ruinkit/spectral.hpp"

namespace ruinkit {

struct RuinSolution {
  double rho = 0.0;
  std::vector<double> decay_rates;   // eta_1 < ... < eta_k
  std::vector<double> coefficients;  // R_i > 0, sum 1
  double epsilon = 0.0;              // sup-norm accuracy of the excess fit
  double delta = 0.0;                // certified sup-norm bound on the ruin probability

  /// E exp(-sM) reconstructed from the partial fractions.
  double transform(double s) const;
};

/// L(s) = sum_i w_i rate_i / (rate_i + s) for s >= 0.
double hyperexp_lt(const HyperExp& hx, double s);

/// The k negated poles of M+, each bisected inside its interlacing bracket.
std::vector<double> solve_roots(const HyperExp& hx, double rho);

/// Partial-fraction coefficients R_i from the analytic residues.
std::vector<double> residues(const HyperExp& hx, double rho, std::span<const double> etas);

/// Merges rates closer than 1e-12 relative, summing their weights.
HyperExp merge_coincident_rates(const HyperExp& hx);

/// Runs the full solve (merge, roots, residues) and attaches the bound.
RuinSolution solve_ruin(const HyperExp& hx, double rho);

/// psi~(u) = rho * sum_i R_i exp(-eta_i u).
double ruin_spectral(const RuinSolution& sol, double u);

/// delta = epsilon * rho / (1 - rho).
double certified_bound(double epsilon, double rho);

/// Smallest k whose certified bound does not exceed delta:
/// ceil(rho / ((1-rho) delta)) - 1, at least 1.
int phases_for_bound(double delta, double rho);

}  // namespace ruinkit
