#pragma once

// Spectral (mixing) distributions of the excess claim-size tails and the
// equal-weight hyperexponential built from their quantiles.

#include <cstddef>
#include <vector>

#include "ruinkit/distributions.hpp"

namespace ruinkit {

enum class SpectralForm { closed_form, quadrature };

/// Mixing CDF H of the excess tail: excess_ccdf(u) = int exp(-u y) dH(y).
///
///   Abate-Whitt  h(y) = mu (1+mu) / (pi sqrt(y) (y+1) (y+mu^2))
///   Weibull 1/2  h(y) = exp(-1/(4ay)) / (4 a^{3/2} sqrt(pi) y^{5/2}),
///                H(y) = Q(3/2, 1/(4ay))
///   Pareto       Gamma(shape alpha-1, scale b), H(y) = P(alpha-1, y/b)
///
/// The quadrature form integrates h numerically instead of using the closed
/// forms. Construction checks that h integrates to one within 1e-8.
class SpectralCdf {
 public:
  explicit SpectralCdf(ClaimModel model, SpectralForm form = SpectralForm::closed_form);

  const ClaimModel& model() const { return model_; }
  SpectralForm form() const { return form_; }
  /// Total mass of h measured by quadrature at construction.
  double normalizer() const { return normalizer_; }

  double density(double y) const;
  double operator()(double y) const;
  /// Unique y with H(y) = p, by bracketed bisection.
  double quantile(double p) const;

 private:
  double closed_form_cdf(double y) const;
  double quadrature_cdf(double y) const;

  ClaimModel model_;
  SpectralForm form_;
  double normalizer_ = 0.0;
};

double spectral_cdf(const ClaimModel& model, double y);
double spectral_quantile(const ClaimModel& model, double p);

/// Finite mixture of exponentials: ccdf(u) = sum_i w_i exp(-rate_i u).
class HyperExp {
 public:
  /// Rates must be strictly increasing and positive; weights positive and
  /// summing to one within 1e-12. `accuracy` is the sup-norm distance to the
  /// distribution it approximates (0 when not an approximation).
  HyperExp(std::vector<double> rates, std::vector<double> weights, double accuracy = 0.0);

  static HyperExp equal_weights(std::vector<double> rates, double accuracy = 0.0);

  const std::vector<double>& rates() const { return rates_; }
  const std::vector<double>& weights() const { return weights_; }
  double accuracy() const { return accuracy_; }
  std::size_t phases() const { return rates_.size(); }

  double ccdf(double u) const;
  double mean() const;

 private:
  std::vector<double> rates_;
  std::vector<double> weights_;
  double accuracy_;
};

/// k-phase approximation of the excess distribution: rates at the
/// i/(k+1) quantiles of H, weights 1/k, accuracy 1/(k+1).
HyperExp fit_hyperexp(const ClaimModel& model, int k);
HyperExp fit_hyperexp(const SpectralCdf& spectral, int k);

}  // namespace ruinkit
