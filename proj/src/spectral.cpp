#include "ruinkit/spectral.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

#include "ruinkit/bisection.hpp"
#include "ruinkit/error.hpp"
#include "ruinkit/quadrature.hpp"
#include "ruinkit/special_functions.hpp"

namespace ruinkit {
namespace {

constexpr double kPi = std::numbers::pi;

// Mass of h on (0, y] with y = exp(log_y), integrated in s = log(y').
template <class Density>
double integrate_log_scale(const Density& h, double log_y, double tol) {
  auto integrand = [&](double r) {
    const double y = std::exp(log_y - r);
    return y > 0.0 ? h(y) * y : 0.0;
  };
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  return require_converged(gauss_kronrod_to_infinity(integrand, 0.0, opt), "spectral cdf");
}

}  // namespace

SpectralCdf::SpectralCdf(ClaimModel model, SpectralForm form)
    : model_(std::move(model)), form_(form) {
  auto h = [this](double y) { return density(y); };
  auto upper = [&](double r) {
    const double y = std::exp(r);
    return std::isfinite(y) ? h(y) * y : 0.0;
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-13;
  const double below = integrate_log_scale(h, 0.0, 1e-13);
  const double above =
      require_converged(gauss_kronrod_to_infinity(upper, 0.0, opt), "spectral normalizer");
  normalizer_ = below + above;
  if (std::fabs(normalizer_ - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "spectral density of " << model_.describe() << " integrates to " << normalizer_;
    throw NumericError(msg.str());
  }
}

double SpectralCdf::density(double y) const {
  if (!(y > 0.0)) return 0.0;
  switch (model_.family()) {
    case Family::abate_whitt: {
      const double mu = model_.mu();
      return mu * (1.0 + mu) / (kPi * std::sqrt(y) * (y + 1.0) * (y + mu * mu));
    }
    case Family::weibull_half: {
      const double a = model_.scale();
      const double log_h = -1.0 / (4.0 * a * y) - std::log(4.0 * a * std::sqrt(a * kPi)) -
                           2.5 * std::log(y);
      return std::exp(log_h);
    }
    case Family::pareto: {
      const double shape = model_.shape() - 1.0;
      const double b = model_.scale();
      const double log_h = (shape - 1.0) * std::log(y / b) - y / b - std::log(b) - std::lgamma(shape);
      return std::exp(log_h);
    }
  }
  return 0.0;
}

double SpectralCdf::closed_form_cdf(double y) const {
  switch (model_.family()) {
    case Family::abate_whitt: {
      // Partial fractions in t = sqrt(y) of 2 mu (1+mu) / (pi (t^2+1)(t^2+mu^2)).
      const double mu = model_.mu();
      const double t = std::sqrt(y);
      return 2.0 * mu / (kPi * (mu - 1.0)) * (std::atan(t) - std::atan(t / mu) / mu);
    }
    case Family::weibull_half:
      return gamma_q(1.5, 1.0 / (4.0 * model_.scale() * y));
    case Family::pareto:
      return gamma_p(model_.shape() - 1.0, y / model_.scale());
  }
  return 0.0;
}

double SpectralCdf::quadrature_cdf(double y) const {
  return integrate_log_scale([this](double x) { return density(x); }, std::log(y), 1e-12);
}

double SpectralCdf::operator()(double y) const {
  if (!(y >= 0.0)) throw DomainError("spectral_cdf: y must be >= 0");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;
  const double value = form_ == SpectralForm::closed_form ? closed_form_cdf(y) : quadrature_cdf(y);
  return std::fmin(1.0, std::fmax(0.0, value));
}

double SpectralCdf::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("spectral_quantile: p must lie in (0,1) (got " + std::to_string(p) + ")");
  }
  const SpectralCdf& cdf = *this;
  double lo = 1e-12;
  double hi = 1.0;
  while (cdf(lo) >= p) {
    lo *= 0.5;
    if (lo < 1e-300) throw NumericError("spectral_quantile: lower bracket underflow");
  }
  while (cdf(hi) < p) {
    hi *= 2.0;
    if (hi > 1e12) {
      std::ostringstream msg;
      msg << "spectral_quantile: bracket expansion beyond 1e12 for p=" << p << " ("
          << model_.describe() << ")";
      throw NumericError(msg.str());
    }
  }
  return bisect([&](double y) { return cdf(y) - p; }, lo, hi, 1e-15);
}

double spectral_cdf(const ClaimModel& model, double y) { return SpectralCdf(model)(y); }

double spectral_quantile(const ClaimModel& model, double p) {
  return SpectralCdf(model).quantile(p);
}

HyperExp::HyperExp(std::vector<double> rates, std::vector<double> weights, double accuracy)
    : rates_(std::move(rates)), weights_(std::move(weights)), accuracy_(accuracy) {
  if (rates_.empty() || rates_.size() != weights_.size()) {
    throw DomainError("HyperExp: need matching, nonempty rate and weight lists");
  }
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    if (!(rates_[i] > 0.0) || !std::isfinite(rates_[i])) {
      throw DomainError("HyperExp: rates must be positive and finite");
    }
    if (i > 0 && !(rates_[i] > rates_[i - 1])) {
      throw DomainError("HyperExp: rates must be strictly increasing");
    }
    if (!(weights_[i] > 0.0)) throw DomainError("HyperExp: weights must be positive");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-12) throw DomainError("HyperExp: weights must sum to 1");
  if (!(accuracy_ >= 0.0 && accuracy_ < 1.0)) throw DomainError("HyperExp: accuracy must be in [0,1)");
}

HyperExp HyperExp::equal_weights(std::vector<double> rates, double accuracy) {
  const std::size_t k = rates.size();
  std::vector<double> weights(k, k == 0 ? 0.0 : 1.0 / static_cast<double>(k));
  return HyperExp(std::move(rates), std::move(weights), accuracy);
}

double HyperExp::ccdf(double u) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) sum += weights_[i] * std::exp(-rates_[i] * u);
  return sum;
}

double HyperExp::mean() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) sum += weights_[i] / rates_[i];
  return sum;
}

HyperExp fit_hyperexp(const SpectralCdf& spectral, int k) {
  if (k < 1) throw DomainError("fit_hyperexp: k must be >= 1");
  const double eps = 1.0 / (k + 1.0);
  std::vector<double> rates(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) rates[static_cast<std::size_t>(i - 1)] = spectral.quantile(i * eps);
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (!(rates[i] > rates[i - 1])) {
      throw NumericError("fit_hyperexp: quantiles " + std::to_string(i) + " and " +
                         std::to_string(i + 1) + " coincide");
    }
  }
  return HyperExp::equal_weights(std::move(rates), eps);
}

HyperExp fit_hyperexp(const ClaimModel& model, int k) { return fit_hyperexp(SpectralCdf(model), k); }

}  // namespace ruinkit
