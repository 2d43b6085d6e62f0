#include "ruinkit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruinkit/bisection.hpp"
#include "ruinkit/error.hpp"
#include "ruinkit/special_functions.hpp"

namespace ruinkit {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be a positive finite number (got " << value << ")";
    throw DomainError(msg.str());
  }
}

void require_nonnegative_argument(double u, const char* op) {
  if (!(u >= 0.0)) {
    std::ostringstream msg;
    msg << op << ": argument must be >= 0 (got " << u << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::abate_whitt:
      return "abate-whitt";
    case Family::weibull_half:
      return "weibull-half";
    case Family::pareto:
      return "pareto";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "abate-whitt") return Family::abate_whitt;
  if (name == "weibull-half") return Family::weibull_half;
  if (name == "pareto") return Family::pareto;
  throw DomainError("unknown model family '" + std::string(name) +
                    "' (expected abate-whitt, weibull-half or pareto)");
}

ClaimModel ClaimModel::abate_whitt(double mu) {
  require_positive(mu, "Abate-Whitt mu");
  // The ccdf has a removable singularity at mu = 1.
  if (std::fabs(mu - 1.0) < 1e-9) throw DomainError("Abate-Whitt mu = 1 is not supported");
  return ClaimModel(Family::abate_whitt, mu, 0.0);
}

ClaimModel ClaimModel::weibull_half(double scale) {
  require_positive(scale, "Weibull scale a");
  return ClaimModel(Family::weibull_half, scale, 0.0);
}

ClaimModel ClaimModel::pareto(double shape, double scale) {
  require_positive(shape, "Pareto shape alpha");
  require_positive(scale, "Pareto scale b");
  if (!(shape > 1.0)) {
    throw DomainError("Pareto shape alpha must exceed 1 for a finite mean (got " +
                      std::to_string(shape) + ")");
  }
  return ClaimModel(Family::pareto, shape, scale);
}

double ClaimModel::mu() const {
  if (family_ != Family::abate_whitt) throw DomainError("mu() is defined for Abate-Whitt only");
  return first_;
}

double ClaimModel::scale() const {
  switch (family_) {
    case Family::weibull_half:
      return first_;
    case Family::pareto:
      return second_;
    case Family::abate_whitt:
      break;
  }
  throw DomainError("scale() is not defined for Abate-Whitt");
}

double ClaimModel::shape() const {
  if (family_ != Family::pareto) throw DomainError("shape() is defined for Pareto only");
  return first_;
}

double ClaimModel::mean() const { return moments(*this).m1; }

std::string ClaimModel::describe() const {
  std::ostringstream out;
  switch (family_) {
    case Family::abate_whitt:
      out << "AbateWhitt(mu=" << first_ << ")";
      break;
    case Family::weibull_half:
      out << "Weibull(0.5, a=" << first_ << ")";
      break;
    case Family::pareto:
      out << "Pareto(alpha=" << first_ << ", b=" << second_ << ")";
      break;
  }
  return out.str();
}

double zeta(double u) {
  require_nonnegative_argument(u, "zeta");
  return erfcx(std::sqrt(u));
}

double claim_ccdf(const ClaimModel& model, double u) {
  require_nonnegative_argument(u, "claim_ccdf");
  switch (model.family()) {
    case Family::abate_whitt: {
      const double mu = model.mu();
      if (std::min(u, mu * mu * u) < 100.0) return (zeta(u) - mu * zeta(mu * mu * u)) / (1.0 - mu);
      // The two zeta terms agree to leading order; subtract their asymptotic
      // series term by term instead of the rounded values.
      const double log_mu = std::log(mu);
      double c = 1.0;
      double sum = 0.0;
      for (int n = 1; n <= 40; ++n) {
        c *= -(2.0 * n - 1.0) / (2.0 * u);
        const double term = c * -std::expm1(-2.0 * n * log_mu) / (1.0 - mu);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
      }
      return sum / std::sqrt(M_PI * u);
    }
    case Family::weibull_half:
      return std::exp(-std::sqrt(u / model.scale()));
    case Family::pareto:
      return std::pow(1.0 + model.scale() * u, -model.shape());
  }
  return 0.0;
}

double excess_ccdf(const ClaimModel& model, double u) {
  require_nonnegative_argument(u, "excess_ccdf");
  switch (model.family()) {
    case Family::abate_whitt: {
      // Partial fractions of the excess spectral density.
      const double mu = model.mu();
      return (zeta(mu * mu * u) - mu * zeta(u)) / (1.0 - mu);
    }
    case Family::weibull_half: {
      const double v = std::sqrt(u / model.scale());
      return (1.0 + v) * std::exp(-v);
    }
    case Family::pareto:
      return std::pow(1.0 + model.scale() * u, -(model.shape() - 1.0));
  }
  return 0.0;
}

MomentSet moments(const ClaimModel& model) {
  MomentSet m;
  switch (model.family()) {
    case Family::abate_whitt:
      m.m1 = 1.0 / model.mu();
      break;
    case Family::weibull_half: {
      // E U^n = a^n Gamma(1 + 2n)
      const double a = model.scale();
      m.m1 = 2.0 * a;
      m.m2 = 24.0 * a * a;
      m.m3 = 720.0 * a * a * a;
      break;
    }
    case Family::pareto: {
      // E U^n = n! / (b^n prod_{j=1..n} (alpha - j)), finite for alpha > n
      const double alpha = model.shape();
      const double b = model.scale();
      m.m1 = 1.0 / (b * (alpha - 1.0));
      if (alpha > 2.0) m.m2 = 2.0 / (b * b * (alpha - 1.0) * (alpha - 2.0));
      if (alpha > 3.0) m.m3 = 6.0 / (b * b * b * (alpha - 1.0) * (alpha - 2.0) * (alpha - 3.0));
      break;
    }
  }
  return m;
}

std::optional<double> excess_mean(const ClaimModel& model) {
  const MomentSet m = moments(model);
  if (!m.m2) return std::nullopt;
  return *m.m2 / (2.0 * m.m1);
}

double excess_ccdf_crossing(const ClaimModel& model, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("excess_ccdf_crossing: level must be in (0,1)");
  double hi = model.mean();
  int doublings = 0;
  while (excess_ccdf(model, hi) > level) {
    hi *= 2.0;
    if (++doublings > 2000 || !std::isfinite(hi)) {
      throw NumericError("excess_ccdf_crossing: no bracket for level " + std::to_string(level));
    }
  }
  return bisect([&](double u) { return excess_ccdf(model, u) - level; }, 0.0, hi, 1e-12);
}

}  // namespace ruinkit
