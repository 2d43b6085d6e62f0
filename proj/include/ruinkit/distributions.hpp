#pragma once

// Completely monotone claim-size families: Abate-Whitt, Weibull with shape
// 1/2, and Pareto (Lomax form). Each is a mixture of exponentials, so its
// stationary excess distribution is again completely monotone.

#include <optional>
#include <string>
#include <string_view>

namespace ruinkit {

enum class Family { abate_whitt, weibull_half, pareto };

std::string_view to_string(Family family);
/// Parses the CLI spelling: "abate-whitt", "weibull-half" or "pareto".
Family parse_family(std::string_view name);

class ClaimModel {
 public:
  /// Laplace transform 1 - s / ((mu + sqrt s)(1 + sqrt s)); mean 1/mu.
  static ClaimModel abate_whitt(double mu);
  /// Weibull ccdf exp(-(u/scale)^(1/2)).
  static ClaimModel weibull_half(double scale);
  /// ccdf (1 + scale*u)^(-shape); shape must exceed 1 for a finite mean.
  static ClaimModel pareto(double shape, double scale);

  Family family() const { return family_; }

  double mu() const;     // Abate-Whitt only
  double scale() const;  // Weibull a, Pareto b
  double shape() const;  // Pareto alpha

  double mean() const;
  std::string describe() const;

  bool operator==(const ClaimModel&) const = default;

 private:
  ClaimModel(Family family, double first, double second)
      : family_(family), first_(first), second_(second) {}

  Family family_;
  double first_;
  double second_;
};

/// Raw moments E U, E U^2, E U^3. A nullopt marks a divergent moment.
struct MomentSet {
  double m1 = 0.0;
  std::optional<double> m2;
  std::optional<double> m3;
};

/// zeta(u) = exp(u) erfc(sqrt u), through the scaled erfc.
double zeta(double u);

/// Claim tail P(U > u).
double claim_ccdf(const ClaimModel& model, double u);

/// Stationary excess tail (1 / E U) * integral_u^inf P(U > x) dx.
double excess_ccdf(const ClaimModel& model, double u);

MomentSet moments(const ClaimModel& model);

/// Mean of the excess distribution, E U^2 / (2 E U); nullopt if infinite.
std::optional<double> excess_mean(const ClaimModel& model);

/// Point where the excess tail falls to `level` (default validation grid end).
double excess_ccdf_crossing(const ClaimModel& model, double level = 1e-4);

}  // namespace ruinkit
