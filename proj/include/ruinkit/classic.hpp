#pragma once

#include <optional>

#include "ruinkit/distributions.hpp"

namespace ruinkit {

struct HeavyTrafficParams {
  double rho = 0.0;
  double mean_M = 0.0;          // rho E U^2 / (2 (1-rho) E U)
  std::optional<double> gamma;  // 2 E U^3 E U / (3 (E U^2)^2), needs E U^3
};

/// Domain error when the second moment diverges.
HeavyTrafficParams heavy_traffic_params(const ClaimModel& model, double rho);

enum class HeavyTrafficForm {
  with_atom,  // rho exp(-rho u / E M): atom rho at 0, mean E M
  plain,      // exp(-u / E M)
};

double heavy_traffic(const ClaimModel& model, double rho, double u,
                     HeavyTrafficForm form = HeavyTrafficForm::with_atom);

/// (rho / (1-rho)) times the excess tail. An asymptotic, so it is not
/// clamped to [0,1].
double heavy_tail(const ClaimModel& model, double rho, double u);

/// gamma of the geometric-compound exponential bound; scale-free.
double brown_gamma(const ClaimModel& model);

/// Sup-norm distance bound (1-rho) max(2 gamma, gamma / rho) between M and
/// an exponential with the same mean.
double brown_bound(const ClaimModel& model, double rho);

/// Brown's bound plus the (1-rho) cost of the atom-adjusted exponential.
double extended_bound(const ClaimModel& model, double rho);

/// Phases at which the spectral certified bound first matches extended_bound.
int matched_phases(const ClaimModel& model, double rho);

}  // namespace ruinkit
