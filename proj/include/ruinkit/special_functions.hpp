#pragma once

namespace ruinkit {

/// Scaled complementary error function exp(x^2) * erfc(x) for x >= 0.
/// Stays finite and accurate for arguments where erfc underflows.
double erfcx(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation in the upper tail.
double gamma_q(double a, double x);

}  // namespace ruinkit
