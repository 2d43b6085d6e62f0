#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "ruinkit/error.hpp"

namespace ruinkit {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  std::array<double, 7> left{};
  std::array<double, 7> right{};
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    left[j] = f(center - dx);
    right[j] = f(center + dx);
    const double pair = left[j] + right[j];
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double value = kronrod * half;
  double error = std::fabs((kronrod - gauss) * half);
  // QUADPACK's error rescaling.
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::fabs(left[j] - mean) + std::fabs(right[j] - mean));
  }
  asc *= std::fabs(half);
  if (asc != 0.0 && error != 0.0) {
    error = asc * std::fmin(1.0, std::pow(200.0 * error / asc, 1.5));
  }
  return {a, b, value, error};
}

}  // namespace detail

/// Integrates f over the finite interval [a, b].
template <class F>
QuadratureResult gauss_kronrod(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<detail::Segment> work;
  work.push(detail::kronrod15(f, a, b));
  double total = work.top().value;
  double error = work.top().error;
  int splits = 0;
  while (error > std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(total)) &&
         splits < opt.max_subdivisions) {
    const detail::Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      work.push(worst);
      break;  // interval cannot be split further in double precision
    }
    const detail::Segment left = detail::kronrod15(f, worst.a, mid);
    const detail::Segment right = detail::kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++splits;
  }
  // Re-sum to shed the drift of the running totals.
  total = 0.0;
  error = 0.0;
  while (!work.empty()) {
    total += work.top().value;
    error += work.top().error;
    work.pop();
  }
  result.value = total;
  result.abs_error = error;
  result.subdivisions = splits;
  result.converged = error <= std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(total));
  return result;
}

/// Integrates f over [a, inf) through the map x = a + t / (1 - t).
template <class F>
QuadratureResult gauss_kronrod_to_infinity(F&& f, double a, const QuadratureOptions& opt = {}) {
  auto mapped = [&f, a](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double value = f(a + t / one_minus);
    return value == 0.0 ? 0.0 : value / (one_minus * one_minus);
  };
  return gauss_kronrod(mapped, 0.0, 1.0, opt);
}

/// Throws NumericError with a diagnostic when the quadrature did not converge.
inline double require_converged(const QuadratureResult& r, const char* what) {
  if (!r.converged || !std::isfinite(r.value)) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (value=" << r.value
        << ", error estimate=" << r.abs_error << ", subdivisions=" << r.subdivisions << ")";
    throw NumericError(msg.str());
  }
  return r.value;
}

}  // namespace ruinkit
