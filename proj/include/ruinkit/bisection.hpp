#pragma once

#include <cmath>
#include <sstream>

#include "ruinkit/error.hpp"

namespace ruinkit {

/// Bisection on a bracket [lo, hi] where f changes sign. Stops when the
/// bracket is narrower than rel_tol * |midpoint|, when it cannot be halved
/// further in double precision, or after max_iter halvings.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol, int max_iter = 2000) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bisect: no sign change on [" << lo << ", " << hi << "] (f=" << flo << ", " << fhi
        << ")";
    throw NumericError(msg.str());
  }
  for (int i = 0; i < max_iter; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::fabs(lo + 0.5 * (hi - lo))) break;
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace ruinkit
