#include "ruinkit/classic.hpp"

#include <cmath>
#include <sstream>

#include "ruinkit/error.hpp"
#include "ruinkit/pk.hpp"

namespace ruinkit {
namespace {

void require_load(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream msg;
    msg << "load rho must lie in (0,1) (got " << rho << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

HeavyTrafficParams heavy_traffic_params(const ClaimModel& model, double rho) {
  require_load(rho);
  const MomentSet m = moments(model);
  if (!m.m2) {
    throw DomainError("heavy traffic approximation needs a finite second moment, which " +
                      model.describe() + " does not have");
  }
  HeavyTrafficParams p;
  p.rho = rho;
  p.mean_M = rho * *m.m2 / (2.0 * (1.0 - rho) * m.m1);
  if (m.m3) p.gamma = 2.0 * *m.m3 * m.m1 / (3.0 * *m.m2 * *m.m2);
  return p;
}

double heavy_traffic(const ClaimModel& model, double rho, double u, HeavyTrafficForm form) {
  if (!(u >= 0.0)) throw DomainError("heavy_traffic: u must be >= 0");
  const HeavyTrafficParams p = heavy_traffic_params(model, rho);
  if (form == HeavyTrafficForm::plain) return std::exp(-u / p.mean_M);
  return rho * std::exp(-rho * u / p.mean_M);
}

double heavy_tail(const ClaimModel& model, double rho, double u) {
  require_load(rho);
  return rho / (1.0 - rho) * excess_ccdf(model, u);
}

double brown_gamma(const ClaimModel& model) {
  const MomentSet m = moments(model);
  if (!m.m2 || !m.m3) {
    throw DomainError("a finite third moment is required for the heavy traffic bound; " +
                      model.describe() + " does not have one");
  }
  return 2.0 * *m.m3 * m.m1 / (3.0 * *m.m2 * *m.m2);
}

double brown_bound(const ClaimModel& model, double rho) {
  require_load(rho);
  const double gamma = brown_gamma(model);
  return (1.0 - rho) * std::fmax(2.0 * gamma, gamma / rho);
}

double extended_bound(const ClaimModel& model, double rho) {
  return brown_bound(model, rho) + (1.0 - rho);
}

int matched_phases(const ClaimModel& model, double rho) {
  return phases_for_bound(extended_bound(model, rho), rho);
}

}  // namespace ruinkit
