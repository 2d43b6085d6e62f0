// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ruinkit/classic.hpp"
#include "ruinkit/experiment.hpp"
#include "ruinkit/oracle.hpp"
#include "ruinkit/pk.hpp"
#include "ruinkit/rng.hpp"
#include "ruinkit/spectral.hpp"

using namespace ruinkit;

namespace {

// Pinned tolerances.
constexpr double kBoundDecimals = 0.0005 + 1e-12;    // 3 printed decimals
constexpr double kMaxErrorRel = 0.05;                 // grid policy allowance
constexpr double kMaxErrorPrint = 0.5e-4;             // half unit of the 4th printed decimal
constexpr double kMinRatio = 2.0;
constexpr double kHtDecimals = 0.005 + 1e-12;         // 2 printed decimals
constexpr int kPhaseSlack = 1;
constexpr double kMcHalfWidths = 3.0;
constexpr double kConvSlack = 0.1;                    // times epsilon
constexpr double kResidueSum = 1e-10;
constexpr double kTransform = 1e-10;
constexpr double kMachine = 4.0 * std::numeric_limits<double>::epsilon();

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<ClaimModel> families() {
  return {ClaimModel::abate_whitt(2.0), ClaimModel::weibull_half(3.0), ClaimModel::pareto(4.0, 3.0)};
}

// Printed Abate-Whitt (mu = 2) table: bound and max error per k, rho = 0.1 .. 0.9.
struct RatioTable {
  int k;
  std::array<double, 9> bound;
  std::array<double, 9> max_error;
};

const RatioTable kRatioTables[] = {
    {10,
     {0.010, 0.023, 0.039, 0.061, 0.091, 0.136, 0.212, 0.364, 0.818},
     {0.0048, 0.0106, 0.0180, 0.0275, 0.0401, 0.0580, 0.0849, 0.1299, 0.2263}},
    {20,
     {0.005, 0.012, 0.020, 0.032, 0.048, 0.071, 0.111, 0.190, 0.429},
     {0.0026, 0.0057, 0.0097, 0.0150, 0.0222, 0.0326, 0.0490, 0.0787, 0.1479}},
    {100,
     {0.001, 0.002, 0.004, 0.007, 0.010, 0.015, 0.023, 0.040, 0.089},
     {0.0005, 0.0012, 0.0021, 0.0033, 0.0049, 0.0073, 0.0112, 0.0189, 0.0406}},
};

const std::array<double, 6> kMatchRhos = {0.82, 0.85, 0.88, 0.91, 0.94, 0.97};

Outcome phase_count() {
  Outcome o;
  const int got[] = {phases_for_bound(0.02, 0.1), phases_for_bound(0.02, 0.5), phases_for_bound(0.02, 0.9)};
  o.pass = got[0] == 5 && got[1] == 49 && got[2] == 449;
  o.detail = "k = " + std::to_string(got[0]) + ", " + std::to_string(got[1]) + ", " + std::to_string(got[2]);
  return o;
}

Outcome bound_column() {
  Outcome o;
  double worst = 0.0;
  for (const auto& t : kRatioTables) {
    for (int i = 0; i < 9; ++i) {
      const double b = certified_bound(1.0 / (t.k + 1.0), 0.1 * (i + 1));
      worst = std::max(worst, std::fabs(b - t.bound[i]));
    }
  }
  o.pass = worst <= kBoundDecimals;
  char buf[96];
  std::snprintf(buf, sizeof buf, "27 entries, worst |bound - printed| = %.2e", worst);
  o.detail = buf;
  return o;
}

Outcome certified_end_to_end() {
  Outcome o;
  const auto aw = ClaimModel::abate_whitt(2.0);
  const SpectralCdf spectral(aw);
  int violations = 0;
  double worst_rel = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& t : kRatioTables) {
    const HyperExp hx = fit_hyperexp(spectral, t.k);
    for (int i = 0; i < 9; ++i) {
      const double rho = 0.1 * (i + 1);
      const RuinSolution sol = solve_ruin(hx, rho);
      const auto m = measure_max_error([&](double u) { return exact_ruin_abate_whitt(2.0, rho, u); },
                                       [&](double u) { return ruin_spectral(sol, u); }, sol.delta);
      const double printed = t.max_error[i];
      if (m.max_error > sol.delta) ++violations;
      if (std::fabs(m.max_error - printed) > kMaxErrorRel * printed + kMaxErrorPrint) ++violations;
      worst_rel = std::max(worst_rel, std::fabs(m.max_error - printed) / printed);
      min_ratio = std::min(min_ratio, sol.delta / m.max_error);
    }
  }
  if (min_ratio < kMinRatio) ++violations;
  o.pass = violations == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "27 cells, max error <= delta; worst rel. dev. from printed %.3f; min ratio %.3f",
                worst_rel, min_ratio);
  o.detail = buf;
  return o;
}

Outcome extended_bounds() {
  Outcome o;
  const std::array<double, 6> weibull = {0.78, 0.65, 0.52, 0.39, 0.26, 0.13};
  const std::array<double, 6> pareto = {0.90, 0.75, 0.60, 0.45, 0.30, 0.15};
  double worst = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    worst = std::max(worst, std::fabs(extended_bound(ClaimModel::weibull_half(3.0), kMatchRhos[i]) - weibull[i]));
    worst = std::max(worst, std::fabs(extended_bound(ClaimModel::pareto(4.0, 3.0), kMatchRhos[i]) - pareto[i]));
  }
  o.pass = worst <= kHtDecimals;
  char buf[96];
  std::snprintf(buf, sizeof buf, "12 entries, worst |bound - printed| = %.4f", worst);
  o.detail = buf;
  return o;
}

Outcome matched() {
  Outcome o;
  const std::array<int, 6> weibull = {5, 8, 13, 25, 59, 248};
  const std::array<int, 6> pareto = {4, 7, 11, 21, 51, 215};
  std::string w = "weibull";
  std::string p = "pareto";
  int worst = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const int kw = matched_phases(ClaimModel::weibull_half(3.0), kMatchRhos[i]);
    const int kp = matched_phases(ClaimModel::pareto(4.0, 3.0), kMatchRhos[i]);
    worst = std::max({worst, std::abs(kw - weibull[i]), std::abs(kp - pareto[i])});
    w += " " + std::to_string(kw);
    p += " " + std::to_string(kp);
  }
  o.pass = worst <= kPhaseSlack;
  o.detail = w + "; " + p + "; max |diff| = " + std::to_string(worst);
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  struct Table {
    ClaimModel model;
    std::vector<double> u;
    std::vector<double> printed;
  };
  const Table tables[] = {
      {ClaimModel::weibull_half(3.0),
       {0, 5, 10, 15, 20, 25},
       {0.70000, 0.60745, 0.54574, 0.49580, 0.45312, 0.41603}},
      {ClaimModel::pareto(4.0, 3.0),
       {0.00, 0.10, 0.55, 1.00, 1.45, 1.90},
       {0.70000, 0.54805, 0.23572, 0.11499, 0.05983, 0.03215}},
  };
  double worst = 0.0;
  for (const auto& t : tables) {
    McConfig cfg;
    cfg.samples = 1'000'000;
    cfg.u_grid = t.u;
    const McEstimate est = mc_ruin(t.model, 0.7, cfg);
    for (std::size_t i = 0; i < t.u.size(); ++i) {
      const auto& p = est.points[i];
      worst = std::max(worst, std::fabs(p.estimate - t.printed[i]) / p.half_width_95);
    }
  }
  o.pass = worst <= kMcHalfWidths;
  char buf[128];
  std::snprintf(buf, sizeof buf, "12 table entries, 1e6 samples each table, worst deviation %.2f half-widths", worst);
  o.detail = buf;
  return o;
}

Outcome sup_norm_fit() {
  Outcome o;
  double worst_margin = -1.0;
  for (const auto& model : families()) {
    const SpectralCdf spectral(model);
    const double end = 100.0 * excess_ccdf_crossing(model);
    std::vector<double> grid;
    for (int i = 0; i <= 5000; ++i) {
      grid.push_back(end * i / 5000.0);
      grid.push_back(end * std::pow(10.0, -10.0 + 10.0 * i / 5000.0));
    }
    for (const int k : {1, 5, 10, 20, 100}) {
      const HyperExp hx = fit_hyperexp(spectral, k);
      double sup = 0.0;
      for (const double u : grid) sup = std::max(sup, std::fabs(excess_ccdf(model, u) - hx.ccdf(u)));
      worst_margin = std::max(worst_margin, sup * (k + 1.0));
    }
  }
  o.pass = worst_margin <= 1.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "3 families x 5 k, max sup-error * (k+1) = %.4f", worst_margin);
  o.detail = buf;
  return o;
}

Outcome convolution_bound() {
  Outcome o;
  const int k = 10;
  const std::size_t points = 8001;
  double worst = 0.0;  // |B0^n - B~0^n| / (n eps + slack eps), must stay <= 1
  for (const auto& model : families()) {
    const HyperExp hx = fit_hyperexp(model, k);
    const double eps = hx.accuracy();
    // The grid covers the bulk of a threefold sum of excess draws.
    const double end = 3.0 * excess_quantile(model, 0.99);
    const double h = end / (points - 1);
    const Tabulated b0 = tabulate_uniform(h, points, [&](double x) { return 1.0 - excess_ccdf(model, x); });
    const Tabulated b1 = tabulate_uniform(h, points, [&](double x) { return 1.0 - hx.ccdf(x); });
    Tabulated c0 = b0;
    Tabulated c1 = b1;
    for (int n = 2; n <= 3; ++n) {
      c0 = grid_convolve(c0, b0);
      c1 = grid_convolve(c1, b1);
      double gap = 0.0;
      for (std::size_t i = 0; i < points; ++i) gap = std::max(gap, std::fabs(c0.values[i] - c1.values[i]));
      worst = std::max(worst, gap / ((n + kConvSlack) * eps));
    }
  }
  o.pass = worst <= 1.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "n = 2,3 x 3 families, worst gap / ((n + 0.1) eps) = %.4f", worst);
  o.detail = buf;
  return o;
}

Outcome solver_structure() {
  Outcome o;
  Xoshiro256 rng(20'240'601);
  int failures = 0;
  double worst_sum = 0.0;
  double worst_transform = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double pick = rng.uniform();
    ClaimModel model = pick < 1.0 / 3 ? ClaimModel::abate_whitt(0.2 + 5.0 * rng.uniform())
                       : pick < 2.0 / 3 ? ClaimModel::weibull_half(0.1 + 10.0 * rng.uniform())
                                        : ClaimModel::pareto(1.2 + 10.0 * rng.uniform(), 0.1 + 5.0 * rng.uniform());
    if (model.family() == Family::abate_whitt && std::fabs(model.mu() - 1.0) < 1e-3)
      model = ClaimModel::abate_whitt(2.0);
    const int k = 1 + static_cast<int>(rng.uniform() * 50);
    const double rho = 0.01 + 0.98 * rng.uniform();
    const HyperExp hx = fit_hyperexp(model, k);
    const RuinSolution sol = solve_ruin(hx, rho);
    const auto& eta = sol.decay_rates;
    const auto& lambda = hx.rates();
    bool ok = eta.size() == lambda.size() && eta[0] > 0.0 && eta[0] < lambda[0];
    for (std::size_t i = 1; ok && i < eta.size(); ++i) ok = lambda[i - 1] < eta[i] && eta[i] < lambda[i];
    for (const double r : sol.coefficients) ok = ok && r > 0.0;
    const double sum = std::accumulate(sol.coefficients.begin(), sol.coefficients.end(), 0.0);
    worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
    for (int j = 0; j < 20; ++j) {
      const double s = lambda.back() * std::pow(10.0, -4.0 + 6.0 * j / 19.0);
      const double lhs = (1.0 - rho) / (1.0 - rho * hyperexp_lt(hx, s));
      worst_transform = std::max(worst_transform, std::fabs(sol.transform(s) - lhs));
    }
    if (!ok) ++failures;
  }
  o.pass = failures == 0 && worst_sum <= kResidueSum && worst_transform <= kTransform;
  char buf[160];
  std::snprintf(buf, sizeof buf, "100 instances, %d interlacing/sign failures, max |sum R - 1| = %.1e, max transform gap = %.1e",
                failures, worst_sum, worst_transform);
  o.detail = buf;
  return o;
}

Outcome single_phase() {
  Outcome o;
  double worst = 0.0;
  for (const double lambda : {0.25, 1.0, 3.0, 40.0}) {
    for (const double rho : {0.05, 0.3, 0.5, 0.8, 0.99}) {
      const RuinSolution sol = solve_ruin(HyperExp({lambda}, {1.0}), rho);
      for (const double u : {0.0, 0.1, 1.0, 5.0, 25.0}) {
        const double x = lambda * (1.0 - rho) * u;
        const double exact = rho * std::exp(-x);
        // in units of the rounding already present in exp(-x): exact * (1 + x) ulps
        worst = std::max(worst, std::fabs(ruin_spectral(sol, u) - exact) / (exact * (1.0 + x)));
      }
    }
  }
  o.pass = worst <= kMachine;
  char buf[96];
  std::snprintf(buf, sizeof buf, "100 points, max |deviation| / (psi (1 + lambda (1-rho) u)) = %.1e", worst);
  o.detail = buf;
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"phase count for delta = 0.02", phase_count},
      {"certified bound column", bound_column},
      {"end-to-end bound on Abate-Whitt", certified_end_to_end},
      {"extended heavy-traffic bounds", extended_bounds},
      {"matched phase counts", matched},
      {"Monte Carlo vs simulated tables", monte_carlo},
      {"sup-norm fit", sup_norm_fit},
      {"convolution bound n = 2, 3", convolution_bound},
      {"solver structure", solver_structure},
      {"single-phase closed form", single_phase},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
