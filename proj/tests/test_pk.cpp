#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ruinkit/error.hpp"
#include "ruinkit/oracle.hpp"
#include "ruinkit/pk.hpp"
#include "ruinkit/rng.hpp"

using namespace ruinkit;

TEST_CASE("Laplace transform examples") {
  const HyperExp single({1.0}, {1.0});
  const HyperExp two = HyperExp::equal_weights({1.0, 3.0});
  CHECK(hyperexp_lt(single, 0.0) == 1.0);
  CHECK(hyperexp_lt(two, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hyperexp_lt(single, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hyperexp_lt(two, 1.0) == doctest::Approx(0.625).epsilon(1e-15));
  double previous = 1.0;
  for (double s = 0.1; s < 100.0; s *= 1.5) {
    const double v = hyperexp_lt(two, s);
    CHECK(v < previous);
    previous = v;
  }
  CHECK_THROWS_AS(hyperexp_lt(two, -0.5), DomainError);
}

TEST_CASE("root examples") {
  const HyperExp single({1.0}, {1.0});
  const auto r1 = solve_roots(single, 0.5);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == doctest::Approx(0.5).epsilon(1e-12));

  // 1 - 0.5 (0.5/(1-x) + 1.5/(3-x)) = 0  <=>  x^2 - 3x + 1.5 = 0
  const HyperExp two = HyperExp::equal_weights({1.0, 3.0});
  const auto r2 = solve_roots(two, 0.5);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0] == doctest::Approx((3.0 - std::sqrt(3.0)) / 2.0).epsilon(1e-12));
  CHECK(r2[1] == doctest::Approx((3.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-12));
  CHECK(r2[0] < 1.0);
  CHECK(r2[1] > 1.0);
  CHECK(r2[1] < 3.0);
}

TEST_CASE("residues reproduce the transform") {
  const HyperExp single({1.0}, {1.0});
  const auto etas1 = solve_roots(single, 0.5);
  const auto r1 = residues(single, 0.5, etas1);
  CHECK(r1[0] == doctest::Approx(1.0).epsilon(1e-12));

  const HyperExp two = HyperExp::equal_weights({1.0, 3.0});
  const RuinSolution sol = solve_ruin(two, 0.5);
  CHECK(std::accumulate(sol.coefficients.begin(), sol.coefficients.end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (const double s : {0.1, 1.0, 10.0}) {
    const double lhs = 0.5 / (1.0 - 0.5 * hyperexp_lt(two, s));
    CHECK(std::fabs(sol.transform(s) - lhs) < 1e-10);
  }
}

TEST_CASE("ruin probability examples") {
  const RuinSolution sol = solve_ruin(HyperExp({1.0}, {1.0}), 0.5);
  CHECK(ruin_spectral(sol, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ruin_spectral(sol, 2.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(ruin_spectral(sol, -1.0), DomainError);
  CHECK_THROWS_AS(solve_ruin(HyperExp({1.0}, {1.0}), 1.0), DomainError);
  CHECK_THROWS_AS(solve_ruin(HyperExp({1.0}, {1.0}), 0.0), DomainError);
}

TEST_CASE("M/M/1 closed form") {
  for (const double lambda : {0.3, 1.0, 7.0}) {
    for (const double rho : {0.1, 0.5, 0.95}) {
      const RuinSolution sol = solve_ruin(HyperExp({lambda}, {1.0}), rho);
      for (const double u : {0.0, 0.5, 3.0, 20.0}) {
        const double x = lambda * (1.0 - rho) * u;
        const double exact = rho * std::exp(-x);
        // rounding in the exponent alone moves exp(-x) by about x ulps
        CHECK(std::fabs(ruin_spectral(sol, u) - exact) <= 4.0 * DBL_EPSILON * exact * (1.0 + x));
      }
    }
  }
}

TEST_CASE("certified bound and phase count") {
  CHECK(certified_bound(1.0 / 11.0, 0.5) == doctest::Approx(0.0909090909).epsilon(1e-9));
  CHECK(certified_bound(1.0 / 101.0, 0.9) == doctest::Approx(0.0891089109).epsilon(1e-9));
  CHECK(phases_for_bound(0.02, 0.1) == 5);
  CHECK(phases_for_bound(0.02, 0.5) == 49);
  CHECK(phases_for_bound(0.02, 0.9) == 449);
  for (const double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const double delta : {0.1, 0.02, 0.005}) {
      const int k = phases_for_bound(delta, rho);
      CHECK(certified_bound(1.0 / (k + 1.0), rho) <= delta * (1.0 + 1e-12));
      if (k > 1) CHECK(certified_bound(1.0 / k, rho) > delta);
    }
  }
  CHECK_THROWS_AS(phases_for_bound(0.0, 0.5), DomainError);
}

TEST_CASE("coincident rates are merged before solving") {
  const HyperExp hx({1.0, 1.0 + 1e-14, 2.0}, {0.25, 0.25, 0.5});
  const HyperExp merged = merge_coincident_rates(hx);
  REQUIRE(merged.phases() == 2);
  CHECK(merged.weights()[0] == doctest::Approx(0.5));
  const RuinSolution sol = solve_ruin(hx, 0.6);
  CHECK(sol.decay_rates.size() == 2);
  CHECK(ruin_spectral(sol, 0.0) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("unresolvable bracket is a numeric error") {
  const HyperExp hx({1.0, std::nextafter(1.0, 2.0)}, {0.5, 0.5});
  CHECK_THROWS_AS(solve_roots(hx, 0.5), NumericError);
}

TEST_CASE("solver structure on random instances") {
  Xoshiro256 rng(7);
  const ClaimModel models[] = {ClaimModel::abate_whitt(2.0), ClaimModel::abate_whitt(0.3),
                               ClaimModel::weibull_half(3.0), ClaimModel::weibull_half(0.2),
                               ClaimModel::pareto(4.0, 3.0), ClaimModel::pareto(1.5, 1.0)};
  for (int trial = 0; trial < 30; ++trial) {
    const ClaimModel& model = models[trial % 6];
    const int k = 1 + static_cast<int>(rng.uniform() * 50);
    const double rho = 0.02 + 0.96 * rng.uniform();
    const HyperExp hx = fit_hyperexp(model, k);
    const RuinSolution sol = solve_ruin(hx, rho);
    CAPTURE(model.describe());
    CAPTURE(k);
    CAPTURE(rho);
    REQUIRE(sol.decay_rates.size() == hx.phases());
    CHECK(sol.decay_rates[0] > 0.0);
    CHECK(sol.decay_rates[0] < hx.rates()[0]);
    for (std::size_t i = 1; i < hx.phases(); ++i) {
      CHECK(sol.decay_rates[i] > hx.rates()[i - 1]);
      CHECK(sol.decay_rates[i] < hx.rates()[i]);
    }
    for (const double r : sol.coefficients) CHECK(r > 0.0);
    CHECK(std::fabs(std::accumulate(sol.coefficients.begin(), sol.coefficients.end(), 0.0) - 1.0) < 1e-10);
    for (double s = 0.01; s < 1e3; s *= 3.0) {
      const double lhs = (1.0 - rho) / (1.0 - rho * hyperexp_lt(hx, s));
      CHECK(std::fabs(sol.transform(s) - lhs) < 1e-10);
    }
  }
}

TEST_CASE("certified bound holds against the exact Abate-Whitt ruin probability") {
  const auto aw = ClaimModel::abate_whitt(2.0);
  for (const int k : {10, 20, 100}) {
    const HyperExp hx = fit_hyperexp(aw, k);
    for (int i = 1; i <= 9; ++i) {
      const double rho = 0.1 * i;
      const RuinSolution sol = solve_ruin(hx, rho);
      CHECK(sol.delta == doctest::Approx(certified_bound(1.0 / (k + 1.0), rho)));
      for (int j = 0; j < 500; ++j) {
        const double u = j < 250 ? 50.0 * j / 249.0 : 50.0 * std::pow(1e4, (j - 250) / 249.0);
        const double gap = std::fabs(exact_ruin_abate_whitt(2.0, rho, u) - ruin_spectral(sol, u));
        CAPTURE(k);
        CAPTURE(rho);
        CAPTURE(u);
        CHECK(gap <= sol.delta);
      }
    }
  }
}

TEST_CASE("more phases never loosen the measured error") {
  const auto aw = ClaimModel::abate_whitt(2.0);
  for (const double rho : {0.3, 0.7}) {
    double previous = 1.0;
    for (const int k : {10, 20, 100}) {
      const RuinSolution sol = solve_ruin(fit_hyperexp(aw, k), rho);
      double worst = 0.0;
      for (double u = 0.0; u < 1e6; u = u * 1.05 + 0.01)
        worst = std::max(worst, std::fabs(exact_ruin_abate_whitt(2.0, rho, u) - ruin_spectral(sol, u)));
      CHECK(worst <= previous);
      previous = worst;
    }
  }
}
