#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "widths/bounds.hpp"

using namespace widths;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("phase-volume upper bound matches hand evaluation", "[bounds]") {
  // m = d = 1 on (0, 2pi) with the unit disk symbol: M = 2pi/(2pi) * 2 = 2.
  const BoundEvaluation b =
      dirichlet_upper_bound(4, 1, 1, 2.0 * kPi, 2.0);
  REQUIRE(b.k == 4);
  REQUIRE(b.kind == BoundKind::Upper);
  REQUIRE(std::string(b.formula_id) == "embedding_upper");
  // sqrt((2m+d)/d) * M^{m/d} * k^{-m/d} = sqrt(3) * 2 / 4.
  REQUIRE(rel(b.value, std::sqrt(3.0) / 2.0) < 1e-14);

  // Scaling in k: doubling k by 2^d divides the bound by 2^m.
  for (int m : {1, 2, 3}) {
    for (int d : {1, 2, 3}) {
      const double vol_a = 1.7;
      const double vol_omega = 0.9;
      const BoundEvaluation at_k =
          dirichlet_upper_bound(5, m, d, vol_omega, vol_a);
      const std::size_t shifted = 5ull << d;
      const BoundEvaluation at_shifted =
          dirichlet_upper_bound(shifted, m, d, vol_omega, vol_a);
      REQUIRE(rel(at_shifted.value, at_k.value * std::exp2(-m)) < 1e-14);
      REQUIRE(at_shifted.value < at_k.value);
    }
  }
}

TEST_CASE("phase-volume lower bound matches hand evaluation", "[bounds]") {
  // m = d = 1, M = 2: a_{k+1} >= [1 + (3/2)^2 M^{-2} k^2]^{-1/2}; at k = 2
  // the bracket is 1 + 2.25.
  const BoundEvaluation b = neumann_lower_bound(2, 1, 1, 2.0 * kPi, 2.0);
  REQUIRE(b.kind == BoundKind::Lower);
  REQUIRE(std::string(b.formula_id) == "embedding_lower");
  REQUIRE(rel(b.value, 1.0 / std::sqrt(1.0 + 2.25)) < 1e-14);
  // Monotone decreasing in k.
  double previous = 1.0;
  for (std::size_t k = 1; k <= 40; ++k) {
    const double v = neumann_lower_bound(k, 2, 3, 1.0, 4.0).value;
    REQUIRE(v < previous);
    previous = v;
  }
}

TEST_CASE("eigenvalue sum bound dominates the raw sum", "[bounds]") {
  // m = 1, d = 1, L = pi, Dirichlet: lambda_n = n^2 and M = 1/2 * 2 = ...
  // with the unit-disk symbol vol_a = 2, vol_omega = pi: M = 1/2 * ... the
  // bound must sit above 0 + 1 + 4 for the Neumann sum and below the
  // Dirichlet sum read as a lower bound.
  const double vol_omega = kPi;
  const double vol_a = 2.0;
  const double s3 = eigenvalue_sum_upper(3, 1, 1, vol_omega, vol_a);
  REQUIRE(s3 > 0.0 + 1.0 + 4.0);
  // Explicit form: d/(2m+d) * M^{-2m/d} * k^{(2m+d)/d}.
  const double M = vol_omega / (2.0 * kPi) * vol_a;
  REQUIRE(rel(s3, (1.0 / 3.0) * std::pow(M, -2.0) * 27.0) < 1e-14);
  REQUIRE(rel(s3, 9.0) < 1e-14);
}

TEST_CASE("asymptotic constant reduces to phase volume", "[bounds]") {
  const double four_pi_sq = 2.0 * kPi * 2.0 * kPi;
  REQUIRE(rel(asymptotic_constant(1, 2, four_pi_sq, kPi), std::sqrt(kPi)) <
          1e-14);
  REQUIRE(rel(asymptotic_constant(2, 2, four_pi_sq, 1.0), 1.0) < 1e-14);
  // M^{m/d} with M = vol_omega / (2pi)^d * vol_a.
  const double c = asymptotic_constant(3, 2, 5.0, 0.7);
  REQUIRE(rel(c, std::pow(5.0 * 0.7 / (4.0 * kPi * kPi), 1.5)) < 1e-14);
}

TEST_CASE("cube bounds carry their validity thresholds", "[bounds]") {
  // m = d = 1, L = 2pi: thresholds freeze at 8 (upper) and 5 (lower).
  const ExplicitBounds at8 = star_explicit_bounds(8, 1, 1, 2.0 * kPi);
  REQUIRE(at8.upper.valid_from == 8);
  REQUIRE(at8.lower.valid_from == 5);
  REQUIRE(rel(at8.upper.valid_from_real, 8.0) < 1e-12);
  REQUIRE(rel(at8.lower.valid_from_real, 5.0) < 1e-12);
  // (L/pi)^m vol^{m/d} k^{-m/d} = 2 * 2 / 8 = 0.5 and the lower analogue
  // (L/4pi)^m vol k^{-1} = 0.5 * 2 / 8 = 0.125.
  REQUIRE(rel(at8.upper.value, 0.5) < 1e-14);
  REQUIRE(rel(at8.lower.value, 0.125) < 1e-14);
  const ExplicitBounds at5 = star_explicit_bounds(5, 1, 1, 2.0 * kPi);
  REQUIRE(rel(at5.lower.value, 0.2) < 1e-14);

  // Consistency chain at any k: (L/pi)^m >= (L/2pi)^m >= (L/4pi)^m makes
  // upper >= asymptotic-style middle >= lower.
  for (int m : {1, 2}) {
    for (int d : {1, 2, 3}) {
      const ExplicitBounds e = star_explicit_bounds(100, m, d, 1.5);
      REQUIRE(e.upper.value > e.lower.value);
      REQUIRE(e.upper.kind == BoundKind::Upper);
      REQUIRE(e.lower.kind == BoundKind::Lower);
    }
  }
}

TEST_CASE("bounds scale like L^m through the cube length", "[bounds]") {
  const ExplicitBounds one = star_explicit_bounds(50, 2, 2, 1.0);
  const ExplicitBounds two = star_explicit_bounds(50, 2, 2, 2.0);
  REQUIRE(rel(two.upper.value, 4.0 * one.upper.value) < 1e-13);
  REQUIRE(rel(two.lower.value, 4.0 * one.lower.value) < 1e-13);
  // Thresholds move with L only in the lower family.
  REQUIRE(two.upper.valid_from_real == one.upper.valid_from_real);
  REQUIRE(two.lower.valid_from_real > one.lower.valid_from_real);
}

TEST_CASE("epsilon family degenerates to the explicit bounds", "[bounds]") {
  const double length = 2.0 * kPi;
  const EpsilonThresholds at1 = epsilon_thresholds(1.0, 1, 1, length);
  const ExplicitBounds star = star_explicit_bounds(8, 1, 1, length);
  // eps = 1 reproduces the upper threshold bit for bit.
  REQUIRE(at1.k0 == star.upper.valid_from_real);
  REQUIRE(at1.lower_degenerate);
  REQUIRE(at1.lower_factor == 0.0);

  const EpsilonThresholds at_half = epsilon_thresholds(0.5, 1, 1, length);
  // eps = 1/2 reproduces the lower threshold bit for bit.
  REQUIRE(at_half.k1 == star.lower.valid_from_real);
  REQUIRE_FALSE(at_half.lower_degenerate);
  // (1 + eps)/eps = 3 at eps = 1/2: k0 = (3 * 1 * 2)^1 * 2 = 12 and the
  // upper factor is (L/2pi)(1 + 1/2) * 2 = 3.
  REQUIRE(rel(at_half.k0, 12.0) < 1e-13);
  REQUIRE(at_half.upper_factor == 3.0);
  // Factors bracket the asymptotic constant.
  const double asym = asymptotic_constant(1, 1, length, 2.0);
  REQUIRE(at_half.lower_factor < asym);
  REQUIRE(asym < at_half.upper_factor);

  REQUIRE_THROWS_AS(epsilon_thresholds(0.0, 1, 1, 1.0), InvalidParameter);
  REQUIRE_THROWS_AS(epsilon_thresholds(1.5, 1, 1, 1.0), InvalidParameter);
  REQUIRE_THROWS_AS(epsilon_thresholds(-0.5, 1, 1, 1.0), InvalidParameter);
}

TEST_CASE("example bounds recover their closed forms", "[bounds]") {
  // Unit cube star case: sqrt((2m+d)/d) 2^m (2em/d)^{m/2} k^{-m/d}.
  const BoundEvaluation star =
      example_upper_bounds(ExampleVariant::Star, 4, 1.0, 2, 0.0, 1.0);
  const double expected_star =
      std::sqrt(2.0) * 2.0 * std::sqrt(std::numbers::e) * 0.5;
  REQUIRE(rel(star.value, expected_star) < 1e-13);
  REQUIRE(rel(star.value, 2.3316439816) < 1e-9);

  // The Laplacian-power variant only differs in the volume factor:
  // pi^{m/2}(2e/d)^{m/2} replaces 2^m (2em/d)^{m/2}; for m = 1 their ratio
  // is 2 sqrt(m) / sqrt(pi) > 1.
  const BoundEvaluation lap = example_upper_bounds(
      ExampleVariant::LaplacePower, 4, 1.0, 2, 0.0, 1.0);
  REQUIRE(rel(lap.value * 2.0 / std::sqrt(kPi), star.value) < 1e-13);
  REQUIRE(lap.value < star.value);

  // Fractional smoothness s with symbol exponent p:
  // sqrt((2s+d)/d) (vol/(2pi)^d)^{s/d} 2^s C(p) k^{-s/d}.
  const BoundEvaluation frac = example_upper_bounds(
      ExampleVariant::Fractional, 10, 0.75, 3, 2.0, 8.0);
  const double shared = std::sqrt(1.5) *
                        std::pow(8.0 / std::pow(2.0 * kPi, 3), 0.25) *
                        std::pow(2.0, 0.75) * std::pow(10.0, -0.25);
  const double expected_frac =
      shared * std::pow(std::numbers::e * 2.0 / 3.0, 0.75 / 2.0);
  REQUIRE(rel(frac.value, expected_frac) < 1e-13);
  REQUIRE(rel(frac.value, 0.6134538979) < 1e-9);

  // Slowly growing symbols 0 < p < 1 swap in (e(p + 1)/d)^{s/p}.
  const BoundEvaluation frac_small = example_upper_bounds(
      ExampleVariant::Fractional, 10, 0.75, 3, 0.5, 8.0);
  const double expected_small =
      shared * std::pow(std::numbers::e * 1.5 / 3.0, 0.75 / 0.5);
  REQUIRE(rel(frac_small.value, expected_small) < 1e-13);
  REQUIRE(rel(frac_small.value, 0.777772262792) < 1e-10);
}

TEST_CASE("bound arguments are validated", "[bounds]") {
  REQUIRE_THROWS_AS(dirichlet_upper_bound(0, 1, 1, 1.0, 1.0),
                    InvalidParameter);
  REQUIRE_THROWS_AS(dirichlet_upper_bound(1, 0, 1, 1.0, 1.0),
                    InvalidParameter);
  REQUIRE_THROWS_AS(dirichlet_upper_bound(1, 1, 0, 1.0, 1.0),
                    InvalidParameter);
  REQUIRE_THROWS_AS(dirichlet_upper_bound(1, 1, 1, -1.0, 1.0),
                    InvalidParameter);
  REQUIRE_THROWS_AS(dirichlet_upper_bound(1, 1, 1, 1.0, 0.0),
                    InvalidParameter);
  REQUIRE_THROWS_AS(neumann_lower_bound(0, 1, 1, 1.0, 1.0),
                    InvalidParameter);
  REQUIRE_THROWS_AS(star_explicit_bounds(1, 1, 1, 0.0), InvalidParameter);
  REQUIRE_THROWS_AS(star_explicit_bounds(0, 1, 1, 1.0), InvalidParameter);
  REQUIRE_THROWS_AS(
      example_upper_bounds(ExampleVariant::Fractional, 1, 0.0, 2, 1.0, 1.0),
      InvalidParameter);
  REQUIRE_THROWS_AS(
      example_upper_bounds(ExampleVariant::Fractional, 1, 1.0, 2, 0.0, 1.0),
      InvalidParameter);
  REQUIRE_THROWS_AS(
      example_upper_bounds(ExampleVariant::Fractional, 1, 1.0, 2, 1.0, -2.0),
      InvalidParameter);
  REQUIRE_THROWS_AS(
      example_upper_bounds(ExampleVariant::Star, 1, 1.5, 2, 0.0, 1.0),
      InvalidParameter);
}
