#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "widths/fd_reference.hpp"
#include "widths/univariate.hpp"

using namespace widths;

namespace {

constexpr double kBeamLambda1 = 500.563901740432596;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("second order extrapolation hits the closed form",
          "[fd_reference]") {
  const double exact = std::numbers::pi * std::numbers::pi;
  const ExtrapolatedEigenvalue fe = fd_eigenvalue_extrapolated(
      1, 1.0, BoundaryCondition::Dirichlet, 1, 100);
  REQUIRE(rel(fe.value, exact) < 1e-7);
  REQUIRE(fe.observed_order > 1.8);
  REQUIRE(fe.observed_order < 2.2);
  REQUIRE(fe.error_estimate >= std::fabs(fe.value - exact));
}

TEST_CASE("clamped fourth order extrapolation meets the frozen root",
          "[fd_reference]") {
  const ExtrapolatedEigenvalue fe = fd_eigenvalue_extrapolated(
      2, 1.0, BoundaryCondition::Dirichlet, 1, 200);
  REQUIRE(rel(fe.value, kBeamLambda1) < 1e-6);
  REQUIRE(fe.observed_order > 1.8);
  REQUIRE(fe.observed_order < 2.2);
}

TEST_CASE("sixth order extrapolation is honest about first order accuracy",
          "[fd_reference]") {
  const UnivariateSpectrum sp = dirichlet_eigenvalues(3, 1.0, 1);
  const double det_root = sp.value(1).estimate;
  const ExtrapolatedEigenvalue fe = fd_eigenvalue_extrapolated(
      3, 1.0, BoundaryCondition::Dirichlet, 1, 100);
  REQUIRE(rel(fe.value, det_root) < 1e-2);
  // The zero-extension rows converge at first order; the measured order and
  // the error bar must reflect that rather than pretend otherwise.
  REQUIRE(fe.observed_order < 1.6);
  REQUIRE(fe.error_estimate >= std::fabs(fe.value - det_root));
}

TEST_CASE("natural matrices have an m-dimensional kernel", "[fd_reference]") {
  for (int m : {1, 2, 3}) {
    const int grid = 200;
    const BandedSymmetric a =
        fd_matrix_1d(m, 2.0, BoundaryCondition::Neumann, grid);
    const std::vector<double> values =
        fd_eigenvalues(m, 2.0, BoundaryCondition::Neumann, m + 1, grid);
    const double noise = 8.0 * a.inf_norm() * 2.22e-16;
    for (int i = 0; i < m; ++i) REQUIRE(std::fabs(values[i]) <= noise);
    const double first_positive = values[static_cast<std::size_t>(m)];
    REQUIRE(first_positive > 100.0 * noise);
    REQUIRE(first_positive >
            0.5 * eigenvalue_bracket(m, 2.0, 1).lower);
  }
}

TEST_CASE("natural second order value approaches the closed form",
          "[fd_reference]") {
  const double pi = std::numbers::pi;
  const std::vector<double> values =
      fd_eigenvalues(1, pi, BoundaryCondition::Neumann, 2, 200);
  REQUIRE(std::fabs(values[0]) < 1e-9);
  REQUIRE(rel(values[1], 1.0) < 1e-3);
}

TEST_CASE("two dimensional discretization reproduces tensor sums",
          "[fd_reference]") {
  const double pi = std::numbers::pi;
  // Lowest sums on the square of side pi: 2, 5, 5 (closed forms).
  const std::vector<double> fd = fd2d_dirichlet_smallest(1, pi, 40, 3);
  REQUIRE(rel(fd[0], 2.0) < 5e-3);
  REQUIRE(rel(fd[1], 5.0) < 5e-3);
  REQUIRE(rel(fd[2], 5.0) < 5e-3);

  // Fourth order: lowest sum is twice the clamped-beam root.
  const std::vector<double> fd2 = fd2d_dirichlet_smallest(2, 1.0, 48, 1);
  REQUIRE(rel(fd2[0], 2.0 * kBeamLambda1) < 2e-2);
}

TEST_CASE("two dimensional oracle rejects unvalidated orders",
          "[fd_reference]") {
  REQUIRE_THROWS_AS(fd2d_dirichlet_smallest(3, 1.0, 64, 1),
                    InvalidParameter);
}

TEST_CASE("resolution guards reject underresolved grids", "[fd_reference]") {
  REQUIRE_THROWS_AS(
      fd_eigenvalues(2, 1.0, BoundaryCondition::Dirichlet, 10, 64),
      InsufficientResolution);
  REQUIRE_THROWS_AS(
      fd_matrix_1d(3, 1.0, BoundaryCondition::Dirichlet, 12),
      InsufficientResolution);
}

TEST_CASE("extrapolation validates its inputs", "[fd_reference]") {
  REQUIRE_THROWS_AS(fd_eigenvalue_extrapolated(
                        1, 1.0, BoundaryCondition::Dirichlet, 0, 100),
                    InvalidParameter);
  REQUIRE_THROWS_AS(fd_eigenvalue_extrapolated(
                        0, 1.0, BoundaryCondition::Dirichlet, 1, 100),
                    InvalidParameter);
}
