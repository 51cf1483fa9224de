#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <vector>

#include "widths/geometry.hpp"

using namespace widths;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("unit ball volumes match closed forms", "[geometry]") {
  const double pi = std::numbers::pi;
  REQUIRE(rel(lp_ball_volume(2, 2.0), pi) < 1e-14);
  REQUIRE(rel(lp_ball_volume(1, 2.0), 2.0) < 1e-14);
  REQUIRE(rel(lp_ball_volume(1, 7.5), 2.0) < 1e-14);
  REQUIRE(rel(lp_ball_volume(2, 1.0), 2.0) < 1e-14);
  REQUIRE(rel(lp_ball_volume(4, 2.0), pi * pi / 2.0) < 1e-14);
  REQUIRE(rel(lp_ball_volume(3, 2.0), 4.0 * pi / 3.0) < 1e-14);
  REQUIRE(rel(lp_ball_volume(3, 1.0), 4.0 / 3.0) < 1e-14);
  REQUIRE(rel(lp_ball_volume(2, 4.0), 3.7081493546027438) < 1e-14);
  REQUIRE_THROWS_AS(lp_ball_volume(0, 2.0), InvalidParameter);
  REQUIRE_THROWS_AS(lp_ball_volume(2, 0.0), InvalidParameter);
  REQUIRE_THROWS_AS(lp_ball_volume(2, -1.0), InvalidParameter);
}

TEST_CASE("volume sandwich brackets the exact value", "[geometry]") {
  const VolumeBounds b = volume_b2m_bounds(4, 1);
  REQUIRE(rel(b.lower, 0.060149014771827863) < 1e-13);
  REQUIRE(rel(b.upper, 29.556224395722601) < 1e-13);
  // The bounds self-check against the exact volume and throw on a
  // violation, so a clean sweep is itself the assertion.
  for (int d : {1, 2, 4, 8, 16, 32, 64}) {
    for (int m : {1, 2, 4, 8}) {
      const VolumeBounds bounds = volume_b2m_bounds(d, m);
      const double exact = lp_ball_volume(d, 2.0 * m);
      REQUIRE(bounds.lower <= exact);
      REQUIRE(exact <= bounds.upper);
    }
  }
}

TEST_CASE("scaled volumes approach the dimension-free limit", "[geometry]") {
  const double limit1 = b2m_volume_large_d_limit(1);
  REQUIRE(rel(limit1, 4.13273135412) < 1e-10);
  // sqrt(d) (vol B^d_{2m})^{m/d} converges to the limit as d grows.
  const auto scaled = [](int m, int d) {
    return std::sqrt(static_cast<double>(d)) *
           std::pow(lp_ball_volume(d, 2.0 * m), static_cast<double>(m) / d);
  };
  REQUIRE(rel(scaled(1, 200), 4.066679) < 1e-5);
  REQUIRE(rel(scaled(1, 200), limit1) < 0.02);
  for (int m : {1, 2, 3}) {
    const double limit = b2m_volume_large_d_limit(m);
    const double coarse = std::fabs(scaled(m, 50) / limit - 1.0);
    const double fine = std::fabs(scaled(m, 400) / limit - 1.0);
    REQUIRE(fine < coarse);
    REQUIRE(fine < 0.05);
  }
  REQUIRE_THROWS_AS(b2m_volume_large_d_limit(0), InvalidParameter);
}

TEST_CASE("symbol families report their structure", "[geometry]") {
  const HomogeneousSymbol lp = HomogeneousSymbol::lp_sum(2, 3);
  REQUIRE(lp.order() == 2);
  REQUIRE(lp.dimension() == 3);
  REQUIRE(lp.is_coercive());
  REQUIRE(lp.bounding_radius() == 1.0);
  REQUIRE(lp.closed_form_volume().has_value());
  REQUIRE(rel(*lp.closed_form_volume(), lp_ball_volume(3, 4.0)) < 1e-14);

  const HomogeneousSymbol eu = HomogeneousSymbol::euclidean(2, 4);
  REQUIRE(eu.is_euclidean_power());
  REQUIRE(eu.is_coercive());
  REQUIRE(rel(*eu.closed_form_volume(), lp_ball_volume(4, 2.0)) < 1e-14);

  // Mixed coercive symbol: pure quartics plus a cross term.  No closed
  // form, but still bounded.
  const HomogeneousSymbol mixed = HomogeneousSymbol::from_terms(
      2, 2, {{2, 0}, {0, 2}, {1, 1}});
  REQUIRE(mixed.is_coercive());
  REQUIRE_FALSE(mixed.closed_form_volume().has_value());
  const double z[2] = {0.5, 0.5};
  // 0.5^4 + 0.5^4 + 0.25 * 0.25 = 0.1875
  REQUIRE(rel(mixed(z), 0.1875) < 1e-15);

  // Without a pure term in the second coordinate the sublevel set is an
  // unbounded slab.
  const HomogeneousSymbol slab =
      HomogeneousSymbol::from_terms(2, 2, {{2, 0}, {1, 1}});
  REQUIRE_FALSE(slab.is_coercive());
  REQUIRE_THROWS_AS(slab.bounding_radius(), UnboundedSublevel);
  REQUIRE_THROWS_AS(volume_sublevel_mc(slab, 10000, 1), UnboundedSublevel);
}

TEST_CASE("symbol construction validates exponents", "[geometry]") {
  REQUIRE_THROWS_AS(HomogeneousSymbol::lp_sum(0, 2), InvalidParameter);
  REQUIRE_THROWS_AS(HomogeneousSymbol::lp_sum(1, 0), InvalidParameter);
  REQUIRE_THROWS_AS(HomogeneousSymbol::lp_sum(1, 65), InvalidParameter);
  REQUIRE_THROWS_AS(HomogeneousSymbol::from_terms(2, 2, {}),
                    InvalidParameter);
  REQUIRE_THROWS_AS(HomogeneousSymbol::from_terms(2, 2, {{2, 0, 0}}),
                    InvalidParameter);
  REQUIRE_THROWS_AS(HomogeneousSymbol::from_terms(2, 2, {{3, -1}}),
                    InvalidParameter);
  REQUIRE_THROWS_AS(HomogeneousSymbol::from_terms(2, 2, {{1, 0}}),
                    InvalidParameter);
}

TEST_CASE("rejection sampling hits closed forms within three sigma",
          "[geometry]") {
  const double pi = std::numbers::pi;
  const HomogeneousSymbol disk = HomogeneousSymbol::lp_sum(1, 2);
  const VolumeEstimate est = volume_sublevel_mc(disk, 1000000, 42);
  REQUIRE(est.samples == 1000000);
  REQUIRE(est.seed == 42);
  REQUIRE(est.standard_error > 0.0);
  REQUIRE(std::fabs(est.mean - pi) <= 3.0 * est.standard_error);

  const HomogeneousSymbol eu = HomogeneousSymbol::euclidean(2, 4);
  const VolumeEstimate eu_est = volume_sublevel_mc(eu, 200000, 42);
  REQUIRE(std::fabs(eu_est.mean - pi * pi / 2.0) <=
          3.0 * eu_est.standard_error);

  // The cross term only shrinks the quartic sublevel set.
  const HomogeneousSymbol mixed = HomogeneousSymbol::from_terms(
      2, 2, {{2, 0}, {0, 2}, {1, 1}});
  const VolumeEstimate mixed_est = volume_sublevel_mc(mixed, 200000, 7);
  REQUIRE(mixed_est.mean <
          lp_ball_volume(2, 4.0) + 3.0 * mixed_est.standard_error);
  REQUIRE(mixed_est.mean > pi - 3.0 * mixed_est.standard_error);

  REQUIRE_THROWS_AS(volume_sublevel_mc(disk, 999, 42), InvalidParameter);
}

TEST_CASE("sampling is deterministic and worker-independent", "[geometry]") {
  const HomogeneousSymbol ball = HomogeneousSymbol::lp_sum(1, 3);
  const VolumeEstimate a = volume_sublevel_mc(ball, 50000, 9001);
  const VolumeEstimate b = volume_sublevel_mc(ball, 50000, 9001);
  REQUIRE(a.mean == b.mean);
  REQUIRE(a.standard_error == b.standard_error);

  setenv("WIDTHS_THREADS", "1", 1);
  const VolumeEstimate serial = volume_sublevel_mc(ball, 50000, 9001);
  unsetenv("WIDTHS_THREADS");
  REQUIRE(serial.mean == a.mean);

  const VolumeEstimate other = volume_sublevel_mc(ball, 50000, 9002);
  REQUIRE(other.mean != a.mean);
}

TEST_CASE("sublevel quantities scale with the level", "[geometry]") {
  const double pi = std::numbers::pi;
  const SublevelScaling s = sublevel_scaling(pi, 4.0, 1, 2);
  REQUIRE(rel(s.volume, 4.0 * pi) < 1e-14);
  REQUIRE(rel(s.integral, 8.0 * pi) < 1e-14);
  // lambda = 1 reproduces the inputs.
  const SublevelScaling unit = sublevel_scaling(2.5, 1.0, 3, 4);
  REQUIRE(unit.volume == 2.5);
  REQUIRE(rel(unit.integral, 4.0 / 10.0 * 2.5) < 1e-14);
  REQUIRE_THROWS_AS(sublevel_scaling(-1.0, 1.0, 1, 1), InvalidParameter);
  REQUIRE_THROWS_AS(sublevel_scaling(1.0, 0.0, 1, 1), InvalidParameter);
  REQUIRE_THROWS_AS(sublevel_scaling(1.0, 1.0, 0, 1), InvalidParameter);
}

TEST_CASE("lattice counts sit inside their sandwich", "[geometry]") {
  const double pi = std::numbers::pi;
  const double rt2 = std::sqrt(2.0);
  const LatticeCount c22 = lattice_count(2.0, 2, 2.0);
  REQUIRE(c22.count == 1);
  REQUIRE(c22.lower_valid);
  REQUIRE(rel(c22.lower_bound, 0.25 * (2.0 - rt2) * (2.0 - rt2) * pi) <
          1e-13);
  REQUIRE(rel(c22.upper_bound, 0.25 * (2.0 + rt2) * (2.0 + rt2) * pi) <
          1e-13);
  REQUIRE(rel(c22.lower_bound, 0.2695) < 1e-3);
  REQUIRE(rel(c22.upper_bound, 9.1553) < 1e-4);

  const LatticeCount c11 = lattice_count(1.0, 1, 2.0);
  REQUIRE(c11.count == 1);
  REQUIRE_FALSE(c11.lower_valid);
  REQUIRE(c11.lower_bound == 0.0);
  REQUIRE(rel(c11.upper_bound, 2.0) < 1e-14);

  // One dimension, radius 3.5: the positive integers 1, 2, 3.
  const LatticeCount c1 = lattice_count(3.5, 1, 2.0);
  REQUIRE(c1.count == 3);

  for (int d : {1, 2, 3}) {
    for (double p : {1.0, 2.0, 4.0}) {
      std::uint64_t previous = 0;
      for (double r : {2.0, 5.0, 10.0}) {
        const LatticeCount c = lattice_count(r, d, p);
        REQUIRE(static_cast<double>(c.count) <= c.upper_bound);
        if (c.lower_valid)
          REQUIRE(c.lower_bound <= static_cast<double>(c.count));
        REQUIRE(c.count >= previous);
        previous = c.count;
      }
    }
  }
}

TEST_CASE("lattice enumeration enforces its budget", "[geometry]") {
  REQUIRE_THROWS_AS(lattice_count(1e5, 3, 2.0), ResourceLimit);
  REQUIRE_THROWS_AS(lattice_count(0.0, 2, 2.0), InvalidParameter);
  REQUIRE_THROWS_AS(lattice_count(-1.0, 2, 2.0), InvalidParameter);
  REQUIRE_THROWS_AS(lattice_count(2.0, 0, 2.0), InvalidParameter);
  REQUIRE_THROWS_AS(lattice_count(2.0, 2, 0.5), InvalidParameter);
}
