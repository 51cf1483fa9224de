#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "widths/tensor.hpp"

using namespace widths;

namespace {

constexpr double kBeamLambda1 = 500.563901740432596;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("rearrangement starts with the closed-form sequence",
          "[tensor]") {
  const double pi = std::numbers::pi;
  const auto entries = rearranged_approx_numbers(
      1, 2, pi, BoundaryCondition::Neumann, 4);
  // mu_n = (n-1)^2 on (0, pi), so the first sums are 0, 1, 1, 2.
  REQUIRE(entries[0].value == 1.0);
  REQUIRE(entries[0].witness == MultiIndex{1, 1});
  REQUIRE(entries[1].value == 1.0 / std::sqrt(2.0));
  REQUIRE(entries[1].witness == MultiIndex{1, 2});
  REQUIRE_FALSE(entries[1].tie_within_tolerance);
  REQUIRE(entries[2].value == 1.0 / std::sqrt(2.0));
  REQUIRE(entries[2].witness == MultiIndex{2, 1});
  REQUIRE(entries[2].tie_within_tolerance);
  REQUIRE(entries[3].value == 1.0 / std::sqrt(3.0));
  REQUIRE(entries[3].witness == MultiIndex{2, 2});
}

TEST_CASE("plateau has exactly m^d ones", "[tensor]") {
  const auto entries = rearranged_approx_numbers(
      2, 2, 1.0, BoundaryCondition::Neumann, 5);
  for (int k = 0; k < 4; ++k) REQUIRE(entries[k].value == 1.0);
  REQUIRE(entries[4].value < 1.0);
  REQUIRE(rel(entries[4].value, 1.0 / std::sqrt(1.0 + kBeamLambda1)) <
          1e-9);
}

TEST_CASE("clamped tensor value matches the frozen root", "[tensor]") {
  const auto entries = rearranged_approx_numbers(
      2, 2, 1.0, BoundaryCondition::Dirichlet, 1);
  REQUIRE(rel(entries[0].value, 1.0 / std::sqrt(2.0 * kBeamLambda1)) <
          1e-9);
  REQUIRE(entries[0].witness == MultiIndex{1, 1});
}

TEST_CASE("eigensum enclosure adds coordinates left to right", "[tensor]") {
  const double pi = std::numbers::pi;
  SpectrumProvider provider(1, pi, BoundaryCondition::Neumann);
  provider.enclosure(3);  // extend before reading the raw spectrum
  // mu_2 + mu_3 = 1 + 4 on (0, pi).
  REQUIRE(tensor_eigensum(MultiIndex{2, 3}, provider.spectrum()) == 5.0);
  const EigensumEnclosure e =
      tensor_eigensum_enclosure(MultiIndex{3, 2}, provider.spectrum());
  REQUIRE(e.estimate == 5.0);
  REQUIRE(e.lower <= e.estimate);
  REQUIRE(e.upper >= e.estimate);
  REQUIRE_THROWS_AS(tensor_eigensum(MultiIndex{}, provider.spectrum()),
                    InvalidParameter);
  REQUIRE_THROWS_AS(tensor_eigensum(MultiIndex{0, 1}, provider.spectrum()),
                    InvalidParameter);
}

TEST_CASE("approximation numbers from eigensums validate their input",
          "[tensor]") {
  REQUIRE(approx_number_from_eigensum(BoundaryCondition::Neumann, 0.0) ==
          1.0);
  REQUIRE(approx_number_from_eigensum(BoundaryCondition::Dirichlet, 4.0) ==
          0.5);
  REQUIRE_THROWS_AS(
      approx_number_from_eigensum(BoundaryCondition::Dirichlet, 0.0),
      InvalidParameter);
  REQUIRE_THROWS_AS(
      approx_number_from_eigensum(BoundaryCondition::Dirichlet, -1.0),
      InvalidParameter);
}

TEST_CASE("best-first equals brute force on mixed configurations",
          "[tensor]") {
  const double pi = std::numbers::pi;
  struct Case {
    int m, d;
    double length;
    BoundaryCondition bc;
    int box_side;
  };
  const Case cases[] = {
      {1, 1, 1.0, BoundaryCondition::Dirichlet, 320},
      {1, 2, pi, BoundaryCondition::Neumann, 40},
      {2, 2, 1.0, BoundaryCondition::Dirichlet, 40},
      {2, 3, 1.0, BoundaryCondition::Neumann, 18},
      {3, 2, 2.0 * pi, BoundaryCondition::Neumann, 40},
  };
  for (const Case& c : cases) {
    const std::size_t k_max = 300;
    const auto fast = rearranged_approx_numbers(c.m, c.d, c.length, c.bc,
                                               k_max);
    const auto slow = brute_force_rearrangement(c.m, c.d, c.length, c.bc,
                                                c.box_side, k_max);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t k = 0; k < k_max; ++k) {
      REQUIRE(fast[k].value == slow[k].value);
      REQUIRE(fast[k].witness == slow[k].witness);
      REQUIRE(fast[k].eigensum == slow[k].eigensum);
    }
  }
}

TEST_CASE("counting matches the level-set definition", "[tensor]") {
  const double pi = std::numbers::pi;
  // mu_l = (l-1)^2 on (0, pi): C(2, 2) counts sums <= 1: (1,1), (1,2),
  // (2,1).
  const CountResult c22 = level_set_count(1, 2, pi, 2);
  REQUIRE(c22.count == 3);
  REQUIRE(c22.certified_min == 3);
  REQUIRE(c22.ambiguous == 0);

  const CountResult c32 = level_set_count(1, 2, pi, 3);
  // sums <= 4: 0, 1, 1, 2, 4, 4 -> 6 points.
  REQUIRE(c32.count == 6);
}

TEST_CASE("level rank carries the level eigenvalue", "[tensor]") {
  const double pi = std::numbers::pi;
  for (int m : {1, 2}) {
    for (int d : {1, 2, 3}) {
      SpectrumProvider provider(m, pi, BoundaryCondition::Neumann);
      for (std::size_t l : {5, 12, 20}) {
        const double mu_l = provider.enclosure(l).estimate;
        const CountResult count = level_set_count(m, d, pi, l);
        const auto entries = rearranged_approx_numbers(
            m, d, pi, BoundaryCondition::Neumann, count.count);
        REQUIRE(entries.back().eigensum == mu_l);
        REQUIRE(entries.back().value ==
                approx_number_from_eigensum(BoundaryCondition::Neumann,
                                            mu_l));
      }
    }
  }
}

TEST_CASE("strict counting matches closed forms", "[tensor]") {
  const double pi = std::numbers::pi;
  // lambda_n = n^2 on (0, pi): strictly below 25 are 1, 4, 9, 16.
  const CountResult n25 =
      weyl_count(25.0, 1, 1, pi, BoundaryCondition::Dirichlet);
  REQUIRE(n25.count == 4);
  REQUIRE(n25.certified_min == 4);
  REQUIRE(n25.ambiguous == 0);

  const CountResult n2 =
      weyl_count(2.0, 1, 2, pi, BoundaryCondition::Dirichlet);
  REQUIRE(n2.count == 0);  // smallest sum is exactly 2, not below it
}

TEST_CASE("enumeration bookkeeping is audited", "[tensor]") {
  EnumerationStats stats;
  rearranged_approx_numbers(1, 3, 1.0, BoundaryCondition::Dirichlet, 500,
                            EnumerationOptions{}, &stats);
  REQUIRE(stats.pops == 500);
  REQUIRE(stats.visited_final == stats.pops + stats.frontier_final);
  REQUIRE(stats.frontier_high_water >= stats.frontier_final);
  REQUIRE(stats.pushes >= stats.pops);
}

TEST_CASE("frontier budget raises a resource limit", "[tensor]") {
  EnumerationOptions options;
  options.frontier_budget = 64;
  REQUIRE_THROWS_AS(
      rearranged_approx_numbers(1, 2, 1.0, BoundaryCondition::Dirichlet,
                                10000, options),
      ResourceLimit);
  try {
    rearranged_approx_numbers(1, 2, 1.0, BoundaryCondition::Dirichlet, 10000,
                              options);
  } catch (const ResourceLimit& e) {
    REQUIRE(e.budget() == 64);
    REQUIRE(e.high_water() >= 64);
  }
}

TEST_CASE("undersized brute-force boxes are rejected", "[tensor]") {
  REQUIRE_THROWS_AS(
      brute_force_rearrangement(1, 2, 1.0, BoundaryCondition::Dirichlet, 3,
                                9),
      BoxTooSmall);
  // A natural box smaller than m cannot certify anything: every excluded
  // index could still carry eigenvalue zero.
  REQUIRE_THROWS_AS(
      brute_force_rearrangement(2, 1, 1.0, BoundaryCondition::Neumann, 1, 1),
      BoxTooSmall);
  REQUIRE_THROWS_AS(
      brute_force_rearrangement(1, 2, 1.0, BoundaryCondition::Dirichlet, 0,
                                1),
      InvalidParameter);
}

TEST_CASE("dimension is capped by the packed key width", "[tensor]") {
  REQUIRE_THROWS_AS(
      rearranged_approx_numbers(1, 9, 1.0, BoundaryCondition::Neumann, 1),
      InvalidParameter);
  const auto entries = rearranged_approx_numbers(
      1, 8, 1.0, BoundaryCondition::Neumann, 10);
  REQUIRE(entries[0].value == 1.0);
  REQUIRE(entries[0].witness == MultiIndex{1, 1, 1, 1, 1, 1, 1, 1});
  REQUIRE(entries[9].value < 1.0);
}

TEST_CASE("ties share eigensum enclosures", "[tensor]") {
  const double pi = std::numbers::pi;
  const auto entries = rearranged_approx_numbers(
      1, 2, pi, BoundaryCondition::Dirichlet, 3);
  // Sums 2, 5, 5: the third entry ties the second.
  REQUIRE(entries[1].eigensum == 5.0);
  REQUIRE(entries[2].eigensum == 5.0);
  REQUIRE(entries[2].tie_within_tolerance);
  REQUIRE_FALSE(entries[1].tie_within_tolerance);
}
