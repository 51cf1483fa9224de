#pragma once

// Volumes of lp balls and of sublevel sets of homogeneous even symbols,
// scaling laws, and lattice-point counting with sandwich bounds.
//
// Closed form for the lp ball B^d_p = {x : sum |x_j|^p <= 1}:
//
//   vol B^d_p = 2^d Gamma(1 + 1/p)^d / Gamma(1 + d/p),
//
// evaluated through log-Gamma.  For p = 2m the volume is sandwiched by
//
//   2^d (e (d + 2m))^{-d/2m}  <=  vol B^d_{2m}  <=  2^d (2em/d)^{d/2m},
//
// and sqrt(d) (vol B^d_{2m})^{m/d} tends to 2^m sqrt(2em) Gamma(1+1/2m)^m
// as d grows.
//
// A homogeneous symbol a(z) of order 2m is nonnegative, even in every
// coordinate, and satisfies a(t z) = t^{2m} a(z); its sublevel set
// {z : a(z) < 1} therefore scales as vol{a < lambda} = vol{a < 1} lambda^{d/2m}
// and the integral of a over {a < lambda} equals
// d/(2m+d) vol{a < 1} lambda^{(2m+d)/2m}.  When every pure term z_j^{2m} is
// present, a(z) >= sum_j z_j^{2m}, so {a < 1} lies inside [-1, 1]^d and
// rejection sampling on that box is unbiased; a missing pure term makes the
// sublevel set unbounded along that axis.
//
// Lattice counting: A(r) = #{kbar in N^d : ||kbar||_p <= r} satisfies
//
//   2^{-d} (r - d^{1/p})^d vol B^d_p <= A(r) <= 2^{-d} (r + d^{1/p})^d vol B^d_p
//
// for r > d^{1/p}; below that threshold the lower bound is reported as 0
// with a validity flag.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace widths {

inline double lp_ball_volume(int d, double p) {
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  if (!(p > 0.0) || !std::isfinite(p))
    throw InvalidParameter("p must be positive and finite");
  const double log_volume = d * std::numbers::ln2 +
                            d * std::lgamma(1.0 + 1.0 / p) -
                            std::lgamma(1.0 + static_cast<double>(d) / p);
  return std::exp(log_volume);
}

struct VolumeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Closed-form sandwich for vol B^d_{2m}; cross-checked against the exact
// value on every call since both sides are cheap.
inline VolumeBounds volume_b2m_bounds(int d, int m) {
  if (d < 1 || m < 1) throw InvalidParameter("d and m must be >= 1");
  const double dd = d, mm = m;
  VolumeBounds b;
  b.lower = std::exp(d * std::numbers::ln2 -
                     dd / (2.0 * mm) * std::log(std::numbers::e * (dd + 2.0 * mm)));
  b.upper = std::exp(d * std::numbers::ln2 +
                     dd / (2.0 * mm) * std::log(2.0 * std::numbers::e * mm / dd));
  const double exact = lp_ball_volume(d, 2.0 * mm);
  if (!(b.lower <= exact && exact <= b.upper))
    throw CrossCheckMismatch("volume sandwich failed for d=" +
                             std::to_string(d) + ", m=" + std::to_string(m));
  return b;
}

// Limit of sqrt(d) (vol B^d_{2m})^{m/d} as d grows.
inline double b2m_volume_large_d_limit(int m) {
  if (m < 1) throw InvalidParameter("m must be >= 1");
  const double mm = m;
  return std::exp2(mm) * std::sqrt(2.0 * std::numbers::e * mm) *
         std::pow(std::tgamma(1.0 + 0.5 / mm), mm);
}

// Homogeneous even symbol a(z) of order 2m.  Table symbols carry a set of
// exponent multi-indices alpha with |alpha| = m, each contributing z^{2 alpha}
// with coefficient 1.  The Euclidean power family |z|^{2m} is kept as its own
// evaluation rule: its expansion over alpha has multinomial coefficients
// outside {0,1}, so it cannot be a table symbol.
class HomogeneousSymbol {
 public:
  static HomogeneousSymbol lp_sum(int m, int d) {
    validate_order(m, d);
    HomogeneousSymbol s(m, d, false);
    for (int j = 0; j < d; ++j) {
      std::vector<int> alpha(static_cast<std::size_t>(d), 0);
      alpha[static_cast<std::size_t>(j)] = m;
      s.terms_.push_back(std::move(alpha));
    }
    return s;
  }

  static HomogeneousSymbol euclidean(int m, int d) {
    validate_order(m, d);
    return HomogeneousSymbol(m, d, true);
  }

  static HomogeneousSymbol from_terms(int m, int d,
                                      std::vector<std::vector<int>> terms) {
    validate_order(m, d);
    if (terms.empty())
      throw InvalidParameter("symbol needs at least one nonzero coefficient");
    for (const std::vector<int>& alpha : terms) {
      if (alpha.size() != static_cast<std::size_t>(d))
        throw InvalidParameter("exponent multi-index has wrong dimension");
      int total = 0;
      for (int a : alpha) {
        if (a < 0) throw InvalidParameter("exponents must be nonnegative");
        total += a;
      }
      if (total != m)
        throw InvalidParameter("every exponent multi-index must have |alpha| = m");
    }
    HomogeneousSymbol s(m, d, false);
    s.terms_ = std::move(terms);
    return s;
  }

  int order() const noexcept { return m_; }
  int dimension() const noexcept { return d_; }
  bool is_euclidean_power() const noexcept { return euclidean_; }
  const std::vector<std::vector<int>>& terms() const noexcept { return terms_; }

  double operator()(const double* z) const {
    if (euclidean_) {
      double q = 0.0;
      for (int j = 0; j < d_; ++j) q += z[j] * z[j];
      return std::pow(q, m_);
    }
    double a = 0.0;
    for (const std::vector<int>& alpha : terms_) {
      double t = 1.0;
      for (int j = 0; j < d_; ++j) {
        const double zz = z[j] * z[j];
        for (int rep = 0; rep < alpha[static_cast<std::size_t>(j)]; ++rep)
          t *= zz;
      }
      a += t;
    }
    return a;
  }

  // True when a(t e_j) is nonzero for every coordinate direction: all pure
  // terms m e_j present (or the Euclidean family).  Then a(z) >= sum z_j^{2m},
  // the sublevel set {a < 1} lies in [-1, 1]^d, and rejection sampling there
  // is unbiased.  This is a sufficient criterion, not a characterization.
  bool is_coercive() const {
    if (euclidean_) return true;
    for (int j = 0; j < d_; ++j) {
      bool pure = false;
      for (const std::vector<int>& alpha : terms_)
        if (alpha[static_cast<std::size_t>(j)] == m_) pure = true;
      if (!pure) return false;
    }
    return true;
  }

  // Half-width of the bounding box for {a < 1}; throws when unbounded.
  double bounding_radius() const {
    if (!is_coercive())
      throw UnboundedSublevel(
          "some coordinate direction carries no pure term z_j^{2m}; the "
          "sublevel set may have infinite volume");
    return 1.0;
  }

  // Exact sublevel volume when the symbol is one of the closed-form
  // families: vol B^d_{2m} for the lp power sum, the Euclidean unit ball for
  // |z|^{2m}.
  std::optional<double> closed_form_volume() const {
    if (euclidean_) return lp_ball_volume(d_, 2.0);
    if (terms_.size() != static_cast<std::size_t>(d_)) return std::nullopt;
    // Exactly the d pure terms <=> lp power sum.
    std::vector<bool> seen(static_cast<std::size_t>(d_), false);
    for (const std::vector<int>& alpha : terms_) {
      int hot = -1;
      for (int j = 0; j < d_; ++j) {
        if (alpha[static_cast<std::size_t>(j)] == 0) continue;
        if (hot >= 0 || alpha[static_cast<std::size_t>(j)] != m_)
          return std::nullopt;
        hot = j;
      }
      if (hot < 0 || seen[static_cast<std::size_t>(hot)]) return std::nullopt;
      seen[static_cast<std::size_t>(hot)] = true;
    }
    return lp_ball_volume(d_, 2.0 * m_);
  }

 private:
  HomogeneousSymbol(int m, int d, bool euclidean)
      : m_(m), d_(d), euclidean_(euclidean) {}

  static void validate_order(int m, int d) {
    if (m < 1 || d < 1) throw InvalidParameter("m and d must be >= 1");
    if (d > 64) throw InvalidParameter("dimension capped at 64");
  }

  int m_;
  int d_;
  bool euclidean_;
  std::vector<std::vector<int>> terms_;
};

struct VolumeEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo volume of {z : a(z) < 1} by rejection sampling on the bounding
// box.  The counter-based generator keys every coordinate by (seed, sample
// index), so the tally is a sum of per-sample indicators and the result is
// bitwise independent of the worker count.
inline VolumeEstimate volume_sublevel_mc(const HomogeneousSymbol& symbol,
                                         std::uint64_t samples,
                                         std::uint64_t seed) {
  if (samples < 1000) throw InvalidParameter("need at least 1e3 samples");
  const double rho = symbol.bounding_radius();
  const int d = symbol.dimension();
  const unsigned max_workers = worker_count();
  std::vector<std::uint64_t> hits_per_worker(max_workers, 0);
  parallel_for_ranges(samples, [&](unsigned worker, std::uint64_t begin,
                                   std::uint64_t end) {
    double z[64];
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int j = 0; j < d; ++j)
        z[j] = uniform_symmetric(seed, i, static_cast<std::uint64_t>(j), rho);
      if (symbol(z) < 1.0) ++hits;
    }
    hits_per_worker[worker] += hits;
  });
  std::uint64_t hits = 0;
  for (std::uint64_t h : hits_per_worker) hits += h;

  double box = 1.0;
  for (int j = 0; j < d; ++j) box *= 2.0 * rho;
  const double n = static_cast<double>(samples);
  const double acceptance = static_cast<double>(hits) / n;
  VolumeEstimate est;
  est.mean = box * acceptance;
  est.standard_error =
      box * std::sqrt(std::max(acceptance * (1.0 - acceptance), 0.0) / n);
  est.samples = samples;
  est.seed = seed;
  return est;
}

// Scaling of a sublevel volume V(1) = V1 under dilation of the level:
// V(lambda) and the integral of the symbol over {a < lambda}.
struct SublevelScaling {
  double volume = 0.0;
  double integral = 0.0;
};

inline SublevelScaling sublevel_scaling(double v1, double lambda, int m,
                                        int d) {
  if (v1 < 0.0) throw InvalidParameter("V1 must be nonnegative");
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
  if (m < 1 || d < 1) throw InvalidParameter("m and d must be >= 1");
  const double dd = d, mm = m;
  SublevelScaling s;
  s.volume = v1 * std::pow(lambda, dd / (2.0 * mm));
  s.integral = dd / (2.0 * mm + dd) * v1 *
               std::pow(lambda, (2.0 * mm + dd) / (2.0 * mm));
  return s;
}

struct LatticeCount {
  std::uint64_t count = 0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool lower_valid = false;  // the sandwich lower bound needs r > d^{1/p}
};

namespace detail {

// base^p, exact products for integer p (test grids use p in {1,2,4,6}).
inline double p_power(double base, double p) {
  const int ip = static_cast<int>(p);
  if (p == static_cast<double>(ip) && ip >= 0 && ip <= 64)
    return ipow(base, ip);
  return std::pow(base, p);
}

inline std::uint64_t count_lattice_recursive(double budget, int remaining,
                                             double p) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (int k = 1; p_power(static_cast<double>(k), p) <= budget; ++k)
    total += count_lattice_recursive(
        budget - p_power(static_cast<double>(k), p), remaining - 1, p);
  return total;
}

}  // namespace detail

// Exact count of {kbar in N^d : ||kbar||_p <= r} with the sandwich bounds.
inline LatticeCount lattice_count(double r, int d, double p) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw InvalidParameter("r must be positive and finite");
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  if (!(p >= 1.0)) throw InvalidParameter("p must be >= 1");
  const double work_budget = 1e8;
  if (std::pow(r + 1.0, d) > work_budget)
    throw ResourceLimit("lattice enumeration budget exceeded",
                        static_cast<std::uint64_t>(work_budget),
                        static_cast<std::uint64_t>(std::pow(r + 1.0, d)));

  LatticeCount out;
  out.count = detail::count_lattice_recursive(detail::p_power(r, p), d, p);
  const double vol = lp_ball_volume(d, p);
  const double dp = std::pow(static_cast<double>(d), 1.0 / p);
  out.upper_bound = std::exp2(-d) * detail::ipow(r + dp, d) * vol;
  out.lower_valid = r > dp;
  out.lower_bound =
      out.lower_valid ? std::exp2(-d) * detail::ipow(r - dp, d) * vol : 0.0;
  return out;
}

}  // namespace widths
