#pragma once

// Closed-form bounds, thresholds, and asymptotic constants for the
// approximation numbers a_k of the box Sobolev embeddings, as pure functions
// of (k, m, d, vol Omega, vol A) or (k, m, d, L).
//
// Writing M = vol Omega / (2 pi)^d * vol A for the phase-volume factor of the
// symbol's sublevel set A = {a < 1}:
//
//   upper (Dirichlet type):  a_k   <= sqrt((2m+d)/d) M^{m/d} k^{-m/d},
//   lower (Neumann type):    a_{k+1} >= [1 + ((2m+d)/2m)^{2m/d} M^{-2m/d}
//                                          k^{2m/d}]^{-1/2},
//   eigenvalue sums:         d/(2m+d) M^{-2m/d} k^{(2m+d)/d}
//                            (an upper bound for Neumann sums of mu_j and a
//                             lower bound for Dirichlet sums of lambda_j),
//   asymptotic constant:     lim a_k k^{m/d} = M^{m/d}.
//
// For the cube [0, L]^d with the per-axis symbol sum_j z_j^{2m} (so that
// vol A = vol B^d_{2m} and M^{m/d} = (L/2pi)^m (vol B^d_{2m})^{m/d}) there
// are fully explicit two-sided estimates with computable rank thresholds:
//
//   k >= (2m)^d (d^{1/2m}+1)^d vol B^d_{2m}
//     ==> a_k <= (L/pi)^m  (vol B^d_{2m})^{m/d} k^{-m/d},
//   k >= (1/2 + (m+d^{1/2m})/2 + L/2pi)^d vol B^d_{2m}
//     ==> a_k >= (L/4pi)^m (vol B^d_{2m})^{m/d} k^{-m/d},
//
// and a sharpened family trading constants for thresholds: for 0 < eps <= 1
// the factors 2^{+-m} improve to (1 +- eps)^m at the enlarged ranks
//
//   k0(eps) = ((1+eps)/eps)^d m^d (d^{1/2m}+1)^d vol B^d_{2m},
//   k1(eps) = (1/2 + ((1-eps)/eps)((m+d^{1/2m})/2 + L/2pi))^d vol B^d_{2m};
//
// eps = 1 reproduces the explicit upper threshold, eps = 1/2 the lower one,
// and the eps = 1 lower factor degenerates to 0 (flagged, not an error).
// Thresholds are kept as exact reals with the integer ceiling exposed
// alongside, avoiding off-by-one ambiguity at the boundary; vol B^d_{2m}
// inside thresholds always uses the Gamma closed form.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "geometry.hpp"

namespace widths {

enum class BoundKind { Upper, Lower };

inline const char* to_string(BoundKind kind) {
  return kind == BoundKind::Upper ? "upper" : "lower";
}

struct BoundEvaluation {
  std::size_t k = 0;
  double value = 0.0;
  BoundKind kind = BoundKind::Upper;
  double valid_from_real = 1.0;   // exact real threshold
  std::size_t valid_from = 1;     // ceiling, for integer-rank comparisons
  const char* formula_id = "";
};

namespace detail {

inline void validate_bound_parameters(std::size_t k, int m, int d,
                                      double vol_omega, double vol_a) {
  if (k < 1) throw InvalidParameter("rank k must be >= 1");
  if (m < 1 || d < 1) throw InvalidParameter("m and d must be >= 1");
  if (!(vol_omega > 0.0) || !(vol_a > 0.0))
    throw InvalidParameter("volumes must be positive");
}

inline void validate_cube(int m, int d, double length) {
  if (m < 1 || d < 1) throw InvalidParameter("m and d must be >= 1");
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidParameter("length must be positive and finite");
}

// vol Omega / (2 pi)^d * vol A.
inline double phase_volume(int d, double vol_omega, double vol_a) {
  return vol_omega * std::pow(2.0 * std::numbers::pi, -d) * vol_a;
}

inline std::size_t ceil_rank(double threshold) {
  const double c = std::ceil(threshold);
  if (c < 1.0) return 1;
  return static_cast<std::size_t>(c);
}

}  // namespace detail

// Upper bound for a_k of the Dirichlet-type embedding; valid for every rank.
inline BoundEvaluation dirichlet_upper_bound(std::size_t k, int m, int d,
                                             double vol_omega, double vol_a) {
  detail::validate_bound_parameters(k, m, d, vol_omega, vol_a);
  const double md = static_cast<double>(m) / d;
  BoundEvaluation b;
  b.k = k;
  b.kind = BoundKind::Upper;
  b.formula_id = "embedding_upper";
  b.value = std::sqrt((2.0 * m + d) / d) *
            std::pow(detail::phase_volume(d, vol_omega, vol_a), md) *
            std::pow(static_cast<double>(k), -md);
  return b;
}

// Lower bound asserted for a_{k+1} of the Neumann-type embedding; valid for
// every rank.
inline BoundEvaluation neumann_lower_bound(std::size_t k, int m, int d,
                                           double vol_omega, double vol_a) {
  detail::validate_bound_parameters(k, m, d, vol_omega, vol_a);
  const double tmd = 2.0 * m / d;
  BoundEvaluation b;
  b.k = k;
  b.kind = BoundKind::Lower;
  b.formula_id = "embedding_lower";
  const double growth =
      std::pow((2.0 * m + d) / (2.0 * m), tmd) *
      std::pow(detail::phase_volume(d, vol_omega, vol_a), -tmd) *
      std::pow(static_cast<double>(k), tmd);
  b.value = 1.0 / std::sqrt(1.0 + growth);
  return b;
}

// d/(2m+d) (vol Omega/(2pi)^d vol A)^{-2m/d} k^{(2m+d)/d}: an upper bound for
// the first k Neumann eigenvalue sums and a lower bound for the Dirichlet
// ones.
inline double eigenvalue_sum_upper(std::size_t k, int m, int d,
                                   double vol_omega, double vol_a) {
  detail::validate_bound_parameters(k, m, d, vol_omega, vol_a);
  const double dd = d;
  return dd / (2.0 * m + dd) *
         std::pow(detail::phase_volume(d, vol_omega, vol_a), -2.0 * m / dd) *
         std::pow(static_cast<double>(k), (2.0 * m + dd) / dd);
}

// lim_k a_k k^{m/d}.
inline double asymptotic_constant(int m, int d, double vol_omega,
                                  double vol_a) {
  detail::validate_bound_parameters(1, m, d, vol_omega, vol_a);
  return std::pow(detail::phase_volume(d, vol_omega, vol_a),
                  static_cast<double>(m) / d);
}

struct ExplicitBounds {
  BoundEvaluation upper;
  BoundEvaluation lower;
};

// Fully explicit two-sided estimates on the cube [0, L]^d with per-axis
// symbol, with computable rank thresholds.
inline ExplicitBounds star_explicit_bounds(std::size_t k, int m, int d,
                                           double length) {
  if (k < 1) throw InvalidParameter("rank k must be >= 1");
  detail::validate_cube(m, d, length);
  const double pi = std::numbers::pi;
  const double vol_ball = lp_ball_volume(d, 2.0 * m);
  const double ball_md = std::pow(vol_ball, static_cast<double>(m) / d);
  const double k_md = std::pow(static_cast<double>(k),
                               -static_cast<double>(m) / d);
  const double droot = std::pow(static_cast<double>(d), 0.5 / m);

  // The threshold expressions below are written in exactly the shape of the
  // eps-family so that eps = 1 (upper) and eps = 1/2 (lower) reproduce them
  // bit for bit.
  ExplicitBounds out;
  out.upper.k = k;
  out.upper.kind = BoundKind::Upper;
  out.upper.formula_id = "explicit_upper";
  out.upper.value = std::pow(length / pi, m) * ball_md * k_md;
  out.upper.valid_from_real =
      widths::detail::ipow(2.0 * m * (droot + 1.0), d) * vol_ball;
  out.upper.valid_from = detail::ceil_rank(out.upper.valid_from_real);

  out.lower.k = k;
  out.lower.kind = BoundKind::Lower;
  out.lower.formula_id = "explicit_lower";
  out.lower.value = std::pow(length / (4.0 * pi), m) * ball_md * k_md;
  out.lower.valid_from_real =
      widths::detail::ipow(
          0.5 + (0.5 * (m + droot) + length / (2.0 * pi)), d) *
      vol_ball;
  out.lower.valid_from = detail::ceil_rank(out.lower.valid_from_real);
  return out;
}

struct EpsilonThresholds {
  double eps = 0.0;
  double k0 = 0.0;            // rank from which the upper factor applies
  double k1 = 0.0;            // rank from which the lower factor applies
  double upper_factor = 0.0;  // attaches to k^{-m/d}
  double lower_factor = 0.0;
  bool lower_degenerate = false;  // (1-eps)^m = 0 at eps = 1
};

// Sharpened constants (1 +- eps)^m with enlarged rank thresholds.
inline EpsilonThresholds epsilon_thresholds(double eps, int m, int d,
                                            double length) {
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw InvalidParameter("eps must lie in (0, 1]");
  detail::validate_cube(m, d, length);
  const double pi = std::numbers::pi;
  const double vol_ball = lp_ball_volume(d, 2.0 * m);
  const double ball_md = std::pow(vol_ball, static_cast<double>(m) / d);
  const double droot = std::pow(static_cast<double>(d), 0.5 / m);
  const double base = std::pow(length / (2.0 * pi), m) * ball_md;

  EpsilonThresholds t;
  t.eps = eps;
  t.k0 = widths::detail::ipow((1.0 + eps) / eps * m * (droot + 1.0), d) *
         vol_ball;
  t.k1 = widths::detail::ipow(
             0.5 + (1.0 - eps) / eps * (0.5 * (m + droot) + length / (2.0 * pi)),
             d) *
         vol_ball;
  t.upper_factor = base * std::pow(1.0 + eps, m);
  t.lower_factor = base * std::pow(1.0 - eps, m);
  t.lower_degenerate = t.lower_factor == 0.0;
  return t;
}

enum class ExampleVariant { Star, LaplacePower, Fractional };

inline const char* to_string(ExampleVariant v) {
  switch (v) {
    case ExampleVariant::Star: return "star";
    case ExampleVariant::LaplacePower: return "laplace_power";
    default: return "fractional";
  }
}

// Self-contained upper bounds obtained by replacing the sublevel volume with
// its closed-form estimate; valid for every rank.
//   Star:         per-axis symbol on the cube of side 2 pi,
//                 sqrt((2m+d)/d) 2^m (2em/d)^{1/2} k^{-m/d}.
//   LaplacePower: Euclidean symbol |z|^{2m} on the same cube,
//                 sqrt((2m+d)/d) pi^{m/2} (2e/d)^{m/2} k^{-m/d}.
//   Fractional:   smoothness s > 0 and integrability p > 0 on a domain of
//                 volume vol_omega,
//                 sqrt((2s+d)/d) (vol_omega/(2pi)^d)^{s/d} 2^s C(p) k^{-s/d}
//                 with C(p) = (ep/d)^{s/p} for p >= 1 and
//                 C(p) = (e(p+1)/d)^{s/p} for 0 < p < 1.
inline BoundEvaluation example_upper_bounds(ExampleVariant variant,
                                            std::size_t k, double m_or_s,
                                            int d, double p,
                                            double vol_omega) {
  if (k < 1) throw InvalidParameter("rank k must be >= 1");
  if (d < 1) throw InvalidParameter("d must be >= 1");
  const double e = std::numbers::e;
  const double dd = d;
  BoundEvaluation b;
  b.k = k;
  b.kind = BoundKind::Upper;

  if (variant == ExampleVariant::Fractional) {
    const double s = m_or_s;
    if (!(s > 0.0) || !(p > 0.0))
      throw InvalidParameter("fractional variant needs s > 0 and p > 0");
    if (!(vol_omega > 0.0))
      throw InvalidParameter("vol_omega must be positive");
    const double volume_factor =
        std::pow(vol_omega * std::pow(2.0 * std::numbers::pi, -d), s / dd);
    const double cp = p >= 1.0 ? std::pow(e * p / dd, s / p)
                               : std::pow(e * (p + 1.0) / dd, s / p);
    b.formula_id = "example_fractional";
    b.value = std::sqrt((2.0 * s + dd) / dd) * volume_factor *
              std::exp2(s) * cp * std::pow(static_cast<double>(k), -s / dd);
    return b;
  }

  const int m = static_cast<int>(m_or_s);
  if (m < 1 || static_cast<double>(m) != m_or_s)
    throw InvalidParameter("this variant needs integer m >= 1");
  const double factor = std::sqrt((2.0 * m + dd) / dd);
  const double k_md = std::pow(static_cast<double>(k),
                               -static_cast<double>(m) / dd);
  if (variant == ExampleVariant::Star) {
    b.formula_id = "example_star";
    b.value = factor * std::exp2(m) * std::sqrt(2.0 * e * m / dd) * k_md;
  } else {
    b.formula_id = "example_laplace_power";
    b.value = factor * std::pow(std::numbers::pi * 2.0 * e / dd, 0.5 * m) *
              k_md;
  }
  return b;
}

}  // namespace widths
