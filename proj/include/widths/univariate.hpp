#pragma once

// One-dimensional polyharmonic eigenvalue problems on an interval [0, L]:
//
//   (-1)^m u^(2m)(t) = lambda u(t)
//
// with either Dirichlet conditions u^(j)(0) = u^(j)(L) = 0 for j = 0..m-1
// or natural (Neumann-type) conditions u^(j)(0) = u^(j)(L) = 0 for
// j = m..2m-1.  The Neumann problem has the eigenvalue 0 with multiplicity
// exactly m (polynomials of degree < m), and its positive eigenvalues
// coincide with the Dirichlet spectrum, shifted by m in the index.
//
// Eigenvalues are located as sign changes of a scaled characteristic
// determinant built from the 2m exponential solutions exp(r t) with
// r^{2m} = (-1)^{m+1} lambda, i.e. r_j = omega zeta_j, omega = lambda^{1/2m},
// zeta_j = exp(i pi (m + 2j) / (2m)).  Complex-conjugate root pairs
// contribute the real columns Re/Im(zeta^q exp(omega zeta (t - shift))),
// where shift = L for roots with positive real part anchors the growing
// exponential at the right endpoint.  With that shift every matrix entry has
// modulus <= 1, rows are additionally scaled by omega^{-q} (folded in by
// using zeta^q instead of r^q), and the resulting determinant differs from
// the raw one by a positive factor: its sign pattern in lambda is exact and
// evaluation is overflow-free far beyond any practical index.
//
// Every eigenvalue n carries the enclosure
//   (pi n / L)^{2m} <= lambda_n <= (pi (n + m - 1) / L)^{2m},
// which root isolation refines to the requested relative width.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "numeric.hpp"

namespace widths {

enum class BoundaryCondition { Dirichlet, Neumann };

inline const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

struct EigenvalueBracket {
  double lower = 0.0;
  double upper = 0.0;
};

struct EigenvalueEnclosure {
  std::size_t index = 0;  // 1-based
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  double width() const { return upper - lower; }
};

struct UnivariateSpectrum {
  int order = 1;       // m
  double length = 1.0; // L
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  std::vector<EigenvalueEnclosure> values;

  std::size_t count() const noexcept { return values.size(); }

  // 1-based access.
  const EigenvalueEnclosure& value(std::size_t n) const {
    if (n < 1 || n > values.size())
      throw IndexOutOfRange("eigenvalue index " + std::to_string(n) +
                            " outside computed range [1, " +
                            std::to_string(values.size()) + "]");
    return values[n - 1];
  }
};

namespace detail {

inline void validate_problem(int m, double length) {
  if (m < 1) throw InvalidParameter("derivative order m must be >= 1");
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidParameter("interval length must be positive and finite");
}

}  // namespace detail

// A priori bracket for the n-th Dirichlet eigenvalue.
inline EigenvalueBracket eigenvalue_bracket(int m, double length,
                                            std::size_t n) {
  detail::validate_problem(m, length);
  if (n < 1) throw InvalidParameter("eigenvalue index must be >= 1");
  const double pi = std::numbers::pi;
  EigenvalueBracket b;
  b.lower = detail::ipow(pi * static_cast<double>(n) / length, 2 * m);
  b.upper =
      detail::ipow(pi * static_cast<double>(n + m - 1) / length, 2 * m);
  return b;
}

namespace detail {

// Scaled characteristic determinant as a function of omega = lambda^{1/2m}.
// Sign changes in omega are exactly the sign changes in lambda.
inline double boundary_determinant_omega(int m, double length,
                                         BoundaryCondition bc, double omega) {
  const int n = 2 * m;
  const double pi = std::numbers::pi;
  const int q0 = bc == BoundaryCondition::Dirichlet ? 0 : m;
  // Reused scratch: root isolation evaluates this in the millions.
  thread_local std::vector<double> mat;
  mat.assign(static_cast<std::size_t>(n) * n, 0.0);
  // Row layout: derivative orders q0..q0+m-1 at t = 0, then the same at t = L.
  const auto row_of = [&](int endpoint, int dq) { return endpoint * m + dq; };
  int col = 0;

  const auto put = [&](int row, int c, double v) {
    mat[static_cast<std::size_t>(row) * n + c] = v;
  };

  // Conjugate root pairs: indices j with Re(i zeta_j) in the upper half plane.
  for (int j = 0; j < 2 * m; ++j) {
    const bool upper_pair = (2 * j < m) || (2 * j > 3 * m);
    if (!upper_pair) continue;
    // zeta = exp(i pi (m + 2j) / (2m)); j == 0 is exactly the pair (i, -i).
    std::complex<double> zeta;
    if (j == 0) {
      zeta = {0.0, 1.0};
    } else {
      const double theta = pi * (m + 2.0 * j) / (2.0 * m);
      zeta = {std::cos(theta), std::sin(theta)};
    }
    const double shift = zeta.real() > 0.0 ? length : 0.0;
    for (int endpoint = 0; endpoint < 2; ++endpoint) {
      const double t = endpoint == 0 ? 0.0 : length;
      const std::complex<double> e = std::exp(omega * zeta * (t - shift));
      std::complex<double> zq = e;
      for (int q = 0; q < q0; ++q) zq *= zeta;
      for (int dq = 0; dq < m; ++dq) {
        put(row_of(endpoint, dq), col, zq.real());
        put(row_of(endpoint, dq), col + 1, zq.imag());
        zq *= zeta;
      }
    }
    col += 2;
  }

  // Real roots +-1 exist exactly when m is even.
  if (m % 2 == 0) {
    for (int sgn : {-1, 1}) {
      const double shift = sgn > 0 ? length : 0.0;
      for (int endpoint = 0; endpoint < 2; ++endpoint) {
        const double t = endpoint == 0 ? 0.0 : length;
        const double e = std::exp(omega * sgn * (t - shift));
        double zq = e * (q0 % 2 == 0 ? 1.0 : sgn);
        for (int dq = 0; dq < m; ++dq) {
          put(row_of(endpoint, dq), col, zq);
          zq *= sgn;
        }
      }
      ++col;
    }
  }

  return lu_determinant_inplace(mat.data(), n);
}

}  // namespace detail

// Scaled characteristic determinant at lambda > 0.  Zeros in lambda are
// exactly the positive eigenvalues of the requested problem; the scaling
// preserves signs.
inline double characteristic_determinant(int m, double length,
                                         BoundaryCondition bc, double lambda) {
  detail::validate_problem(m, length);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidParameter("lambda must be positive and finite");
  const double omega = std::pow(lambda, 0.5 / static_cast<double>(m));
  return detail::boundary_determinant_omega(m, length, bc, omega);
}

namespace detail {

struct OmegaInterval {
  double lo = 0.0, hi = 0.0;
  double f_lo = 0.0, f_hi = 0.0;
};

// Collects the first `needed` sign-change intervals of the determinant on the
// omega grid [start, end] with the given step.  Grid points that evaluate to
// exactly zero are nudged by a fraction of the step.
inline std::vector<OmegaInterval> scan_sign_changes(int m, double length,
                                                    double start, double end,
                                                    double step,
                                                    std::size_t needed) {
  std::vector<OmegaInterval> found;
  double x_prev = start;
  double f_prev =
      boundary_determinant_omega(m, length, BoundaryCondition::Dirichlet, x_prev);
  for (int nudge = 0; f_prev == 0.0 && nudge < 8; ++nudge) {
    x_prev += step * 1e-3;
    f_prev = boundary_determinant_omega(m, length, BoundaryCondition::Dirichlet,
                                        x_prev);
  }
  for (double x = start + step; x_prev < end && found.size() < needed;
       x += step) {
    double f = boundary_determinant_omega(m, length,
                                          BoundaryCondition::Dirichlet, x);
    for (int nudge = 0; f == 0.0 && nudge < 8; ++nudge) {
      x += step * 1e-3;
      f = boundary_determinant_omega(m, length, BoundaryCondition::Dirichlet, x);
    }
    if ((f_prev < 0.0 && f > 0.0) || (f_prev > 0.0 && f < 0.0))
      found.push_back({x_prev, x, f_prev, f});
    x_prev = x;
    f_prev = f;
  }
  return found;
}

// Bisection to the requested relative lambda-width, then a clamped secant
// polish for the point estimate.  The returned enclosure stays an enclosure.
inline EigenvalueEnclosure refine_root(int m, double length,
                                       OmegaInterval iv, double tol,
                                       std::size_t index) {
  constexpr int budget = 200;
  const double two_m = 2.0 * m;
  double a = iv.lo, b = iv.hi, fa = iv.f_lo, fb = iv.f_hi;
  int it = 0;
  // (b^{2m} - a^{2m}) / a^{2m} <= tol once 2m (b - a) / a is small enough.
  while (two_m * (b - a) / a > 0.9 * tol) {
    if (it++ >= budget)
      throw ConvergenceFailure(
          "eigenvalue " + std::to_string(index) +
              " did not reach the requested enclosure width within budget",
          index);
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) {
      // Machine resolution reached; accept if the actual width passes.
      if ((ipow(b, 2 * m) - ipow(a, 2 * m)) / ipow(a, 2 * m) <= tol) break;
      throw ConvergenceFailure(
          "eigenvalue " + std::to_string(index) +
              " enclosure width is limited by machine precision above tol",
          index);
    }
    double fm =
        boundary_determinant_omega(m, length, BoundaryCondition::Dirichlet, mid);
    if (fm == 0.0) {
      a = b = mid;
      fa = fb = 0.0;
      break;
    }
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  double est = 0.5 * (a + b);
  if (a < b && fa != fb) {
    double x0 = a, f0 = fa, x1 = b, f1 = fb;
    for (int k = 0; k < 6 && f1 != f0; ++k) {
      const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      if (!std::isfinite(x2) || x2 <= a || x2 >= b) break;
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = boundary_determinant_omega(m, length, BoundaryCondition::Dirichlet,
                                      x1);
      if (f1 == 0.0) break;
    }
    est = x1;
  }
  EigenvalueEnclosure e;
  e.index = index;
  e.lower = ipow(a, 2 * m);
  e.upper = ipow(b, 2 * m);
  e.estimate = std::clamp(ipow(est, 2 * m), e.lower, e.upper);
  return e;
}

}  // namespace detail

// First n_max Dirichlet eigenvalues, ascending, each with an enclosure of
// relative width <= tol.  m == 1 uses the closed form (pi n / L)^2 with
// zero-width enclosures.
inline UnivariateSpectrum dirichlet_eigenvalues(int m, double length,
                                                std::size_t n_max,
                                                double tol = 1e-10) {
  detail::validate_problem(m, length);
  if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
  if (!(tol > 0.0) || !(tol < 1.0))
    throw InvalidParameter("tol must lie in (0, 1)");

  UnivariateSpectrum sp;
  sp.order = m;
  sp.length = length;
  sp.bc = BoundaryCondition::Dirichlet;
  sp.values.reserve(n_max);

  if (m == 1) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      const double lam = eigenvalue_bracket(1, length, n).lower;
      sp.values.push_back({n, lam, lam, lam});
    }
    return sp;
  }

  const double pi = std::numbers::pi;
  // At least 4(m+1) scan panels per a priori bracket.
  const double base_step =
      std::min(pi * (m - 1) / (4.0 * (m + 1) * length), pi / (8.0 * length));
  const double start = 0.5 * pi / length;
  const double end = pi * static_cast<double>(n_max + m - 1) / length +
                     0.5 * base_step;

  std::vector<detail::OmegaInterval> intervals;
  for (int attempt = 0; attempt < 7; ++attempt) {
    const double step = base_step / static_cast<double>(1 << attempt);
    intervals = detail::scan_sign_changes(m, length, start, end, step, n_max);
    if (intervals.size() >= n_max) {
      bool contained = true;
      sp.values.clear();
      for (std::size_t n = 1; n <= n_max; ++n) {
        EigenvalueEnclosure e =
            detail::refine_root(m, length, intervals[n - 1], tol, n);
        const EigenvalueBracket br = eigenvalue_bracket(m, length, n);
        // A containment violation signals a missed root; rescan finer.
        if (e.lower < br.lower * (1.0 - 1e-12) ||
            e.upper > br.upper * (1.0 + 1e-12)) {
          contained = false;
          break;
        }
        sp.values.push_back(e);
      }
      if (contained) return sp;
    }
  }
  throw ConvergenceFailure(
      "root isolation found only " + std::to_string(intervals.size()) +
          " of " + std::to_string(n_max) + " eigenvalues",
      intervals.size() + 1);
}

// First n_max Neumann eigenvalues: 0 with multiplicity m (exact), then the
// Dirichlet values shifted by m in the index, enclosures copied bit for bit.
inline UnivariateSpectrum neumann_eigenvalues(int m, double length,
                                              std::size_t n_max,
                                              double tol = 1e-10) {
  detail::validate_problem(m, length);
  if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
  if (!(tol > 0.0) || !(tol < 1.0))
    throw InvalidParameter("tol must lie in (0, 1)");

  UnivariateSpectrum sp;
  sp.order = m;
  sp.length = length;
  sp.bc = BoundaryCondition::Neumann;
  sp.values.reserve(n_max);
  const std::size_t zeros = std::min<std::size_t>(n_max, m);
  for (std::size_t n = 1; n <= zeros; ++n) sp.values.push_back({n, 0.0, 0.0, 0.0});
  if (n_max > static_cast<std::size_t>(m)) {
    UnivariateSpectrum dir =
        dirichlet_eigenvalues(m, length, n_max - m, tol);
    for (EigenvalueEnclosure e : dir.values) {
      e.index += m;
      sp.values.push_back(e);
    }
  }
  return sp;
}

inline UnivariateSpectrum univariate_eigenvalues(int m, double length,
                                                 BoundaryCondition bc,
                                                 std::size_t n_max,
                                                 double tol = 1e-10) {
  return bc == BoundaryCondition::Dirichlet
             ? dirichlet_eigenvalues(m, length, n_max, tol)
             : neumann_eigenvalues(m, length, n_max, tol);
}

}  // namespace widths
