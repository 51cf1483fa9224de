#pragma once

// Finite-difference reference discretizations for the interval problems in
// univariate.hpp, kept independent of the determinant solver: eigenvalues
// come from inertia-counting bisection on symmetric banded matrices, the
// discretizations act on the quadratic forms behind the variational
// eigenvalue characterisations.
//
// Dirichlet, m <= 2: vertex grid t_i = i h, h = L / (N + 1), unknowns at
// i = 1..N, the (2m+1)-point central stencil of (-1)^m d^{2m}/dt^{2m}.
// Boundary values vanish; ghost nodes are filled by the parity reflection
// u(-t) = (-1)^m u(t), which together with u(0) = 0 encodes exactly the
// clamped conditions for m <= 2 (for m = 2 this is the classical clamped
// corner with diagonal weight 7).  Observed eigenvalue error: O(h^2).
//
// Dirichlet, m >= 3: a pure reflection cannot encode three or more clamped
// conditions (the odd reflection alone yields the Navier problem), so the
// energy form is discretized instead: u is extended by zero outside the
// interior nodes and A = S^T S / h^{2m} sums the squares of all m-th forward
// differences touching the domain.  A is symmetric positive definite and
// spectrally correct; the zero extension costs one order at the boundary,
// giving an observed O(h) eigenvalue error.  The Richardson helper measures
// the order from the data, so extrapolated values remain trustworthy.
//
// Neumann, any m: cell-centered grid t_i = (i + 1/2) h, h = L / N, and
// A = (D^m)^T D^m / h^{2m} over the m-th forward differences, all of which
// lie inside the domain.  A is symmetric positive semidefinite with kernel
// dimension exactly m (discrete polynomials of degree < m), mirroring the
// continuous problem.  Natural boundary conditions make the missing boundary
// slivers of the energy integral high order: observed O(h^2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "univariate.hpp"

namespace widths {

namespace detail {

// Central difference coefficients c_k, k = 0..m, of (-1)^m delta^{2m}:
// the weight of u_{i+k} (and u_{i-k}) is (-1)^k binom(2m, m+k).
inline std::vector<double> central_stencil(int m) {
  std::vector<double> c(static_cast<std::size_t>(m) + 1);
  double binom = 1.0;  // binom(2m, m)
  for (int i = 1; i <= m; ++i) binom *= static_cast<double>(m + i) / i;
  for (int k = 0; k <= m; ++k) {
    c[k] = (k % 2 == 0 ? binom : -binom);
    // binom(2m, m+k+1) = binom(2m, m+k) * (m-k) / (m+k+1)
    binom *= static_cast<double>(m - k) / (m + k + 1);
  }
  return c;
}

// Forward difference coefficients s_t = (-1)^{m-t} binom(m, t), t = 0..m.
inline std::vector<double> forward_stencil(int m) {
  std::vector<double> s(static_cast<std::size_t>(m) + 1);
  double binom = 1.0;
  for (int t = 0; t <= m; ++t) {
    s[t] = ((m - t) % 2 == 0 ? binom : -binom);
    binom *= static_cast<double>(m - t) / (t + 1);
  }
  return s;
}

}  // namespace detail

// Assembled 1D finite-difference matrix; exposed for the tensorization
// cross-check and tests.
inline BandedSymmetric fd_matrix_1d(int m, double length, BoundaryCondition bc,
                                    int grid_points) {
  detail::validate_problem(m, length);
  if (grid_points < 4 * m + 4)
    throw InsufficientResolution("grid must have at least 4m + 4 points");
  const int n = grid_points;
  BandedSymmetric a(n, m);

  if (bc == BoundaryCondition::Dirichlet && m <= 2) {
    const double h = length / (n + 1);
    const std::vector<double> c = detail::central_stencil(m);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    // Row i couples to i + o; each upper-triangle entry is generated by
    // exactly one row because the boundary reflection is an involution.
    // Images land at distance <= m from i, inside the band.
    for (int i = 1; i <= n; ++i)
      for (int o = -m; o <= m; ++o) {
        const int j = i + o;
        const double w = c[static_cast<std::size_t>(std::abs(o))];
        if (j >= 1 && j <= n) {
          if (j >= i) a.add(i - 1, j - 1, w);
          continue;
        }
        if (j == 0 || j == n + 1) continue;  // boundary node, u = 0
        const int img = j < 0 ? -j : 2 * (n + 1) - j;
        if (img >= 1 && img <= n && img >= i) a.add(i - 1, img - 1, sign * w);
      }
    a.scale(1.0 / detail::ipow(h, 2 * m));
    return a;
  }

  if (bc == BoundaryCondition::Dirichlet) {
    // Zero-extension energy form: rows r = 1-m .. n, nodes outside 1..n
    // contribute nothing (node 0 and n+1 are genuine zeros).
    const double h = length / (n + 1);
    const std::vector<double> s = detail::forward_stencil(m);
    for (int r = 1 - m; r <= n; ++r)
      for (int t1 = 0; t1 <= m; ++t1) {
        const int i = r + t1;
        if (i < 1 || i > n) continue;
        for (int t2 = t1; t2 <= m; ++t2) {
          const int j = r + t2;
          if (j < 1 || j > n) continue;
          a.add(i - 1, j - 1, s[t1] * s[t2]);
        }
      }
    a.scale(1.0 / detail::ipow(h, 2 * m));
    return a;
  }

  // Neumann: all m-th differences lie inside the domain.
  const double h = length / n;
  const std::vector<double> s = detail::forward_stencil(m);
  for (int r = 0; r + m < n; ++r)
    for (int t1 = 0; t1 <= m; ++t1)
      for (int t2 = t1; t2 <= m; ++t2) a.add(r + t1, r + t2, s[t1] * s[t2]);
  a.scale(1.0 / detail::ipow(h, 2 * m));
  return a;
}

// First n_max eigenvalues of the finite-difference discretization, ascending.
inline std::vector<double> fd_eigenvalues(int m, double length,
                                          BoundaryCondition bc,
                                          std::size_t n_max, int grid_points) {
  if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
  if (grid_points < static_cast<int>(8 * (n_max + 2 * m)))
    throw InsufficientResolution(
        "grid_points must be >= 8 (n_max + 2m) to resolve the requested "
        "eigenvalues");
  const BandedSymmetric a = fd_matrix_1d(m, length, bc, grid_points);
  return a.smallest(static_cast<int>(n_max));
}

struct ExtrapolatedEigenvalue {
  double value = 0.0;           // Richardson-extrapolated eigenvalue
  double error_estimate = 0.0;  // |finest correction|, conservative
  double observed_order = 0.0;  // measured convergence order in h
};

// Three dyadic grids, observed-order Richardson extrapolation.
inline ExtrapolatedEigenvalue fd_eigenvalue_extrapolated(
    int m, double length, BoundaryCondition bc, std::size_t index,
    int base_grid) {
  if (index < 1) throw InvalidParameter("eigenvalue index must be >= 1");
  const double v1 = fd_eigenvalues(m, length, bc, index, base_grid)[index - 1];
  const double v2 =
      fd_eigenvalues(m, length, bc, index, 2 * base_grid)[index - 1];
  const double v4 =
      fd_eigenvalues(m, length, bc, index, 4 * base_grid)[index - 1];
  ExtrapolatedEigenvalue out;
  const double d1 = v2 - v1, d2 = v4 - v2;
  if (d2 == 0.0 || !(d1 / d2 > 1.0)) {
    // Differences no longer behave like a power law; the finest value stands.
    out.value = v4;
    out.error_estimate = std::max(std::fabs(d1), std::fabs(d2));
    out.observed_order = 0.0;
    return out;
  }
  out.observed_order = std::clamp(std::log2(d1 / d2), 0.5, 4.0);
  const double factor = std::exp2(out.observed_order) - 1.0;
  const double correction = d2 / factor;
  out.value = v4 + correction;
  out.error_estimate = std::fabs(correction);
  return out;
}

// Direct 2D discretization of the sum of per-axis operators on the square
// (0, L)^2 with Dirichlet conditions: the independent cross-check for the
// tensor-product construction.  Returns the `count` smallest eigenvalues.
// Restricted to m <= 2, where the parity closure is clamped-consistent.
inline std::vector<double> fd2d_dirichlet_smallest(int m, double length,
                                                   int grid_per_side,
                                                   int count) {
  detail::validate_problem(m, length);
  if (m > 2)
    throw InvalidParameter("the 2D cross-check discretization supports m <= 2");
  if (grid_per_side < 4 * m + 4)
    throw InsufficientResolution("grid must have at least 4m + 4 points");
  const int n1 = grid_per_side;
  const double h = length / (n1 + 1);
  const std::vector<double> c = detail::central_stencil(m);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  BandedSymmetric a(n1 * n1, m * n1);

  // idx(i, j) = (i - 1) n1 + (j - 1); one folded 1D stencil per axis.
  const auto idx = [n1](int i, int j) { return (i - 1) * n1 + (j - 1); };
  const auto couple = [&](int row, int i, int j, double w) {
    const int col = idx(i, j);
    if (col >= row) a.add(row, col, w);
  };
  for (int i = 1; i <= n1; ++i)
    for (int j = 1; j <= n1; ++j) {
      const int row = idx(i, j);
      for (int o = -m; o <= m; ++o) {
        const double w = c[static_cast<std::size_t>(std::abs(o))];
        // x-axis neighbour (i + o, j)
        int p = i + o;
        if (p >= 1 && p <= n1)
          couple(row, p, j, w);
        else if (p != 0 && p != n1 + 1) {
          const int img = p < 0 ? -p : 2 * (n1 + 1) - p;
          if (img >= 1 && img <= n1) couple(row, img, j, sign * w);
        }
        // y-axis neighbour (i, j + o)
        p = j + o;
        if (p >= 1 && p <= n1)
          couple(row, i, p, w);
        else if (p != 0 && p != n1 + 1) {
          const int img = p < 0 ? -p : 2 * (n1 + 1) - p;
          if (img >= 1 && img <= n1) couple(row, i, img, sign * w);
        }
      }
    }
  a.scale(1.0 / detail::ipow(h, 2 * m));
  return a.smallest(count);
}

}  // namespace widths
