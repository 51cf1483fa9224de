#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace widths {

// Determinant of a small dense row-major n x n matrix by partial-pivot LU.
// The buffer is factored destructively.
inline double lu_determinant_inplace(double* a, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::fabs(a[static_cast<std::size_t>(c) * n + c]);
    for (int r = c + 1; r < n; ++r) {
      double v = std::fabs(a[static_cast<std::size_t>(r) * n + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * n + j],
                  a[static_cast<std::size_t>(c) * n + j]);
      det = -det;
    }
    const double pivot = a[static_cast<std::size_t>(c) * n + c];
    det *= pivot;
    const double inv = 1.0 / pivot;
    for (int r = c + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r) * n + c] * inv;
      if (f == 0.0) continue;
      for (int j = c + 1; j < n; ++j)
        a[static_cast<std::size_t>(r) * n + j] -=
            f * a[static_cast<std::size_t>(c) * n + j];
    }
  }
  return det;
}

inline double lu_determinant(std::vector<double> a, int n) {
  return lu_determinant_inplace(a.data(), n);
}

// Symmetric banded matrix, lower band storage:
//   band(k, j) = A(j + k, j),  0 <= k <= half_bandwidth,  0 <= j < n.
// Provides eigenvalue counting via the inertia of the LDL^T factorization of
// A - sigma I and spectrum slicing by bisection.  Factorization without
// pivoting is safe here: the shifted matrix is only used through the signs of
// its pivots, and near-zero pivots are floored in a sign-preserving way.
class BandedSymmetric {
 public:
  BandedSymmetric(int n, int half_bandwidth)
      : n_(n),
        hb_(half_bandwidth),
        band_(static_cast<std::size_t>(half_bandwidth + 1) * n, 0.0) {
    if (n < 1) throw InvalidParameter("matrix dimension must be >= 1");
    if (half_bandwidth < 0 || half_bandwidth >= n)
      throw InvalidParameter("half bandwidth must lie in [0, n)");
  }

  int size() const noexcept { return n_; }
  int half_bandwidth() const noexcept { return hb_; }

  // Adds v to A(i, j) and, when i != j, to A(j, i).
  void add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    if (i - j > hb_) throw InvalidParameter("entry outside the band");
    band_[static_cast<std::size_t>(i - j) * n_ + j] += v;
  }

  double get(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > hb_) return 0.0;
    return band_[static_cast<std::size_t>(i - j) * n_ + j];
  }

  void scale(double s) {
    for (double& v : band_) v *= s;
  }

  double inf_norm() const {
    std::vector<double> row(n_, 0.0);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k <= hb_; ++k) {
        if (j + k >= n_) break;
        const double v = std::fabs(band_[static_cast<std::size_t>(k) * n_ + j]);
        row[j + k] += v;
        if (k > 0) row[j] += v;
      }
    double m = 0.0;
    for (double v : row) m = std::max(m, v);
    return m;
  }

  // Number of eigenvalues strictly below sigma.
  int count_below(double sigma) const {
    const int n = n_, hb = hb_;
    // l(k, j) = L(j + 1 + k, j), k = 0..hb-1; only the trailing hb columns of
    // each row are ever referenced, so the full band is kept for simplicity.
    std::vector<double> l(hb > 0 ? static_cast<std::size_t>(hb) * n : 1, 0.0);
    std::vector<double> d(n, 0.0);
    const double pivot_floor =
        std::max(std::numeric_limits<double>::min(),
                 (inf_norm() + std::fabs(sigma)) *
                     std::numeric_limits<double>::epsilon() *
                     std::numeric_limits<double>::epsilon());
    int negatives = 0;
    for (int j = 0; j < n; ++j) {
      double dj = band_[j] - sigma;
      const int lo = std::max(0, j - hb);
      for (int i = lo; i < j; ++i)
        dj -= l[static_cast<std::size_t>(j - i - 1) * n + i] *
              l[static_cast<std::size_t>(j - i - 1) * n + i] * d[i];
      if (std::fabs(dj) < pivot_floor) dj = dj < 0.0 ? -pivot_floor : pivot_floor;
      d[j] = dj;
      if (dj < 0.0) ++negatives;
      const int rmax = std::min(n - 1, j + hb);
      for (int r = j + 1; r <= rmax; ++r) {
        double v = get(r, j);
        const int ilo = std::max(0, r - hb);
        for (int i = std::max(ilo, lo); i < j; ++i)
          v -= l[static_cast<std::size_t>(r - i - 1) * n + i] *
               l[static_cast<std::size_t>(j - i - 1) * n + i] * d[i];
        l[static_cast<std::size_t>(r - j - 1) * n + j] = v / dj;
      }
    }
    return negatives;
  }

  // The `count` smallest eigenvalues, ascending, by spectrum slicing.
  // The absolute floor only guards brackets collapsing around zero; small
  // eigenvalues of large-norm matrices are bisected to full relative width.
  std::vector<double> smallest(int count, double rel_tol = 1e-13) const {
    if (count < 1 || count > n_)
      throw InvalidParameter("eigenvalue count must lie in [1, n]");
    const double norm = inf_norm();
    const double eps = std::numeric_limits<double>::epsilon();
    const double abs_floor =
        std::max(std::numeric_limits<double>::min(), norm * eps * eps);
    double glo = -norm, ghi = norm;
    std::vector<double> out;
    out.reserve(count);
    double lo_start = glo;
    for (int idx = 1; idx <= count; ++idx) {
      double lo = lo_start, hi = ghi;
      for (int it = 0;
           it < 300 && hi - lo > abs_floor + rel_tol * std::max(std::fabs(lo),
                                                                std::fabs(hi));
           ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_below(mid) >= idx)
          hi = mid;
        else
          lo = mid;
      }
      out.push_back(0.5 * (lo + hi));
      lo_start = lo;  // eigenvalues are returned in ascending order
    }
    return out;
  }

 private:
  int n_;
  int hb_;
  std::vector<double> band_;
};

}  // namespace widths
