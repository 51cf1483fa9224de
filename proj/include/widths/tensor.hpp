#pragma once

// Tensor-product spectra on the box [0, L]^d and the non-increasing
// rearrangement of approximation numbers.
//
// The d-dimensional operator obtained by summing the per-axis univariate
// operators has eigenfunctions that are products of univariate
// eigenfunctions, so its eigenvalues are the sums over multi-indices
// nbar = (n_1, ..., n_d) of univariate eigenvalues.  The approximation
// numbers of the associated embeddings are
//
//   a_k = (1 + sum_j mu_{n_j})^{-1/2}   (Neumann),
//   a_k = (sum_j lambda_{n_j})^{-1/2}   (Dirichlet),
//
// read off the non-increasing rearrangement of those values over nbar in
// N^d, i.e. the increasing rearrangement of the eigensums.
//
// Enumeration is best-first: a min-heap keyed by (eigensum, multi-index)
// pops lattice points in increasing eigensum order; each pop pushes its d
// coordinate increments, and a hash set of packed multi-indices suppresses
// duplicates.  Eigensums are always recomputed left to right from the
// univariate estimates, so the heap key is a pure function of the
// multi-index and the output is independent of the enumeration path.  Ties
// are broken by the lexicographically smallest witness; the packed key
// compares exactly like the multi-index because every coordinate occupies
// the same bit width (which caps d at 8 and each coordinate at 2^(64/d)-1).
//
// Counting functions with enclosure-aware classification, and an exhaustive
// brute-force rearrangement over a finite box with a certified equivalence
// check, accompany the best-first routine as verification oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "univariate.hpp"

namespace widths {

using MultiIndex = std::vector<int>;

struct ApproxNumberEntry {
  std::size_t rank = 0;      // k, 1-based
  double value = 0.0;        // a_k
  MultiIndex witness;        // the multi-index realizing this rank
  double eigensum = 0.0;     // sum of univariate estimates
  double eigensum_lower = 0.0;
  double eigensum_upper = 0.0;
  // Set when this entry's eigensum enclosure overlaps the previous one, so
  // the order between the two is fixed by estimates, not certified.
  bool tie_within_tolerance = false;
};

struct EigensumEnclosure {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Eigensum of one multi-index against an explicit spectrum (estimates and
// enclosure ends summed left to right).
inline EigensumEnclosure tensor_eigensum_enclosure(
    const MultiIndex& nbar, const UnivariateSpectrum& spectrum) {
  if (nbar.empty()) throw InvalidParameter("multi-index must be non-empty");
  EigensumEnclosure s;
  for (int n : nbar) {
    if (n < 1) throw InvalidParameter("multi-index entries must be >= 1");
    const EigenvalueEnclosure& e = spectrum.value(static_cast<std::size_t>(n));
    s.estimate += e.estimate;
    s.lower += e.lower;
    s.upper += e.upper;
  }
  return s;
}

inline double tensor_eigensum(const MultiIndex& nbar,
                              const UnivariateSpectrum& spectrum) {
  return tensor_eigensum_enclosure(nbar, spectrum).estimate;
}

// Approximation number attached to an eigensum; decreasing in the eigensum,
// so enclosure ends swap roles when mapped through it.
inline double approx_number_from_eigensum(BoundaryCondition bc,
                                          double eigensum) {
  if (bc == BoundaryCondition::Neumann) return 1.0 / std::sqrt(1.0 + eigensum);
  if (!(eigensum > 0.0))
    throw InvalidParameter("eigensum must be positive in the Dirichlet case");
  return 1.0 / std::sqrt(eigensum);
}

// Univariate spectrum extended on demand, so enumerations never guess the
// needed index range up front.  Not safe to share across concurrent
// enumerations; each query owns its provider.
class SpectrumProvider {
 public:
  SpectrumProvider(int m, double length, BoundaryCondition bc,
                   double tol = 1e-10)
      : tol_(tol) {
    detail::validate_problem(m, length);
    if (!(tol > 0.0) || !(tol < 1.0))
      throw InvalidParameter("tol must lie in (0, 1)");
    spectrum_.order = m;
    spectrum_.length = length;
    spectrum_.bc = bc;
  }

  // 1-based; extends the spectrum when n is past the computed range.  The
  // returned reference is invalidated by the next extending call.
  const EigenvalueEnclosure& enclosure(std::size_t n) {
    if (n < 1) throw InvalidParameter("eigenvalue index must be >= 1");
    if (n > spectrum_.values.size()) extend(n);
    return spectrum_.values[n - 1];
  }

  const UnivariateSpectrum& spectrum() const noexcept { return spectrum_; }
  double tolerance() const noexcept { return tol_; }

 private:
  void extend(std::size_t need) {
    const std::size_t target = std::max(
        {need, 2 * spectrum_.values.size(), static_cast<std::size_t>(64)});
    spectrum_ = univariate_eigenvalues(spectrum_.order, spectrum_.length,
                                       spectrum_.bc, target, tol_);
  }

  UnivariateSpectrum spectrum_;
  double tol_;
};

namespace detail {

// Open-addressing set of nonzero 64-bit keys (0 marks an empty slot; packed
// multi-indices are never 0 because every coordinate is >= 1).
class PackedKeySet {
 public:
  PackedKeySet() : slots_(1024, 0) {}

  // Returns true when the key was newly inserted.
  bool insert(std::uint64_t key) {
    if (10 * (size_ + 1) >= 7 * slots_.size()) grow();
    std::uint64_t* slot = find_slot(slots_, key);
    if (*slot == key) return false;
    *slot = key;
    ++size_;
    return true;
  }

  std::size_t size() const noexcept { return size_; }

 private:
  static std::uint64_t* find_slot(std::vector<std::uint64_t>& slots,
                                  std::uint64_t key) {
    const std::size_t mask = slots.size() - 1;
    std::size_t i = static_cast<std::size_t>(mix64(key)) & mask;
    while (slots[i] != 0 && slots[i] != key) i = (i + 1) & mask;
    return &slots[i];
  }

  void grow() {
    std::vector<std::uint64_t> bigger(2 * slots_.size(), 0);
    for (std::uint64_t key : slots_)
      if (key != 0) *find_slot(bigger, key) = key;
    slots_.swap(bigger);
  }

  std::vector<std::uint64_t> slots_;
  std::size_t size_ = 0;
};

inline int packed_bits_per_coordinate(int d) {
  if (d < 1 || d > 8)
    throw InvalidParameter(
        "dimension must lie in 1..8 (packed multi-index enumeration)");
  return 64 / d;
}

inline std::uint64_t packed_coordinate_cap(int bits) {
  const std::uint64_t int_cap = (static_cast<std::uint64_t>(1) << 31) - 2;
  if (bits >= 63) return int_cap;
  return std::min((static_cast<std::uint64_t>(1) << bits) - 1, int_cap);
}

// First coordinate in the highest bits: numeric order of keys equals
// lexicographic order of multi-indices.
inline std::uint64_t pack_multi_index(const MultiIndex& idx, int bits) {
  std::uint64_t key = 0;
  for (int v : idx) {
    if (bits < 64) key <<= bits;
    key |= static_cast<std::uint64_t>(v);
  }
  return key;
}

inline void unpack_multi_index(std::uint64_t key, int bits, MultiIndex& out) {
  const std::uint64_t mask = bits >= 64 ? ~static_cast<std::uint64_t>(0)
                                        : (static_cast<std::uint64_t>(1)
                                           << bits) -
                                              1;
  for (std::size_t j = out.size(); j-- > 0;) {
    out[j] = static_cast<int>(key & mask);
    if (bits < 64) key >>= bits;
  }
}

}  // namespace detail

struct EnumerationOptions {
  std::size_t frontier_budget = static_cast<std::size_t>(1) << 26;
  double tol = 1e-10;  // univariate enclosure tolerance
};

struct EnumerationStats {
  std::size_t pops = 0;
  std::size_t pushes = 0;
  std::size_t duplicates = 0;  // successor pushes suppressed by the set
  std::size_t frontier_high_water = 0;
  std::size_t frontier_final = 0;
  std::size_t visited_final = 0;  // equals pops + frontier_final
};

// One popped lattice point as seen by an enumeration visitor.  The witness
// reference is valid only for the duration of the visit; copy it to keep it.
struct EigensumSample {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  const MultiIndex& witness;
};

// Best-first enumeration of N^d in increasing eigensum order.  The visitor
// receives every popped point and returns false to stop.
template <typename Visitor>
EnumerationStats enumerate_eigensums(SpectrumProvider& provider, int d,
                                     const EnumerationOptions& options,
                                     Visitor&& visit) {
  const int bits = detail::packed_bits_per_coordinate(d);
  const std::uint64_t cap = detail::packed_coordinate_cap(bits);

  MultiIndex idx(static_cast<std::size_t>(d), 1);
  const auto estimate_sum = [&](const MultiIndex& v) {
    double s = 0.0;
    for (int n : v) s += provider.enclosure(static_cast<std::size_t>(n)).estimate;
    return s;
  };

  using HeapEntry = std::pair<double, std::uint64_t>;
  std::vector<HeapEntry> heap;
  const std::greater<HeapEntry> later;  // min-heap: smallest (sum, key) first
  detail::PackedKeySet visited;
  EnumerationStats stats;

  const auto push = [&](const MultiIndex& v) {
    const std::uint64_t key = detail::pack_multi_index(v, bits);
    if (!visited.insert(key)) {
      ++stats.duplicates;
      return;
    }
    if (heap.size() >= options.frontier_budget)
      throw ResourceLimit("enumeration frontier exceeded its budget",
                          options.frontier_budget, heap.size() + 1);
    heap.emplace_back(estimate_sum(v), key);
    std::push_heap(heap.begin(), heap.end(), later);
    ++stats.pushes;
    stats.frontier_high_water = std::max(stats.frontier_high_water, heap.size());
  };

  push(idx);
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), later);
    const HeapEntry top = heap.back();
    heap.pop_back();
    detail::unpack_multi_index(top.second, bits, idx);

    EigensumSample sample{top.first, 0.0, 0.0, idx};
    for (int n : idx) {
      const EigenvalueEnclosure& e =
          provider.enclosure(static_cast<std::size_t>(n));
      sample.lower += e.lower;
      sample.upper += e.upper;
    }
    ++stats.pops;
    if (!visit(static_cast<const EigensumSample&>(sample))) break;

    for (int j = 0; j < d; ++j) {
      if (static_cast<std::uint64_t>(idx[j]) + 1 > cap)
        throw ResourceLimit("multi-index coordinate exceeded the packed width",
                            cap, static_cast<std::uint64_t>(idx[j]) + 1);
      ++idx[j];
      push(idx);
      --idx[j];
    }
  }
  stats.frontier_final = heap.size();
  stats.visited_final = visited.size();
  return stats;
}

// First k_max entries of the non-increasing rearrangement of approximation
// numbers on [0, L]^d.
inline std::vector<ApproxNumberEntry> rearranged_approx_numbers(
    int m, int d, double length, BoundaryCondition bc, std::size_t k_max,
    const EnumerationOptions& options = {},
    EnumerationStats* stats_out = nullptr) {
  if (k_max < 1) throw InvalidParameter("k_max must be >= 1");
  SpectrumProvider provider(m, length, bc, options.tol);
  std::vector<ApproxNumberEntry> out;
  out.reserve(k_max);
  const EnumerationStats stats = enumerate_eigensums(
      provider, d, options, [&](const EigensumSample& s) {
        ApproxNumberEntry e;
        e.rank = out.size() + 1;
        e.value = approx_number_from_eigensum(bc, s.estimate);
        e.witness = s.witness;
        e.eigensum = s.estimate;
        e.eigensum_lower = s.lower;
        e.eigensum_upper = s.upper;
        e.tie_within_tolerance =
            !out.empty() && s.lower <= out.back().eigensum_upper &&
            out.back().eigensum_lower <= s.upper;
        out.push_back(std::move(e));
        return out.size() < k_max;
      });
  if (stats_out != nullptr) *stats_out = stats;
  return out;
}

// Counting result with enclosure-aware classification: `count` classifies by
// estimates; `certified_min` counts points provably inside; `ambiguous`
// counts enclosures straddling the cut, so the true count lies in
// [certified_min, certified_min + ambiguous].
struct CountResult {
  std::size_t count = 0;
  std::size_t certified_min = 0;
  std::size_t ambiguous = 0;
};

namespace detail {

// Enumeration continues until the eigensum estimate clears the cut by more
// than any enclosure width can reach.  Enclosure widths are at most
// tol * eigensum by construction (zero for m = 1 closed forms), so near the
// cut they stay below this margin by several orders.
inline double counting_margin(double cut_upper, int d, double tol) {
  return (4.0 * tol * d + 1e-13) * std::max(1.0, cut_upper) + 1e-300;
}

}  // namespace detail

// C(l, d) = #{nbar in N^d : sum mu_{n_i} <= mu_l} for the Neumann spectrum.
inline CountResult level_set_count(int m, int d, double length,
                                   std::size_t level_index,
                                   const EnumerationOptions& options = {}) {
  if (level_index < 1) throw InvalidParameter("level index must be >= 1");
  SpectrumProvider provider(m, length, BoundaryCondition::Neumann,
                            options.tol);
  const EigenvalueEnclosure cut = provider.enclosure(level_index);
  const double margin = detail::counting_margin(cut.upper, d, options.tol);
  CountResult r;
  enumerate_eigensums(provider, d, options, [&](const EigensumSample& s) {
    if (s.estimate > cut.upper + margin) return false;
    if (s.estimate <= cut.estimate) ++r.count;
    if (s.upper <= cut.lower)
      ++r.certified_min;
    else if (s.lower <= cut.upper)
      ++r.ambiguous;
    return true;
  });
  return r;
}

// Weyl counting function: the number of tensor eigenvalues strictly below
// lambda_cut.
inline CountResult weyl_count(double lambda_cut, int m, int d, double length,
                              BoundaryCondition bc,
                              const EnumerationOptions& options = {}) {
  if (!(lambda_cut > 0.0) || !std::isfinite(lambda_cut))
    throw InvalidParameter("lambda_cut must be positive and finite");
  SpectrumProvider provider(m, length, bc, options.tol);
  const double margin = detail::counting_margin(lambda_cut, d, options.tol);
  CountResult r;
  enumerate_eigensums(provider, d, options, [&](const EigensumSample& s) {
    if (s.estimate >= lambda_cut + margin) return false;
    if (s.estimate < lambda_cut) ++r.count;
    if (s.upper < lambda_cut)
      ++r.certified_min;
    else if (s.lower < lambda_cut)
      ++r.ambiguous;
    return true;
  });
  return r;
}

// Exhaustive rearrangement over the finite box {1..box_side}^d, sorted with
// the same (eigensum, lexicographic witness) order as the best-first
// routine.  Certifies via a priori brackets that no multi-index outside the
// box can reach the first k_max ranks; throws BoxTooSmall otherwise.
inline std::vector<ApproxNumberEntry> brute_force_rearrangement(
    int m, int d, double length, BoundaryCondition bc, int box_side,
    std::size_t k_max, const EnumerationOptions& options = {}) {
  if (k_max < 1) throw InvalidParameter("k_max must be >= 1");
  if (box_side < 1) throw InvalidParameter("box_side must be >= 1");
  const int bits = detail::packed_bits_per_coordinate(d);
  if (static_cast<std::uint64_t>(box_side) >
      detail::packed_coordinate_cap(bits))
    throw InvalidParameter("box_side exceeds the packed coordinate width");
  double total_d = 1.0;
  for (int j = 0; j < d; ++j) total_d *= static_cast<double>(box_side);
  if (total_d > 1e7)
    throw InvalidParameter("box volume exceeds the 1e7 enumeration cap");
  const std::size_t total = static_cast<std::size_t>(total_d);
  if (k_max > total)
    throw InvalidParameter("k_max exceeds the box volume");

  SpectrumProvider provider(m, length, bc, options.tol);
  provider.enclosure(static_cast<std::size_t>(box_side));  // one extension

  std::vector<std::pair<double, std::uint64_t>> all;
  all.reserve(total);
  MultiIndex idx(static_cast<std::size_t>(d), 1);
  const UnivariateSpectrum& spectrum = provider.spectrum();
  for (;;) {
    double s = 0.0;
    for (int n : idx) s += spectrum.values[static_cast<std::size_t>(n) - 1].estimate;
    all.emplace_back(s, detail::pack_multi_index(idx, bits));
    int j = d - 1;
    while (j >= 0 && idx[j] == box_side) idx[j--] = 1;
    if (j < 0) break;
    ++idx[j];
  }
  std::sort(all.begin(), all.end());

  // Cheapest eigensum any excluded multi-index could have: one coordinate at
  // box_side + 1 (bounded below a priori), the rest at index 1.
  const int overflow = box_side + 1;
  double excluded_lower = 0.0;
  if (bc == BoundaryCondition::Dirichlet) {
    excluded_lower = eigenvalue_bracket(m, length, overflow).lower +
                     (d - 1) * eigenvalue_bracket(m, length, 1).lower;
  } else if (overflow > m) {
    excluded_lower = eigenvalue_bracket(m, length, overflow - m).lower;
  }
  double kth_upper = 0.0;
  MultiIndex kth(static_cast<std::size_t>(d));
  detail::unpack_multi_index(all[k_max - 1].second, bits, kth);
  for (int n : kth)
    kth_upper += spectrum.values[static_cast<std::size_t>(n) - 1].upper;
  if (!(kth_upper < excluded_lower * (1.0 - 1e-12)))
    throw BoxTooSmall(
        "box side " + std::to_string(box_side) +
        " cannot certify rank " + std::to_string(k_max) +
        ": rank eigensum upper " + std::to_string(kth_upper) +
        " does not clear the cheapest excluded eigensum " +
        std::to_string(excluded_lower));

  std::vector<ApproxNumberEntry> out;
  out.reserve(k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    ApproxNumberEntry e;
    e.rank = k + 1;
    e.witness.resize(static_cast<std::size_t>(d));
    detail::unpack_multi_index(all[k].second, bits, e.witness);
    const EigensumEnclosure enc = tensor_eigensum_enclosure(e.witness, spectrum);
    e.value = approx_number_from_eigensum(bc, enc.estimate);
    e.eigensum = enc.estimate;
    e.eigensum_lower = enc.lower;
    e.eigensum_upper = enc.upper;
    e.tie_within_tolerance =
        !out.empty() && enc.lower <= out.back().eigensum_upper &&
        out.back().eigensum_lower <= enc.upper;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace widths
