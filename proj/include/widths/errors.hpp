#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace widths {

// Invalid argument values or a malformed experiment configuration.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Access past the computed portion of a spectrum or sequence.
class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Root isolation or bisection exhausted its iteration budget.
// index() is the 1-based eigenvalue index that could not be resolved.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// An enumeration exceeded its configured memory or work budget.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t budget,
                std::uint64_t high_water)
      : std::runtime_error(what), budget_(budget), high_water_(high_water) {}
  std::uint64_t budget() const noexcept { return budget_; }
  std::uint64_t high_water() const noexcept { return high_water_; }

 private:
  std::uint64_t budget_;
  std::uint64_t high_water_;
};

// A discretization grid too coarse to resolve the requested eigenvalues.
class InsufficientResolution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The brute-force enumeration box cannot certify the requested ranks.
class BoxTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sublevel set that is not contained in any finite box.
class UnboundedSublevel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent computations of the same quantity disagree.
class CrossCheckMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A report could not be written to the requested destination.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace widths
