#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace pegasus::theory {

using Rational = mpq_class;

/// Closed interval [lo, hi] with exact rational endpoints, lo < hi.
struct RationalInterval {
  Rational lo;
  Rational hi;
  bool operator==(const RationalInterval&) const = default;
};

/// Finite union of disjoint, non-touching, sorted closed subintervals of
/// [0, 1] with exact rational endpoints. All arithmetic on these is exact: no
/// floating point enters measure, membership or canonicalization.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  /// Canonicalizes: sorts, merges overlapping or touching intervals, checks
  /// endpoints lie in [0, 1]. Throws std::invalid_argument on empty-interior
  /// intervals (lo >= hi) or endpoints outside the unit interval.
  explicit IntervalUnion(std::vector<RationalInterval> intervals);

  static IntervalUnion empty() { return IntervalUnion(); }

  const std::vector<RationalInterval>& intervals() const { return intervals_; }
  bool is_empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  /// Exact Lebesgue measure: sum of interval lengths.
  Rational measure() const;

  /// Exact membership test (intervals are closed).
  bool contains(const Rational& x) const;
  bool contains_double(double x) const;

  bool operator==(const IntervalUnion&) const = default;

  std::string to_string() const;

 private:
  std::vector<RationalInterval> intervals_;
};

/// Exact rational value of a double (doubles are dyadic rationals).
Rational rational_from_double(double x);

}  // namespace pegasus::theory
