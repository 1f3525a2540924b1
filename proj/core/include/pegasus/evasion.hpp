#pragma once

#include <span>

#include "pegasus/interval_union.hpp"
#include "pegasus/union_codec.hpp"

namespace pegasus::theory {

struct EvadingUnion {
  IntervalUnion set;
  mpz_class index;  // enumeration index under union_from_index
};

/// A measure-1/2 rational union containing none of the given points, plus its
/// enumeration index. Construction: the points split [0, 1] into gaps, and the
/// middle half of every nonempty gap is kept; the middle halves total exactly
/// 1/2 because the gaps total exactly 1. Points must lie in [0, 1]; machine
/// doubles are treated as the exact dyadic rationals they are.
EvadingUnion find_evading_union(std::span<const double> points);

}  // namespace pegasus::theory
