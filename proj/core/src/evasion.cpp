#include "pegasus/evasion.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace pegasus::theory {

EvadingUnion find_evading_union(std::span<const double> points) {
  std::vector<Rational> pts;
  pts.reserve(points.size());
  for (double p : points) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("find_evading_union: point outside [0,1]");
    pts.push_back(rational_from_double(p));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<RationalInterval> kept;
  kept.reserve(pts.size() + 1);
  Rational prev = 0;
  auto keep_middle_half = [&kept](const Rational& lo, const Rational& hi) {
    if (lo >= hi) return;  // empty gap (a point at 0 or 1, or duplicates)
    const Rational quarter = (hi - lo) / 4;
    kept.push_back(RationalInterval{lo + quarter, hi - quarter});
  };
  for (const auto& p : pts) {
    keep_middle_half(prev, p);
    prev = p;
  }
  keep_middle_half(prev, Rational(1));

  EvadingUnion out;
  out.set = IntervalUnion(std::move(kept));
  out.index = index_of_union(out.set);
  return out;
}

}  // namespace pegasus::theory
