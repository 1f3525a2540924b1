#include "pegasus/interval_union.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pegasus::theory {

IntervalUnion::IntervalUnion(std::vector<RationalInterval> intervals) {
  for (auto& iv : intervals) {
    iv.lo.canonicalize();
    iv.hi.canonicalize();
    if (iv.lo >= iv.hi) throw std::invalid_argument("IntervalUnion: interval needs lo < hi");
    if (iv.lo < 0 || iv.hi > 1) throw std::invalid_argument("IntervalUnion: endpoints outside [0,1]");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const RationalInterval& a, const RationalInterval& b) { return a.lo < b.lo; });
  for (auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      if (iv.hi > intervals_.back().hi) intervals_.back().hi = iv.hi;
    } else {
      intervals_.push_back(iv);
    }
  }
}

Rational IntervalUnion::measure() const {
  Rational total = 0;
  for (const auto& iv : intervals_) total += iv.hi - iv.lo;
  return total;
}

bool IntervalUnion::contains(const Rational& x) const {
  for (const auto& iv : intervals_) {
    if (x < iv.lo) return false;
    if (x <= iv.hi) return true;
  }
  return false;
}

bool IntervalUnion::contains_double(double x) const { return contains(rational_from_double(x)); }

std::string IntervalUnion::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) os << " U ";
    os << '[' << intervals_[i].lo.get_str() << ", " << intervals_[i].hi.get_str() << ']';
  }
  if (intervals_.empty()) os << "{}";
  return os.str();
}

Rational rational_from_double(double x) {
  Rational r(x);  // mpq from double is exact
  r.canonicalize();
  return r;
}

}  // namespace pegasus::theory
