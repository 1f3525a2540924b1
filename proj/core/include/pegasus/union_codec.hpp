#pragma once

#include <cstdint>

#include "pegasus/interval_union.hpp"

namespace pegasus::theory {

/// Bijection between positive integers and the canonical measure-1/2 finite
/// unions of rational subintervals of [0, 1].
///
/// A canonical union with intervals [a_1,b_1] < ... < [a_N,b_N] is factored
/// into unconstrained data and back as follows:
///
///   1. Lengths l_i = b_i - a_i give partial sums s_j (j = 1..N-1), a strictly
///      increasing set L in the open interval (0, 1/2). Positions
///      t_j = a_{j+1} - s_j (j = 0..N-1, s_0 = 0) give a strictly increasing
///      set G in [0, 1/2] of size N. Conversely any such (L, G) with
///      |G| = |L| + 1 yields a valid canonical union of measure exactly 1/2
///      via a_{j+1} = t_j + s_j, b_{j+1} = t_j + s_{j+1}, s_N = 1/2.
///   2. Whether 0 (bit z) and 1/2 (bit o) belong to G is split off; the rest
///      of G and all of L are scaled by 2 and mapped through x -> x/(1-x),
///      giving two finite sets of positive rationals, which become difference
///      sequences D_G and D_L. The size link |G| = |L| + 1 makes the four
///      (z, o) cases correspond exactly to (parity of |D_G| + |D_L|, one
///      marker bit b).
///   3. Each positive rational becomes its continued fraction [c0; c1..ck]
///      (normalized: last term >= 2 when k >= 1), stored as the positive
///      integer sequence (c0+1, c1, ..., c_{k-1}, ck-1), or (c0) when k = 0.
///   4. The sequence of sequences is flattened with end-of-block flags folded
///      into all but the last integer (t, flag) -> 2t + flag - 1.
///   5. The flat sequence of positive integers is written in bijective
///      base 2 per element, the last digit of each element is bumped by 2 to
///      mark the element boundary, and the resulting digit string over
///      {1,2,3,4} is read as a bijective base-4 numeral n. The valid numerals
///      are exactly {0} and {n : n mod 4 in {0, 3}}, ranked in order by j.
///   6. index = 2j + b + 1.
///
/// Every step is a bijection, so every positive integer decodes to exactly
/// one canonical measure-1/2 union and back.
IntervalUnion union_from_index(const mpz_class& index);

/// Inverse of union_from_index. Canonicalizes its argument and rejects unions
/// whose measure is not exactly 1/2 (std::domain_error).
mpz_class index_of_union(const IntervalUnion& u);

IntervalUnion union_from_index_u64(std::uint64_t index);

}  // namespace pegasus::theory
