#include "pegasus/union_codec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace pegasus::theory {

namespace {

using Ints = std::vector<mpz_class>;

// --- bijective-base digit strings ------------------------------------------
//
// The bijective base-k numeral of v >= 1 has r digits in {1..k}, where r is
// the smallest value with k + k^2 + ... + k^r >= v; the digits are the
// standard base-k digits of u = v - (k^r - k)/(k - 1) - 1, padded to r, each
// plus one. v = 0 maps to the empty string. Characters '1'..'4' are used.

std::string to_bijective(const mpz_class& v, int base) {
  if (v == 0) return "";
  // r digits are needed where r+1 is the smallest e with base^e >= T,
  // T = (base-1)*v + base; this is the closed form of the digit-count
  // boundary base + base^2 + ... + base^r >= v.
  const mpz_class t = (base - 1) * v + base;
  std::size_t e = mpz_sizeinbase(t.get_mpz_t(), base);  // exact for base 2 and 4
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), base, static_cast<unsigned long>(e - 1));
  if (pw >= t) --e;  // only possible when t is exactly a power of the base
  const std::size_t r = e - 1;
  mpz_class pr;
  mpz_ui_pow_ui(pr.get_mpz_t(), base, static_cast<unsigned long>(r));
  mpz_class u = v - (pr - base) / (base - 1) - 1;
  std::string digits = u.get_str(base);
  if (digits.size() < r) digits.insert(digits.begin(), r - digits.size(), '0');
  for (char& c : digits) c = static_cast<char>(c + 1);
  return digits;
}

mpz_class from_bijective(const std::string& digits, int base) {
  if (digits.empty()) return 0;
  std::string u_digits = digits;
  for (char& c : u_digits) {
    if (c < '1' || c >= '1' + base) throw std::logic_error("from_bijective: bad digit");
    c = static_cast<char>(c - 1);
  }
  mpz_class u(u_digits, base);
  mpz_class pr;
  mpz_ui_pow_ui(pr.get_mpz_t(), base, static_cast<unsigned long>(digits.size()));
  return u + (pr - base) / (base - 1) + 1;
}

// --- flat positive-integer sequences <-> naturals ---------------------------

// Encodes each element in bijective base 2, bumps its final digit by 2 to
// mark the boundary, and reads the digit string as a bijective base-4
// numeral n. Valid numerals are exactly n = 0 and n mod 4 in {0, 3}; j ranks
// them: j = 0 -> 0, odd j -> 4(j-1)/2 + 3, even j > 0 -> 4(j/2).
mpz_class seq_to_rank(const Ints& seq) {
  std::string digits;
  for (const auto& t : seq) {
    std::string d = to_bijective(t, 2);
    d.back() = static_cast<char>(d.back() + 2);
    digits += d;
  }
  const mpz_class n = from_bijective(digits, 4);
  if (n == 0) return 0;
  const unsigned long rem = mpz_fdiv_ui(n.get_mpz_t(), 4);
  if (rem == 3) return (n - 3) / 4 * 2 + 1;
  if (rem == 0) return n / 4 * 2;
  throw std::logic_error("seq_to_rank: numeral not in the valid set");
}

Ints rank_to_seq(const mpz_class& j) {
  mpz_class n;
  if (j == 0) {
    n = 0;
  } else if (mpz_odd_p(j.get_mpz_t())) {
    n = (j - 1) / 2 * 4 + 3;
  } else {
    n = j / 2 * 4;
  }
  const std::string digits = to_bijective(n, 4);
  Ints seq;
  std::string cur;
  for (char c : digits) {
    if (c == '1' || c == '2') {
      cur.push_back(c);
    } else {
      cur.push_back(static_cast<char>(c - 2));
      seq.push_back(from_bijective(cur, 2));
      cur.clear();
    }
  }
  if (!cur.empty()) throw std::logic_error("rank_to_seq: dangling digits");
  return seq;
}

// --- positive rationals <-> nonempty positive-integer blocks ----------------

Ints rational_to_block(const Rational& r) {
  if (r <= 0) throw std::logic_error("rational_to_block: needs a positive rational");
  // Euclid's algorithm; the final quotient is automatically >= 2 when the
  // expansion has more than one term.
  Ints cf;
  mpz_class num = r.get_num(), den = r.get_den();
  while (den != 0) {
    mpz_class q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    cf.push_back(q);
    num = den;
    den = rem;
  }
  if (cf.size() == 1) return cf;  // integer: block (c0), c0 >= 1
  Ints block;
  block.push_back(cf.front() + 1);
  for (std::size_t i = 1; i + 1 < cf.size(); ++i) block.push_back(cf[i]);
  block.push_back(cf.back() - 1);
  return block;
}

Rational block_to_rational(const Ints& block) {
  if (block.empty()) throw std::logic_error("block_to_rational: empty block");
  if (block.size() == 1) return Rational(block[0]);
  Ints cf;
  cf.push_back(block.front() - 1);
  for (std::size_t i = 1; i + 1 < block.size(); ++i) cf.push_back(block[i]);
  cf.push_back(block.back() + 1);
  Rational value(cf.back());
  for (std::size_t i = cf.size() - 1; i-- > 0;) {
    value = Rational(cf[i]) + 1 / value;
  }
  return value;
}

// --- sequences of rationals <-> flat integer sequences ----------------------

Ints rationals_to_flat(const std::vector<Rational>& rs) {
  std::vector<Ints> blocks;
  blocks.reserve(rs.size());
  for (const auto& r : rs) blocks.push_back(rational_to_block(r));
  Ints flat;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      const bool last_of_block = i + 1 == blocks[b].size();
      const bool last_overall = last_of_block && b + 1 == blocks.size();
      if (last_overall) {
        flat.push_back(blocks[b][i]);
      } else {
        flat.push_back(2 * blocks[b][i] + (last_of_block ? 1 : 0) - 1);
      }
    }
  }
  return flat;
}

std::vector<Rational> flat_to_rationals(const Ints& flat) {
  std::vector<Rational> out;
  Ints block;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i + 1 == flat.size()) {
      block.push_back(flat[i]);
      out.push_back(block_to_rational(block));
      block.clear();
    } else if (mpz_odd_p(flat[i].get_mpz_t())) {
      block.push_back((flat[i] + 1) / 2);
    } else {
      block.push_back(flat[i] / 2);
      out.push_back(block_to_rational(block));
      block.clear();
    }
  }
  return out;
}

// --- set transforms ----------------------------------------------------------

// Strictly increasing values in (0, 1/2) -> difference sequence of their
// images under x -> 2x/(1 - 2x), and back.
std::vector<Rational> set_to_diffs(const std::vector<Rational>& sorted_vals) {
  std::vector<Rational> ys;
  ys.reserve(sorted_vals.size());
  for (const auto& x : sorted_vals) {
    Rational two_x = 2 * x;
    Rational y(two_x.get_num(), two_x.get_den() - two_x.get_num());
    y.canonicalize();
    ys.push_back(y);
  }
  std::vector<Rational> diffs;
  diffs.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) diffs.push_back(i == 0 ? ys[0] : ys[i] - ys[i - 1]);
  return diffs;
}

std::vector<Rational> diffs_to_set(const std::vector<Rational>& diffs) {
  std::vector<Rational> out;
  Rational y = 0;
  for (const auto& d : diffs) {
    y += d;
    Rational x_prime(y.get_num(), y.get_num() + y.get_den());
    x_prime.canonicalize();
    out.push_back(x_prime / 2);
  }
  return out;
}

}  // namespace

mpz_class index_of_union(const IntervalUnion& input) {
  IntervalUnion u(std::vector<RationalInterval>(input.intervals()));
  if (u.measure() != Rational(1, 2))
    throw std::domain_error("index_of_union: union must have measure exactly 1/2");
  const auto& ivs = u.intervals();
  const std::size_t n = ivs.size();

  const Rational half(1, 2);
  std::vector<Rational> lengths_prefix;  // s_1 .. s_{N-1}
  Rational s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    s += ivs[i].hi - ivs[i].lo;
    lengths_prefix.push_back(s);
  }
  std::vector<Rational> positions;  // t_0 .. t_{N-1}
  for (std::size_t i = 0; i < n; ++i) {
    positions.push_back(ivs[i].lo - (i == 0 ? Rational(0) : lengths_prefix[i - 1]));
  }

  const bool z = positions.front() == 0;
  const bool o = positions.back() == half;
  std::vector<Rational> g_mid(positions.begin() + (z ? 1 : 0), positions.end() - (o ? 1 : 0));

  std::vector<Rational> d = set_to_diffs(g_mid);
  const std::vector<Rational> d_l = set_to_diffs(lengths_prefix);
  d.insert(d.end(), d_l.begin(), d_l.end());

  int b;
  const bool odd = d.size() % 2 == 1;
  if (!z && !o) {
    b = 0;
    if (!odd) throw std::logic_error("index_of_union: parity invariant broken");
  } else if (z && !o) {
    b = 0;
  } else if (!z && o) {
    b = 1;
  } else {
    b = 1;
    if (!odd) throw std::logic_error("index_of_union: parity invariant broken");
  }

  const mpz_class j = seq_to_rank(rationals_to_flat(d));
  return 2 * j + b + 1;
}

IntervalUnion union_from_index(const mpz_class& index) {
  if (index < 1) throw std::domain_error("union_from_index: index must be >= 1");
  const mpz_class zero_based = index - 1;
  const int b = mpz_odd_p(zero_based.get_mpz_t()) ? 1 : 0;
  const mpz_class j = zero_based / 2;

  const std::vector<Rational> d = flat_to_rationals(rank_to_seq(j));
  const bool odd = d.size() % 2 == 1;
  const bool z = (b == 0) ? !odd : odd;
  const bool o = b == 1;
  // (z, o): b=0 -> (0,0) when |D| odd, (1,0) when even;
  //         b=1 -> (1,1) when |D| odd, (0,1) when even.

  const std::size_t n_g = (d.size() + 1 - (z ? 1 : 0) - (o ? 1 : 0)) / 2;
  const std::vector<Rational> g_mid =
      diffs_to_set(std::vector<Rational>(d.begin(), d.begin() + n_g));
  const std::vector<Rational> lengths_prefix =
      diffs_to_set(std::vector<Rational>(d.begin() + n_g, d.end()));

  const Rational half(1, 2);
  std::vector<Rational> positions;
  if (z) positions.push_back(0);
  positions.insert(positions.end(), g_mid.begin(), g_mid.end());
  if (o) positions.push_back(half);

  const std::size_t n = positions.size();
  std::vector<RationalInterval> ivs;
  ivs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational s_lo = i == 0 ? Rational(0) : lengths_prefix[i - 1];
    const Rational s_hi = i + 1 == n ? half : lengths_prefix[i];
    ivs.push_back(RationalInterval{positions[i] + s_lo, positions[i] + s_hi});
  }
  return IntervalUnion(std::move(ivs));
}

IntervalUnion union_from_index_u64(std::uint64_t index) {
  mpz_class idx;
  mpz_import(idx.get_mpz_t(), 1, 1, sizeof(index), 0, 0, &index);
  return union_from_index(idx);
}

}  // namespace pegasus::theory
