#pragma once

// Random instances and brute-force oracles shared by the test binaries.
// Nothing here calls into the library code it is used to check.

#include "iet/core.hpp"
#include "iet/induction.hpp"
#include "iet/paths.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using iet::Integer;
using iet::Rational;

inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline std::string letters(std::size_t d) { return std::string("ABCDEFGH").substr(0, d); }

/// Independent admissibility test on rows.
inline bool admissible_rows(const std::string& top, const std::string& bottom) {
  for (std::size_t k = 1; k < top.size(); ++k) {
    std::string a = top.substr(0, k), b = bottom.substr(0, k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return false;
  }
  return true;
}

inline iet::PermutationPair random_admissible(std::size_t d, std::mt19937_64& rng) {
  const std::string top = letters(d);
  std::string bottom = top;
  do {
    std::shuffle(bottom.begin(), bottom.end(), rng);
  } while (!admissible_rows(top, bottom));
  return iet::PermutationPair(iet::Alphabet(top), top, bottom);
}

inline std::vector<Rational> random_lengths(std::size_t d, std::mt19937_64& rng, long max_num = 60) {
  std::uniform_int_distribution<long> num(1, max_num);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < d; ++i) {
    Rational v(num(rng), num(rng));
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

inline iet::Iem random_map(std::size_t d, std::mt19937_64& rng, long max_num = 60) {
  return iet::Iem(random_admissible(d, rng), iet::LengthData(random_lengths(d, rng, max_num)));
}

/// Random Rauzy path of `steps` arrows (loops are rejected half the time so
/// paths keep moving).
inline iet::RauzyPath random_path(const iet::PermutationPair& start, std::uint64_t steps, std::mt19937_64& rng) {
  iet::RauzyPath path(start);
  std::bernoulli_distribution coin(0.5);
  while (path.length() < steps) {
    auto [top, bottom] = iet::rauzy_successors(path.end());
    path.append(coin(rng) ? top : bottom);
  }
  return path;
}

/// Lengths realizing `path` from a random positive tail, so the induction
/// follows the path for at least its length.
inline iet::Iem path_generated_map(const iet::RauzyPath& path, std::mt19937_64& rng) {
  const std::size_t d = path.start().size();
  auto tail = random_lengths(d, rng, 97);
  return iet::Iem(path.start(), iet::realize_lengths(path, iet::LengthData(tail)));
}

/// Forward partition refinement: the pieces on which T^n is a translation.
/// Returns the interior left endpoints, i.e. D(T^n).
inline std::vector<Rational> brute_discontinuities(const iet::Iem& map, std::uint64_t n) {
  struct Piece {
    Rational lo, hi, image_lo;
  };
  std::vector<Rational> cuts;
  for (iet::Letter a = 0; a < map.size(); ++a) cuts.push_back(map.left(a));
  cuts.push_back(map.total());
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces.push_back({cuts[i], cuts[i + 1], cuts[i]});
  // image_lo holds T^j(lo) after j steps of refinement.
  for (std::uint64_t j = 1; j <= n; ++j) {
    std::vector<Piece> next;
    for (const auto& p : pieces) {
      const Rational len = p.hi - p.lo;
      std::vector<Rational> inner;
      for (iet::Letter a = 0; a < map.size(); ++a) {
        const Rational& c = map.left(a);
        if (c > p.image_lo && c < p.image_lo + len) inner.push_back(c);
      }
      std::sort(inner.begin(), inner.end());
      Rational lo = p.lo, img = p.image_lo;
      for (const auto& c : inner) {
        next.push_back({lo, lo + (c - img), img});
        lo = lo + (c - img);
        img = c;
      }
      next.push_back({lo, p.hi, img});
    }
    if (j == n) {
      pieces = std::move(next);
      break;
    }
    for (auto& p : next) p.image_lo = map(p.image_lo);
    pieces = std::move(next);
  }
  // After refinement against T's own cuts for T^{j} images with j < n the
  // pieces are maximal continuity intervals of T^n, up to cuts that are
  // formal only (merged neighbours that translate identically).
  std::vector<Rational> out;
  for (const auto& p : pieces)
    if (p.lo != 0) out.push_back(p.lo);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// a_1, a_2, ... and q_0 = 1, q_1, ... of a rational in (0, 1) by Euclid.
struct Euclid {
  std::vector<Integer> a;
  std::vector<Integer> q;
};

inline Euclid euclid(const Rational& x) {
  Euclid e;
  Integer num = x.get_num(), den = x.get_den();
  Integer q_prev = 0, q_cur = 1;
  e.q.push_back(1);
  while (num != 0) {
    Integer ai = den / num;
    Integer r = den % num;
    e.a.push_back(ai);
    Integer q_next = ai * q_cur + q_prev;
    q_prev = q_cur;
    q_cur = q_next;
    e.q.push_back(q_cur);
    den = num;
    num = r;
  }
  return e;
}

inline Integer fib(long n) {
  if (n == -1) return 1;
  Integer a = 0, b = 1;
  for (long i = 0; i < n; ++i) {
    Integer c = a + b;
    a = b;
    b = c;
  }
  return a;
}

/// Plain row-major integer matrices for literal products.
using Mat = std::vector<std::vector<Integer>>;

inline Mat identity(std::size_t d) {
  Mat m(d, std::vector<Integer>(d, 0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  const std::size_t d = a.size();
  Mat c(d, std::vector<Integer>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat elementary(std::size_t d, std::size_t row, std::size_t col) {
  Mat m = identity(d);
  m[row][col] += 1;
  return m;
}

/// Q(0,n) by literal multiplication of one elementary matrix per arrow.
inline Mat literal_cocycle(const iet::RauzyPath& path, std::uint64_t m, std::uint64_t n) {
  Mat q = identity(path.start().size());
  for (std::uint64_t i = m; i < n; ++i) {
    const auto& a = path.arrow_at(i);
    q = mul(elementary(q.size(), a.loser, a.winner), q);
  }
  return q;
}

inline bool same(const Mat& a, const iet::CocycleMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[i][j] != b(i, j)) return false;
  return true;
}

/// Displayed closed forms of the two example families, from the local fib.
inline Mat z_closed(unsigned k) {
  const long n = 1L << (k + 1);
  const Integer a = fib(n + 2 * k + 1), b = fib(n + 2 * k), c = fib(n + 2 * k + 2), s = fib(n);
  return {{a, 0, 0, b}, {a - 1, 1, s, b}, {a - 1, 1, s + 1, b}, {c - 1, 1, s, a}};
}

inline Mat u_closed(unsigned k) {
  const long n = 1L << (k + 1);
  const Integer f0 = fib(n), f1 = fib(n + 1), f2 = fib(n + 2);
  return {{f1, f0, f0, f0}, {f1 - 1, f0 + 1, f0 + 1, f0}, {f1 - 1, f0 + 2, f0 + 3, f0}, {f2 - 1, f1 + 1, f1 + 1, f1}};
}

inline Mat u_tail(unsigned k) {
  const long m = 1L << (k + 2);
  const Integer f0 = fib(m), f1 = fib(m + 1), f2 = fib(m + 2);
  return {{f1, 0, 0, f0}, {f1 - 1, 1, 0, f0}, {f1 - 1, 1, 1, f0}, {f2 - 1, 1, 0, f1}};
}

}  // namespace testing_support
