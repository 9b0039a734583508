#pragma once

// Exact interval exchange maps: combinatorics, lengths, evaluation,
// discontinuity sets of iterates and return times.

#include "iet/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iet {

/// Index of a letter in an Alphabet. Matrices and length vectors are indexed
/// by this, in alphabet order.
using Letter = std::size_t;

/// Ordered set of d >= 2 distinct single-character labels.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string labels);

  std::size_t size() const { return labels_.size(); }
  char label(Letter letter) const { return labels_.at(letter); }
  const std::string& labels() const { return labels_; }

  std::optional<Letter> find(char label) const;
  /// Throws std::invalid_argument for an unknown label.
  Letter index(char label) const;

  auto operator<=>(const Alphabet&) const = default;

 private:
  std::string labels_;
};

/// Combinatorial data (pi_t, pi_b). Rows are stored as label strings in
/// left-to-right order; positions are 0-based (the leftmost is 0).
class PermutationPair {
 public:
  PermutationPair() = default;
  /// `top` and `bottom` list the labels of `alphabet` in row order.
  PermutationPair(Alphabet alphabet, std::string top, std::string bottom);

  /// "ABDC/DACB"; the alphabet is the sorted set of letters.
  static PermutationPair parse(std::string_view text);
  static PermutationPair parse(std::string_view text, const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }

  std::size_t top_position(Letter letter) const;
  std::size_t bottom_position(Letter letter) const;
  Letter top_at(std::size_t position) const { return alphabet_.index(top_.at(position)); }
  Letter bottom_at(std::size_t position) const { return alphabet_.index(bottom_.at(position)); }
  Letter top_last() const { return top_at(size() - 1); }
  Letter bottom_last() const { return bottom_at(size() - 1); }

  const std::string& top_row() const { return top_; }
  const std::string& bottom_row() const { return bottom_; }
  std::string to_string() const { return top_ + "/" + bottom_; }

  auto operator<=>(const PermutationPair&) const = default;

 private:
  Alphabet alphabet_;
  std::string top_;
  std::string bottom_;
};

/// pi_t^{-1}({1..k}) != pi_b^{-1}({1..k}) for every k = 1..d-1.
bool is_admissible(const PermutationPair& perm);

/// Positive exact lengths indexed by Letter, with their exact total.
class LengthData {
 public:
  LengthData() = default;
  explicit LengthData(std::vector<Rational> lengths);

  std::size_t size() const { return lengths_.size(); }
  const Rational& operator[](Letter letter) const { return lengths_.at(letter); }
  const Rational& total() const { return total_; }
  std::span<const Rational> values() const { return lengths_; }

  /// Same proportions with total 1.
  LengthData normalized() const;

  Rational min() const;
  Rational max() const;

  bool operator==(const LengthData& other) const { return lengths_ == other.lengths_; }

 private:
  std::vector<Rational> lengths_;
  Rational total_;
};

/// Sorted, strictly increasing set of exact points.
class PointSet {
 public:
  PointSet() = default;
  /// Sorts and removes duplicates.
  explicit PointSet(std::vector<Rational> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool contains(const Rational& x) const;
  std::span<const Rational> points() const { return points_; }
  const Rational& operator[](std::size_t i) const { return points_.at(i); }

  /// Minimal gap in {0} u points u {total}.
  Rational min_gap(const Rational& total) const;

  bool operator==(const PointSet&) const = default;

 private:
  std::vector<Rational> points_;
};

class Iem {
 public:
  Iem() = default;
  Iem(PermutationPair perm, LengthData lengths);

  const PermutationPair& perm() const { return perm_; }
  const LengthData& lengths() const { return lengths_; }
  const Alphabet& alphabet() const { return perm_.alphabet(); }
  std::size_t size() const { return perm_.size(); }
  const Rational& total() const { return lengths_.total(); }

  /// p_alpha: left endpoint of I_alpha in top order.
  const Rational& left(Letter letter) const { return left_.at(letter); }
  /// q_alpha: left endpoint of T(I_alpha) in bottom order.
  const Rational& image_left(Letter letter) const { return image_left_.at(letter); }

  /// The letter whose interval [p_alpha, p_alpha + lambda_alpha) contains x.
  Letter interval_of(const Rational& x) const;
  /// The letter whose image interval contains y.
  Letter image_interval_of(const Rational& y) const;

  Rational operator()(const Rational& x) const;
  Rational inverse(const Rational& y) const;

  /// T^{-1} as an interval exchange map (rows swapped).
  Iem inverse_map() const;

  /// Formal discontinuities {p_alpha : pi_t(alpha) > 1}.
  PointSet discontinuities() const;

  bool operator==(const Iem& other) const { return perm_ == other.perm_ && lengths_ == other.lengths_; }

 private:
  void check_domain(const Rational& x) const;

  PermutationPair perm_;
  LengthData lengths_;
  std::vector<Rational> left_;
  std::vector<Rational> image_left_;
  std::vector<Letter> top_order_;
  std::vector<Letter> bottom_order_;
};

/// Raised when a point lies outside [0, lambda*).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Rational evaluate(const Iem& map, const Rational& x);
Rational evaluate_inverse(const Iem& map, const Rational& y);

/// D(T^n) = D(T) u T^{-1}D(T) u ... u T^{-(n-1)}D(T), excluding the endpoint 0.
PointSet discontinuities(const Iem& map, std::uint64_t n);

/// Incremental D(T^n) for n = 1, 2, ... with the running minimal gap.
/// Pullback chains pass through 0 (an endpoint, not a discontinuity) without
/// stopping. `closed()` reports that D(T^n) can no longer grow.
class DiscontinuityGrowth {
 public:
  explicit DiscontinuityGrowth(const Iem& map);

  std::uint64_t n() const { return n_; }
  /// Moves from D(T^n) to D(T^{n+1}).
  void advance();
  bool closed() const { return closed_; }

  std::size_t size() const { return count_; }
  const Rational& min_gap() const { return min_gap_; }
  PointSet points() const;

 private:
  void insert(const Rational& p);

  const Iem* map_;
  std::set<Rational> chains_;
  std::vector<Rational> frontier_;
  Rational min_gap_;
  std::uint64_t n_ = 1;
  std::size_t count_ = 0;
  bool grew_ = false;
  bool closed_ = false;
};

/// Minimal gap among {0} u D(T^n) u {lambda*}.
Rational delta(const Iem& map, std::uint64_t n);

/// tau_r(x) = min { j >= 1 : |T^j x - x| < r }. Returns nullopt if no return
/// happens within `cap` iterates.
std::optional<std::uint64_t> return_time(const Iem& map, const Rational& x, const Rational& r,
                                         std::uint64_t cap);

struct FirstReturn {
  Rational point;
  std::uint64_t time;
};

/// First return of x under T to [0, bound). Returns nullopt past `cap`.
std::optional<FirstReturn> first_return(const Iem& map, const Rational& x, const Rational& bound,
                                        std::uint64_t cap);

struct KeaneWitness {
  std::uint64_t m;
  Letter from;  // alpha
  Letter to;    // beta, with pi_t(beta) > 1
};

/// Smallest m <= horizon with T^m(p_alpha) = p_beta, pi_t(beta) > 1, scanning
/// alpha in alphabet order. nullopt only means no violation within the horizon.
std::optional<KeaneWitness> keane_witness(const Iem& map, std::uint64_t horizon);

}  // namespace iet
