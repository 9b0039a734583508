#pragma once

// Winner words, realization of length data along a Rauzy path, and the two
// Fibonacci-matrix example families through (ABDC/DACB).

#include "iet/induction.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iet {

/// F_{-1} = 1, F_0 = 0, F_{n+1} = F_n + F_{n-1}. Values are memoized.
/// `inject_fault(n0)` adds 1 to every F_n with n >= n0, for exercising the
/// verification report.
class FibonacciOracle {
 public:
  const Integer& operator()(long n) const;

  void inject_fault(long from) { fault_from_ = from; memo_.clear(); }
  bool faulty() const { return fault_from_.has_value(); }

  /// F_{n+1}F_{n-1} - F_n^2 == (-1)^n for the given n.
  bool cassini(long n) const;

  static double golden() { return 1.6180339887498948482; }

 private:
  mutable std::map<long, Integer> memo_;
  std::optional<long> fault_from_;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// WORD := TERM+ ; TERM := ATOM ["^" UINT] ; ATOM := LETTER | "(" WORD ")".
struct WordTerm {
  char letter = 0;              // 0 for a group
  std::vector<WordTerm> group;  // inner word of a group
  std::uint64_t power = 1;
  bool explicit_power = false;  // "^1" was written
  std::size_t line = 1;
  std::size_t column = 1;
};

class WinnerWord {
 public:
  WinnerWord() = default;
  explicit WinnerWord(std::vector<WordTerm> terms) : terms_(std::move(terms)) {}

  static WinnerWord parse(std::string_view text);

  const std::vector<WordTerm>& terms() const { return terms_; }
  /// Number of arrows the word expands to.
  Integer arrow_count() const;
  std::string to_string() const;

  void append(const WinnerWord& other);

  /// Follows the word from `start`; each letter must win at the current vertex.
  RauzyPath realize(const PermutationPair& start) const;

 private:
  std::vector<WordTerm> terms_;
};

RauzyPath parse_winner_word(std::string_view text, const PermutationPair& start);

/// lambda(0) = tail * Q(0,n), normalized to total 1. Without a tail the
/// all-ones vector is used.
LengthData realize_lengths(const RauzyPath& path, const std::optional<LengthData>& tail = std::nullopt);

/// The two example families: one violating the Zorich growth condition, one
/// violating uniform return-time scaling.
enum class Family { zorich_failure, uniform_failure };

struct ExampleSchedule {
  Family family = Family::uniform_failure;
  unsigned k_max = 0;
  PermutationPair start;
  WinnerWord word;
  RauzyPath path;
  /// boundaries[k] = ell_k from the arrow count of the word, boundaries[0] = 0.
  std::vector<std::uint64_t> boundaries;
  /// ell_k from the closed-form sum.
  std::vector<std::uint64_t> formula_boundaries;
  /// s_k of the Zorich-failure family (index 0 unused); empty otherwise.
  std::vector<std::uint64_t> s;
};

PermutationPair example_start();

/// C^{s_k} B (D^2 A^3 D)^{2^k+k} B for k = 1..k_max, s_k = F_{2^{k+1}}.
/// Run counts are 64-bit, so k_max <= 5.
ExampleSchedule zorich_failure_schedule(unsigned k_max, const FibonacciOracle& fib = {});
/// C B^3 (D^2 A^3 D)^{2^k} B for k = 1..k_max.
ExampleSchedule uniform_failure_schedule(unsigned k_max);

/// Closed forms of Q(ell_{k-1}, ell_k), rows and columns in A,B,C,D order.
CocycleMatrix zorich_failure_closed_form(unsigned k, const FibonacciOracle& fib);
CocycleMatrix uniform_failure_closed_form(unsigned k, const FibonacciOracle& fib);
/// 9F_N + 6F_{N+1} + F_{N+2} + 6 with N = 2^{k+1}.
Integer uniform_failure_norm_formula(unsigned k, const FibonacciOracle& fib);
/// Q(ell_k+3, ell_{k+1}) in closed form, M = 2^{k+2}.
CocycleMatrix uniform_failure_tail_closed_form(unsigned k, const FibonacciOracle& fib);
/// The three-arrow bridge C B B: Q(ell_k, ell_k+3) = this matrix.
CocycleMatrix uniform_failure_bridge();

struct BlockCheck {
  CocycleMatrix computed;
  CocycleMatrix closed_form;
  bool equal = false;
};

BlockCheck verify_block_matrix(Family family, unsigned k, const FibonacciOracle& fib = {});

struct ZFailure {
  unsigned k = 0;
  Integer norm;         // ||Q(ell_k)||
  CocycleMatrix bridge; // Q(ell_k, ell_k + s_{k+1})
  Integer bridge_norm;
  Integer expected_bridge_norm;  // F_{2^{k+2}} + 4
  bool bridge_shape = false;  // bridge == I + s_{k+1} E_{BC}
  bool ok = false;            // norm < bridge_norm^2
};

ZFailure z_failure_witness(unsigned k, const FibonacciOracle& fib = {});

struct UFailure {
  unsigned k = 0;
  unsigned horizon = 0;
  Integer return_time;  // Q_C(ell_k + 3)
  /// Rigorous bracket of lambda_B(ell_k+3) over every positive tail at ell_horizon
  /// (lambda*(0) = 1).
  Rational lambda_low;
  Rational lambda_high;
  double ratio_low = 0;   // from lambda_low
  double ratio_high = 0;  // from lambda_high; the bound to compare against 3/4
  /// Barycenter realizations at ell_horizon and ell_{horizon+1}.
  double ratio_at_horizon = 0;
  double ratio_at_next = 0;
  double analytic = 0;  // (1 + 5k 2^{-k-2} + 2^{-k-1}) / 2
  bool ok = false;      // ratio_high < 3/4
};

/// Requires horizon > k + 1; horizon 0 means k + 2.
UFailure u_failure_ratio(unsigned k, unsigned horizon = 0);

}  // namespace iet
