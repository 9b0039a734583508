#pragma once

// Rauzy-Veech induction, Rauzy diagrams, cocycle matrices and the Zorich /
// Marmi-Moussa-Yoccoz acceleration times.

#include "iet/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace iet {

enum class ArrowKind { top, bottom };

/// One move of the Rauzy diagram. For a top arrow the winner is the last
/// letter of the top row and the loser the last of the bottom row; swapped
/// for a bottom arrow.
struct Arrow {
  PermutationPair source;
  ArrowKind kind = ArrowKind::top;
  Letter winner = 0;
  Letter loser = 0;
  PermutationPair target;

  bool is_loop() const { return source == target; }
  bool operator==(const Arrow&) const = default;
};

class NotAdmissible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Arrow rauzy_arrow(const PermutationPair& perm, ArrowKind kind);
std::pair<Arrow, Arrow> rauzy_successors(const PermutationPair& perm);
/// The outgoing arrow whose winner is `winner`, if any.
std::optional<Arrow> arrow_with_winner(const PermutationPair& perm, Letter winner);

struct RauzyDiagram {
  std::vector<PermutationPair> vertices;  // BFS order from the seed
  std::vector<Arrow> arrows;              // two per vertex, top first
};

RauzyDiagram rauzy_class(const PermutationPair& perm);

/// Square nonnegative integer matrix indexed by (Letter, Letter). Length
/// vectors are rows: lambda(m) = lambda(n) Q(m,n).
class CocycleMatrix {
 public:
  CocycleMatrix() = default;
  /// Identity of size d.
  explicit CocycleMatrix(std::size_t d);
  static CocycleMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t size() const { return d_; }
  const Integer& operator()(Letter row, Letter col) const { return entries_[row * d_ + col]; }
  Integer& operator()(Letter row, Letter col) { return entries_[row * d_ + col]; }

  /// Sum of entries (all entries are nonnegative).
  Integer norm() const;
  /// Q_beta = sum_alpha Q_{beta alpha}.
  Integer row_sum(Letter row) const;
  bool positive() const;
  Integer determinant() const;

  /// this <- (I + s E_{loser,winner}) this, i.e. row `loser` += s * row `winner`.
  void left_multiply_elementary(Letter loser, Letter winner, const Integer& s);

  /// Row vector times matrix.
  std::vector<Rational> apply(std::span<const Rational> row) const;

  friend CocycleMatrix operator*(const CocycleMatrix& a, const CocycleMatrix& b);
  bool operator==(const CocycleMatrix&) const = default;

  std::string to_string() const;

 private:
  std::size_t d_ = 0;
  std::vector<Integer> entries_;
};

/// B_gamma^s = I + s E_{loser,winner}.
CocycleMatrix arrow_matrix(const Arrow& arrow, const Integer& power = 1);

struct ArrowRun {
  Arrow arrow;
  std::uint64_t count = 1;
};

/// A finite path in a Rauzy diagram. Consecutive repeats of the same arrow
/// (only possible for loops) are stored once with a count.
class RauzyPath {
 public:
  RauzyPath() = default;
  explicit RauzyPath(PermutationPair start);

  /// Throws std::invalid_argument if `arrow.source` is not the current end.
  void append(const Arrow& arrow, std::uint64_t count = 1);
  void append(const RauzyPath& tail);

  const PermutationPair& start() const { return start_; }
  const PermutationPair& end() const;
  std::uint64_t length() const { return length_; }
  bool empty() const { return length_ == 0; }
  const std::vector<ArrowRun>& runs() const { return runs_; }

  /// Arrow number `index` (0-based: the move from step index to index+1).
  const Arrow& arrow_at(std::uint64_t index) const;
  /// Winner of arrow number `index`.
  Letter winner_at(std::uint64_t index) const { return arrow_at(index).winner; }
  /// Vertex reached after `n` arrows.
  const PermutationPair& vertex_at(std::uint64_t n) const;

  RauzyPath slice(std::uint64_t from, std::uint64_t to) const;

  /// Flat winner word with run-length exponents, e.g. "C^3 B D^2 A^3 D".
  std::string winner_word() const;

  /// Run containing arrow `index`, and the number of arrows before run `i`.
  std::size_t run_index(std::uint64_t index) const;
  std::uint64_t run_offset(std::size_t i) const { return offsets_.at(i); }

 private:

  PermutationPair start_;
  std::vector<ArrowRun> runs_;
  std::vector<std::uint64_t> offsets_;  // offsets_[i] = arrows before run i
  std::uint64_t length_ = 0;
};

/// Q(m,n) = B_{gamma_n} ... B_{gamma_{m+1}} over arrows m..n-1.
CocycleMatrix cocycle(const RauzyPath& path, std::uint64_t m, std::uint64_t n);

/// Raised by rv_step when lambda_{alpha_t} = lambda_{alpha_b}.
class TieError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One Rauzy-Veech step.
std::pair<Iem, Arrow> rv_step(const Iem& map);

/// n_0 = 0 and the ends of maximal same-winner runs. Only boundaries
/// followed by an arrow with a different winner are included.
std::vector<std::uint64_t> zorich_times(const RauzyPath& path);
/// m_0 = 0 and m_{k+1} = index of the first arrow after m_k that completes
/// the set of winners.
std::vector<std::uint64_t> mmy_times(const RauzyPath& path);

enum class StopReason { max_steps, tie };
enum class Scheme { zorich, mmy };

std::string to_string(Scheme scheme);

/// Result of iterating Rauzy-Veech induction. Lengths are kept at Zorich
/// times only; other steps are replayed from the nearest snapshot.
class InductionTrace {
 public:
  InductionTrace(Iem initial, RauzyPath path, StopReason reason,
                 std::vector<std::pair<std::uint64_t, LengthData>> snapshots);

  const Iem& initial() const { return initial_; }
  const RauzyPath& path() const { return path_; }
  std::uint64_t steps() const { return path_.length(); }
  StopReason stop_reason() const { return reason_; }

  LengthData lengths_at(std::uint64_t n) const;
  const PermutationPair& perm_at(std::uint64_t n) const { return path_.vertex_at(n); }
  Iem iem_at(std::uint64_t n) const { return Iem(perm_at(n), lengths_at(n)); }
  const Arrow& arrow_at(std::uint64_t index) const { return path_.arrow_at(index); }

  CocycleMatrix cocycle(std::uint64_t m, std::uint64_t n) const;

  const std::vector<std::uint64_t>& zorich_times() const { return zorich_; }
  const std::vector<std::uint64_t>& mmy_times() const { return mmy_; }
  const std::vector<std::uint64_t>& times(Scheme scheme) const;

 private:
  Iem initial_;
  RauzyPath path_;
  StopReason reason_;
  std::vector<std::pair<std::uint64_t, LengthData>> snapshots_;
  std::vector<std::uint64_t> zorich_;
  std::vector<std::uint64_t> mmy_;
};

/// Up to `max_steps` Rauzy-Veech steps. Loops are taken in one block with
/// the exact repeat count. A tie ends the trace with StopReason::tie.
InductionTrace induce(const Iem& map, std::uint64_t max_steps);

std::vector<std::uint64_t> zorich_times(const InductionTrace& trace);
std::vector<std::uint64_t> mmy_times(const InductionTrace& trace);

/// Z(k,l) = Q(n_k, n_l) or A(k,l) = Q(m_k, m_l).
CocycleMatrix accelerated_cocycle(const InductionTrace& trace, Scheme scheme, std::size_t k, std::size_t l);

struct Ancestor {
  Rational point;             // p in D(T)
  Letter letter;              // alpha with pi_t^{(n)}(alpha) > 1
  std::uint64_t iterate = 0;  // i with T^i(p_alpha(n)) = p, i < Q_alpha(n)
};

/// For every p in D(T), a witness (alpha, i) with T^i(p_alpha(n)) = p and
/// 0 <= i < Q_alpha(n). Throws std::logic_error if some p is unmatched.
std::vector<Ancestor> discontinuity_ancestry(const InductionTrace& trace, std::uint64_t n);

/// The towers T^i(I_alpha(n)), 0 <= i < Q_alpha(n), are intervals, are
/// pairwise disjoint, cover [0, lambda*) and return onto T(n)'s image
/// intervals. Past 2^16 levels the towers are checked one induction step at
/// a time (heights 1 and 2), plus sum_alpha lambda_alpha(n) Q_alpha(n) = lambda*.
bool tiling_check(const InductionTrace& trace, std::uint64_t n);

}  // namespace iet
