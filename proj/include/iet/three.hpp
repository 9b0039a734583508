#pragma once

// Three-interval exchanges with data (ABC/CBA) as first returns of a circle
// rotation: the rotation itself, path projection, R(n) matrices, norm
// comparisons and Birkhoff-sum / return-time checks.

#include "iet/induction.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace iet {

/// alpha = [0; a_1, a_2, ...] with convergents p_k/q_k, q_0 = 1, q_1 = a_1.
/// Finite, since alpha is rational.
struct ContinuedFraction {
  std::vector<Integer> a;  // a[0] is a_1
  std::vector<Integer> p;  // p[0] = p_0 = 0
  std::vector<Integer> q;  // q[0] = q_0 = 1
};

/// Requires 0 < alpha < 1.
ContinuedFraction continued_fraction(const Rational& alpha);

struct InducingRotation {
  Rational interval_length;  // lambda* + lambda_B
  Rational angle;            // lambda_B + lambda_C
  Rational alpha;            // angle / interval_length
  Rational base_length;      // lambda*
  ContinuedFraction cf;
  /// The rotation as a 2-IEM on labels A, C with top AC, bottom CA:
  /// lambda_A = lambda_A + lambda_B, lambda_C = lambda_B + lambda_C.
  Iem map;

  Rational operator()(const Rational& x) const { return map(x); }
};

/// Throws std::invalid_argument unless `map` is a 3-IEM with data ABC/CBA.
InducingRotation inducing_rotation(const Iem& map);

/// R(n) = Q(n) [[1,0],[1,1],[0,1]], 3x2, stored row-major.
struct RMatrix {
  Integer entries[3][2];
  bool operator==(const RMatrix& other) const;
};

RMatrix r_matrix(const CocycleMatrix& q);

struct ProjectionResult {
  RauzyPath bar_path;  // starts at AC/CA
  /// ell at the start of each run of the 3-IEM path, plus the total at the end.
  std::vector<std::uint64_t> ell_at_run;
  std::vector<bool> run_projects;
  const RauzyPath* source = nullptr;

  /// #{1 <= m <= n : pi(m) is ACB/CBA or ABC/CAB}.
  std::uint64_t ell(std::uint64_t n) const;
  /// Qbar(ell(n)).
  CocycleMatrix bar_q(std::uint64_t n) const { return cocycle(bar_path, 0, ell(n)); }
};

/// Loser A maps to the rotation arrow with winner C, loser C to winner A, and
/// loser B to the empty arrow. The result refers to `trace`, which must outlive it.
ProjectionResult project_path(const InductionTrace& trace);

/// Rotation length vector predicted from lambda(n) by the case matrix of pi(n).
std::vector<Rational> projected_lengths(const PermutationPair& perm, const LengthData& lambda);

/// Qbar(ell(n)) equals rows A and C of R(n).
bool check_projection_identity(const InductionTrace& trace, const ProjectionResult& projection, std::uint64_t n);

/// Row B of R(n) equals rows A + C, row C, or row A for pi(n) = ABC/CBA,
/// ACB/CBA, ABC/CAB respectively.
bool check_row_identity(const InductionTrace& trace, std::uint64_t n);

struct NormSandwich {
  Integer norm;      // ||Q(n)||
  Integer bar_norm;  // ||Qbar(ell(n))||
  bool ok = false;   // bar_norm <= 2 norm and norm <= 2 bar_norm
};

NormSandwich norm_sandwich(const InductionTrace& trace, const ProjectionResult& projection, std::uint64_t n);
NormSandwich norm_sandwich(const InductionTrace& trace, std::uint64_t n);

struct AlignmentRow {
  std::size_t k = 0;
  std::size_t j = 0;       // j(k)
  std::size_t j_next = 0;  // j(k+1)
  bool ok_step = false;    // j(k+1) - j(k) in {1, 3}
  Integer bar_norm;        // ||Zbar(k,k+1)||
  Integer norm;            // ||Z(j(k), j(k+1))||
  bool ok_norms = false;   // bar_norm < norm <= 2 bar_norm
};

/// Rows k = 0..K-1 for which j(k+1) exists within the trace.
std::vector<AlignmentRow> zorich_alignment(const InductionTrace& trace, std::size_t K);

/// Right-continuous step function on [0, L): value[i] on [breaks[i], breaks[i+1]).
class StepFunction {
 public:
  StepFunction(Rational length, std::vector<Rational> breaks, std::vector<Rational> values);
  static StepFunction indicator(const Rational& length, const Rational& lo, const Rational& hi);
  static StepFunction constant(const Rational& length, const Rational& value);

  const Rational& length() const { return length_; }
  Rational operator()(const Rational& x) const;
  /// Integral against the normalized Lebesgue measure.
  Rational mean() const;
  /// Total variation on the circle R / L Z.
  Rational variation() const;

  const std::vector<Rational>& breaks() const { return breaks_; }
  const std::vector<Rational>& values() const { return values_; }

 private:
  Rational length_;
  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
};

/// sum_{i<n} f(x + i*angle mod L), exactly, in O(pieces * log) operations.
Rational birkhoff_sum(const InducingRotation& rot, const StepFunction& f, const Rational& x, const Integer& n);

struct DenjoyKoksma {
  Integer q;
  Rational sum_error;  // |S_q f(x) - q * mean|
  Rational variation;
  bool ok = false;     // sum_error < variation
};

/// Uses q_k of the rotation's continued fraction; throws std::out_of_range past the end.
DenjoyKoksma denjoy_koksma_check(const InducingRotation& rot, const StepFunction& f, const Rational& x, std::size_t k);

struct ReturnComparison {
  std::optional<std::uint64_t> tau;
  std::optional<std::uint64_t> bar_tau;
  Rational gap;     // |tau - bar_tau * lambda* / (lambda* + lambda_B)|
  bool ok = false;  // both completed and gap < 2
};

ReturnComparison return_time_comparison(const Iem& map, const Rational& x, const Rational& r, std::uint64_t cap);

/// T(x) equals the first return of the rotation to [0, lambda*).
bool induced_map_check(const Iem& map, const InducingRotation& rot, const Rational& x);

}  // namespace iet
