#pragma once

// Finite-depth profiles of the cocycle growth, discontinuity gap and
// return-time exponents, plus MMY balance and positivity depths.

#include "iet/induction.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace iet {

class InsufficientDepth : public std::range_error {
 public:
  using std::range_error::range_error;
};

struct ConditionProfileRow {
  std::size_t k = 0;
  Integer norm_k;     // ||M(k)||
  Integer norm_step;  // ||M(k,k+1)||
  double epsilon = 0; // log ||M(k,k+1)|| / log ||M(k)||
};

/// Rows k = 1..K; needs K+2 acceleration times.
std::vector<ConditionProfileRow> condition_profile(const InductionTrace& trace, Scheme scheme, std::size_t K);

enum class DeltaSchedule { all, geometric };

struct DeltaProfileRow {
  std::uint64_t n = 0;
  Rational delta;
  std::optional<double> exponent;  // -log delta / log n, n >= 2
  bool closed = false;             // D(T^n) has stopped growing
};

/// Delta(T^n) for n on the schedule up to N (geometric: powers of two and N).
/// Stops at the first scheduled n where the discontinuity set is closed.
std::vector<DeltaProfileRow> delta_profile(const Iem& map, std::uint64_t N, DeltaSchedule schedule);

struct SampleSpec {
  enum class Kind { points, lattice, random };
  Kind kind = Kind::lattice;
  std::vector<Rational> points;  // Kind::points
  std::uint64_t modulus = 101;   // Kind::lattice: x = i lambda*/p, 0 < i < p
  std::size_t count = 32;        // Kind::random
  std::uint64_t seed = 0;

  static SampleSpec explicit_points(std::vector<Rational> pts);
  static SampleSpec lattice(std::uint64_t p);
  static SampleSpec random(std::size_t count, std::uint64_t seed);
};

/// Exact sample points in (0, lambda*).
std::vector<Rational> sample_points(const Iem& map, const SampleSpec& spec);

struct ReturnSample {
  Rational x;
  std::optional<std::uint64_t> tau;  // nullopt if capped
};

struct ReturnProfileRow {
  Rational r;
  std::vector<ReturnSample> samples;
  std::size_t capped = 0;
  // Over completed samples only; nullopt when every sample hit the cap.
  std::optional<double> min_ratio;
  std::optional<double> mean_ratio;
  std::optional<double> max_ratio;
};

/// log tau / (-log r); 0 when tau = 1.
double return_ratio(std::uint64_t tau, const Rational& r);

std::vector<ReturnProfileRow> return_profile(const Iem& map, const std::vector<Rational>& radii,
                                             const SampleSpec& samples, std::uint64_t cap);

struct BalanceRow {
  std::size_t k = 0;
  Rational ratio;  // max lambda(m_k) / min lambda(m_k)
  Integer norm;    // ||A(k)||
  bool sandwich = false;  // 1/||A(k)|| <= max lambda(m_k) / lambda*(0)
};

/// Rows k = 0..K.
std::vector<BalanceRow> balance_profile(const InductionTrace& trace, std::size_t K);

struct PositivityRow {
  std::size_t k = 0;
  std::optional<std::size_t> depth;  // smallest r with A(k,k+r) > 0, if reached
};

/// max(2d-3, 2).
std::size_t positivity_bound(std::size_t d);

/// Rows k = 0..K-1. Depths are searched up to the end of the trace.
std::vector<PositivityRow> positivity_depth(const InductionTrace& trace, std::size_t K);

}  // namespace iet
