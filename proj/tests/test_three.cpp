#include <doctest.h>

#include "support.hpp"

#include "iet/three.hpp"

using namespace iet;
using namespace testing_support;

namespace {

Rational q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

const PermutationPair& abc() {
  static const PermutationPair p = PermutationPair::parse("ABC/CBA");
  return p;
}

InductionTrace random_three_trace(std::mt19937_64& rng, std::uint64_t depth) {
  const RauzyPath path = random_path(abc(), depth, rng);
  return induce(path_generated_map(path, rng), depth);
}

// Direct orbit sum on the circle.
Rational brute_birkhoff(const InducingRotation& rot, const StepFunction& f, Rational x, long n) {
  Rational s = 0;
  for (long i = 0; i < n; ++i) {
    s += f(x);
    x += rot.angle;
    if (x >= rot.interval_length) x -= rot.interval_length;
  }
  return s;
}

}  // namespace

TEST_CASE("inducing rotation of a small example") {
  const Iem t(abc(), LengthData({q(1, 2), q(1, 3), q(1, 6)}));
  const InducingRotation rot = inducing_rotation(t);
  CHECK(rot.interval_length == q(4, 3));
  CHECK(rot.angle == q(1, 2));
  CHECK(rot.alpha == q(3, 8));
  CHECK(rot.base_length == 1);
  CHECK(rot.map.lengths()[0] == q(5, 6));
  CHECK(rot.map.lengths()[1] == q(1, 2));
  for (long i = 0; i < 24; ++i) CHECK(induced_map_check(t, rot, q(i, 24)));
  CHECK_THROWS_AS(inducing_rotation(Iem(PermutationPair::parse("ABC/CAB"), t.lengths())), std::invalid_argument);
  CHECK_THROWS_AS(inducing_rotation(Iem(PermutationPair::parse("AB/BA"), LengthData({q(1, 2), q(1, 2)}))),
                  std::invalid_argument);
}

TEST_CASE("continued fractions match Euclid") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> u(1, 100000);
  for (int i = 0; i < 200; ++i) {
    long a = u(rng), b = u(rng);
    if (a == b) continue;
    const Rational x = q(std::min(a, b), std::max(a, b));
    const auto cf = continued_fraction(x);
    const Euclid e = euclid(x);
    CHECK(cf.a == e.a);
    CHECK(cf.q == e.q);
    CHECK(Rational(cf.p.back(), cf.q.back()) == x);
  }
  CHECK_THROWS(continued_fraction(Rational(1)));
}

TEST_CASE("induced map equals the first return on random maps") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 30; ++i) {
    const Iem t(abc(), LengthData(random_lengths(3, rng)));
    const InducingRotation rot = inducing_rotation(t);
    std::uniform_int_distribution<long> u(0, 999);
    for (int s = 0; s < 10; ++s) CHECK(induced_map_check(t, rot, t.total() * ratio(u(rng), 1000)));
  }
}

TEST_CASE("projection of a short path") {
  RauzyPath path(abc());
  for (char w : std::string("ABA")) path.append(*arrow_with_winner(path.end(), abc().alphabet().index(w)));
  const Iem t(abc(), realize_lengths(path, LengthData({q(1, 7), q(2, 7), q(3, 7)})));
  const InductionTrace trace = induce(t, 3);
  REQUIRE(trace.steps() == 3);
  const ProjectionResult p = project_path(trace);
  CHECK(p.ell(0) == 0);
  CHECK(p.ell(3) == 2);
  CHECK(p.bar_path.length() == 2);
  CHECK(p.bar_path.winner_word() == "A C");
}

TEST_CASE("projected lengths follow the rotation's own induction") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const InductionTrace trace = random_three_trace(rng, 120);
    REQUIRE(trace.steps() == 120);
    const InducingRotation rot = inducing_rotation(trace.initial());
    const ProjectionResult p = project_path(trace);
    const InductionTrace bar = induce(rot.map, p.ell(120));
    REQUIRE(bar.steps() == p.ell(120));
    for (std::uint64_t k = 0; k < bar.steps(); ++k) CHECK(bar.arrow_at(k) == p.bar_path.arrow_at(k));
    for (std::uint64_t n = 0; n <= 120; n += 3) {
      const auto predicted = projected_lengths(trace.perm_at(n), trace.lengths_at(n));
      const LengthData actual = bar.lengths_at(p.ell(n));
      CHECK(predicted[0] == actual[0]);
      CHECK(predicted[1] == actual[1]);
    }
  }
}

TEST_CASE("row, projection and norm identities at every step") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const InductionTrace trace = random_three_trace(rng, 100);
    const ProjectionResult p = project_path(trace);
    for (std::uint64_t n = 0; n <= trace.steps(); ++n) {
      CHECK(check_row_identity(trace, n));
      CHECK(check_projection_identity(trace, p, n));
      const auto s = norm_sandwich(trace, p, n);
      CHECK(s.ok);
      CHECK(s.norm == trace.cocycle(0, n).norm());
    }
  }
}

TEST_CASE("R matrix") {
  const CocycleMatrix qm = CocycleMatrix::from_rows({{1, 2, 3}, {0, 1, 0}, {4, 0, 1}});
  const RMatrix r = r_matrix(qm);
  CHECK(r.entries[0][0] == 3);
  CHECK(r.entries[0][1] == 5);
  CHECK(r.entries[1][0] == 1);
  CHECK(r.entries[1][1] == 1);
  CHECK(r.entries[2][0] == 4);
  CHECK(r.entries[2][1] == 1);
}

TEST_CASE("Zorich alignment") {
  std::mt19937_64 rng(9);
  int rows_seen = 0;
  for (int i = 0; i < 15; ++i) {
    const InductionTrace trace = random_three_trace(rng, 150);
    const auto rows = zorich_alignment(trace, 1000);
    if (!rows.empty()) CHECK(rows.front().j == 0);
    for (const auto& r : rows) {
      CHECK(r.ok_step);
      CHECK(r.ok_norms);
      ++rows_seen;
    }
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].j == rows[k - 1].j_next);
  }
  CHECK(rows_seen > 50);
}

TEST_CASE("step functions") {
  const auto f = StepFunction::indicator(Rational(2), q(1, 2), Rational(1));
  CHECK(f(q(1, 4)) == 0);
  CHECK(f(q(1, 2)) == 1);
  CHECK(f(Rational(1)) == 0);
  CHECK(f.mean() == q(1, 4));
  CHECK(f.variation() == 2);
  CHECK(StepFunction::indicator(Rational(2), Rational(0), Rational(1)).variation() == 2);
  CHECK(StepFunction::constant(Rational(2), Rational(5)).variation() == 0);
  CHECK_THROWS_AS(StepFunction::indicator(Rational(2), Rational(1), Rational(1)), std::invalid_argument);
}

TEST_CASE("Birkhoff sums agree with orbit sums") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 25; ++i) {
    const Iem t(abc(), LengthData(random_lengths(3, rng, 30)));
    const InducingRotation rot = inducing_rotation(t);
    const auto f = StepFunction::indicator(rot.interval_length, Rational(0), rot.base_length);
    std::uniform_int_distribution<long> u(0, 99);
    const Rational x = rot.interval_length * ratio(u(rng), 100);
    for (long n : {0L, 1L, 2L, 17L, 250L}) CHECK(birkhoff_sum(rot, f, x, n) == brute_birkhoff(rot, f, x, n));
  }
}

TEST_CASE("Denjoy-Koksma on path-generated maps") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const InductionTrace trace = random_three_trace(rng, 120);
    const InducingRotation rot = inducing_rotation(trace.initial());
    const auto f = StepFunction::indicator(rot.interval_length, Rational(0), rot.base_length);
    const auto c = StepFunction::constant(rot.interval_length, Rational(3));
    for (std::size_t k = 0; k < rot.cf.q.size(); ++k) {
      const auto dk = denjoy_koksma_check(rot, f, Rational(0), k);
      CHECK(dk.q == rot.cf.q[k]);
      CHECK(dk.variation == 2);
      CHECK(dk.ok);
      const auto flat = denjoy_koksma_check(rot, c, Rational(0), k);
      CHECK(flat.sum_error == 0);
      CHECK(flat.ok);
    }
    CHECK_THROWS_AS(denjoy_koksma_check(rot, f, Rational(0), rot.cf.q.size()), std::out_of_range);
  }
}

TEST_CASE("return times of the map and its rotation agree") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const InductionTrace trace = random_three_trace(rng, 100);
    const Iem& t = trace.initial();
    std::uniform_int_distribution<long> u(1, 999);
    for (int e = 2; e <= 6; ++e) {
      const Rational r = t.total() / Rational(Integer(1) << (2 * e));
      const Rational x = r + (t.total() - 2 * r) * ratio(u(rng), 1000);
      const auto cmp = return_time_comparison(t, x, r, 1u << 22);
      REQUIRE(cmp.tau.has_value());
      CHECK(cmp.ok);
      CHECK(cmp.gap < 2);
    }
  }
}
