#include <doctest.h>

#include "support.hpp"

#include "iet/paths.hpp"

using namespace iet;
using namespace testing_support;

TEST_CASE("Fibonacci oracle") {
  FibonacciOracle f;
  CHECK(f(-1) == 1);
  CHECK(f(0) == 0);
  CHECK(f(1) == 1);
  CHECK(f(7) == 13);
  for (long n = 0; n < 300; n += 7) CHECK(f(n) == fib(n));
  for (long n = 1; n < 200; ++n) CHECK(f.cassini(n));
  f.inject_fault(5);
  CHECK(f.faulty());
  CHECK(f(4) == 3);
  CHECK(f(5) == 6);
  CHECK_FALSE(f.cassini(6));
}

TEST_CASE("winner word parsing") {
  const auto w = WinnerWord::parse("C B^3 (D^2 A^3 D)^2 B");
  CHECK(w.arrow_count() == 1 + 3 + 12 + 1);
  CHECK(w.to_string() == "C B^3 (D^2 A^3 D)^2 B");
  CHECK(WinnerWord::parse(w.to_string()).to_string() == w.to_string());
  CHECK(WinnerWord::parse("A^1B").to_string() == "A^1 B");
  CHECK(WinnerWord::parse("((AB)^2C)^3").arrow_count() == 15);
  // 3 + 1 + 3 * 6 + 1 arrows in the first Zorich-failure block.
  CHECK(WinnerWord::parse("C^3 B (D^2 A^3 D)^3 B").arrow_count() == 23);
}

TEST_CASE("winner word syntax errors carry positions") {
  auto position = [](const char* text) {
    try {
      (void)WinnerWord::parse(text);
    } catch (const ParseError& e) {
      return std::pair<std::size_t, std::size_t>(e.line(), e.column());
    }
    return std::pair<std::size_t, std::size_t>(0, 0);
  };
  CHECK(position("A (B") == std::pair<std::size_t, std::size_t>(1, 5));
  CHECK(position("^2") == std::pair<std::size_t, std::size_t>(1, 1));
  CHECK(position("A)").second == 2);
  CHECK(position("A\nB^").first == 2);
  CHECK(position("") != std::pair<std::size_t, std::size_t>(0, 0));
  CHECK(position("A^99999999999999999999999") != std::pair<std::size_t, std::size_t>(0, 0));
}

TEST_CASE("realizing a word follows the diagram") {
  const RauzyPath path = parse_winner_word("C^3 B (D^2 A^3 D)^3 B", example_start());
  CHECK(path.length() == 23);
  CHECK(path.winner_word() == "C^3 B D D A A A D D D A A A D D D A A A D B");
  CHECK_THROWS_AS(parse_winner_word("A", example_start()), ParseError);
  CHECK_THROWS_AS(parse_winner_word("X", example_start()), ParseError);
  try {
    parse_winner_word("C B^3 Q", example_start());
  } catch (const ParseError& e) {
    CHECK(e.column() == 7);
  }
}

TEST_CASE("realized lengths replay the word") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 30; ++i) {
    const RauzyPath path = random_path(random_admissible(2 + i % 4, rng), 40, rng);
    const LengthData lambda = realize_lengths(path);
    CHECK(lambda.total() == 1);
    const InductionTrace trace = induce(Iem(path.start(), lambda), 40);
    REQUIRE(trace.steps() == 40);
    for (std::uint64_t k = 0; k < 40; ++k) CHECK(trace.arrow_at(k) == path.arrow_at(k));
  }
  // Empty path: the normalized tail.
  const RauzyPath empty(PermutationPair::parse("ABC/CBA"));
  CHECK(realize_lengths(empty).values()[0] == Rational(1, 3));
  // Alternating two-letter word: consecutive Fibonacci ratio.
  const RauzyPath alt = parse_winner_word("(A B)^5", PermutationPair::parse("AB/BA"));
  const LengthData l = realize_lengths(alt);
  CHECK(l[0] / l[1] == Rational(fib(12), fib(11)));
}

TEST_CASE("uniform-failure schedule boundaries") {
  const auto s = uniform_failure_schedule(4);
  CHECK(s.boundaries[1] == 17);
  for (unsigned k = 1; k <= 4; ++k) {
    CHECK(s.boundaries[k] == s.formula_boundaries[k]);
    CHECK(s.boundaries[k] - s.boundaries[k - 1] == 5 + 6 * (1u << k));
  }
  CHECK(s.path.length() == s.boundaries.back());
  CHECK(Integer(s.path.length()) == s.word.arrow_count());
}

TEST_CASE("zorich-failure schedule lengths") {
  const auto s = zorich_failure_schedule(3);
  CHECK(s.s[1] == 3);
  CHECK(s.s[2] == 21);
  CHECK(s.s[3] == 987);
  CHECK(s.boundaries[1] == 23);
  CHECK(s.formula_boundaries[1] == 18);
  CHECK(s.path.length() == s.boundaries[3]);
  for (unsigned k = 1; k <= 3; ++k) {
    const std::uint64_t loops = (1u << k) + k;
    CHECK(s.boundaries[k] - s.boundaries[k - 1] == s.s[k] + 6 * loops + 2);
  }
  CHECK_THROWS_AS(zorich_failure_schedule(6), std::overflow_error);
}

TEST_CASE("uniform-failure block matrices") {
  const auto s = uniform_failure_schedule(4);
  for (unsigned k = 1; k <= 4; ++k) {
    const Mat lit = literal_cocycle(s.path, s.boundaries[k - 1], s.boundaries[k]);
    CHECK(lit == u_closed(k));
    const auto check = verify_block_matrix(Family::uniform_failure, k);
    CHECK(check.equal);
    CHECK(same(u_closed(k), check.computed));
    const long n = 1L << (k + 1);
    CHECK(check.computed.norm() == 9 * fib(n) + 6 * fib(n + 1) + fib(n + 2) + 6);
    CHECK(uniform_failure_norm_formula(k, {}) == check.computed.norm());
  }
  CHECK(verify_block_matrix(Family::uniform_failure, 1).computed.norm() == 71);
}

TEST_CASE("uniform-failure bridge and tail") {
  const auto s = uniform_failure_schedule(3);
  const Mat bridge = {{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 2, 0}, {0, 1, 1, 1}};
  for (unsigned k = 1; k <= 2; ++k) {
    const std::uint64_t l = s.boundaries[k];
    CHECK(literal_cocycle(s.path, l, l + 3) == bridge);
    CHECK(same(bridge, uniform_failure_bridge()));
    CHECK(literal_cocycle(s.path, l + 3, s.boundaries[k + 1]) == u_tail(k));
    CHECK(same(u_tail(k), uniform_failure_tail_closed_form(k, {})));
  }
}

TEST_CASE("zorich-failure block matrices") {
  const auto s = zorich_failure_schedule(3);
  for (unsigned k = 1; k <= 3; ++k) {
    const auto check = verify_block_matrix(Family::zorich_failure, k);
    CHECK(check.equal);
    CHECK(same(z_closed(k), check.computed));
  }
  // Literal arrow-by-arrow product for the first two blocks.
  CHECK(literal_cocycle(s.path, 0, s.boundaries[1]) == z_closed(1));
  CHECK(literal_cocycle(s.path, s.boundaries[1], s.boundaries[2]) == z_closed(2));
}

TEST_CASE("zorich-failure growth witness") {
  for (unsigned k = 1; k <= 3; ++k) {
    const auto z = z_failure_witness(k);
    CHECK(z.bridge_shape);
    const Integer s_next = fib(1L << (k + 2));
    CHECK(z.bridge_norm == s_next + 4);
    CHECK(z.expected_bridge_norm == z.bridge_norm);
    CHECK(z.norm < z.bridge_norm * z.bridge_norm);
    CHECK(z.ok);
  }
  CHECK(z_failure_witness(1).norm == 107);
  CHECK(z_failure_witness(1).bridge_norm == 25);
}

TEST_CASE("faulty Fibonacci values break the closed forms") {
  FibonacciOracle bad;
  bad.inject_fault(4);
  CHECK_FALSE(verify_block_matrix(Family::uniform_failure, 1, bad).equal);
  CHECK_FALSE(verify_block_matrix(Family::zorich_failure, 1, bad).equal);
}

TEST_CASE("uniform-failure return ratio stays below three quarters") {
  double previous = 1;
  for (unsigned k = 4; k <= 6; ++k) {
    const auto u = u_failure_ratio(k);
    CHECK(u.lambda_low <= u.lambda_high);
    CHECK(u.lambda_low > 0);
    CHECK(u.ratio_low <= u.ratio_high);
    CHECK(u.ratio_high < 0.75);
    CHECK(u.ratio_high <= u.analytic);
    CHECK(u.ratio_high < previous);
    CHECK(u.ok);
    CHECK(u.ratio_at_horizon == doctest::Approx(u.ratio_high).epsilon(1e-6));
    previous = u.ratio_high;
    // Q_C(ell_k + 3) from the path itself.
    const auto s = uniform_failure_schedule(k + 1);
    const Mat q = literal_cocycle(s.path, 0, s.boundaries[k] + 3);
    Integer row = 0;
    for (const auto& v : q[2]) row += v;
    CHECK(u.return_time == row);
  }
  CHECK_THROWS(u_failure_ratio(4, 5));
}
