#include "iet/paths.hpp"

#include <cctype>
#include <cmath>

namespace iet {

// --------------------------------------------------------------- Fibonacci

const Integer& FibonacciOracle::operator()(long n) const {
  if (n < -1) throw std::invalid_argument("Fibonacci index below -1");
  auto it = memo_.find(n);
  if (it != memo_.end()) return it->second;
  Integer value;
  if (n == -1) {
    value = 1;
  } else {
    mpz_fib_ui(value.get_mpz_t(), static_cast<unsigned long>(n));
  }
  if (fault_from_ && n >= *fault_from_) value += 1;
  return memo_.emplace(n, std::move(value)).first->second;
}

bool FibonacciOracle::cassini(long n) const {
  const Integer lhs = (*this)(n + 1) * (*this)(n - 1) - (*this)(n) * (*this)(n);
  return lhs == (n % 2 == 0 ? 1 : -1);
}

// ------------------------------------------------------------ winner words

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  WinnerWord parse() {
    auto terms = word();
    skip_space();
    if (!at_end()) fail(peek() == ')' ? "unbalanced ')'" : std::string("unexpected character '") + peek() + "'");
    return WinnerWord(std::move(terms));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }

  static bool is_letter(char c) {
    return !(c == '(' || c == ')' || c == '^' || std::isspace(static_cast<unsigned char>(c)) ||
             std::isdigit(static_cast<unsigned char>(c)));
  }

  std::vector<WordTerm> word() {
    std::vector<WordTerm> terms;
    for (;;) {
      skip_space();
      if (at_end() || peek() == ')') break;
      terms.push_back(term());
    }
    if (terms.empty()) fail(at_end() ? "expected a letter or '('" : "empty group");
    return terms;
  }

  WordTerm term() {
    WordTerm t;
    t.line = line_;
    t.column = column_;
    const char c = peek();
    if (c == '(') {
      advance();
      t.group = word();
      if (at_end() || peek() != ')') fail("missing ')'");
      advance();
    } else if (is_letter(c)) {
      t.letter = c;
      advance();
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
    skip_space();
    if (!at_end() && peek() == '^') {
      advance();
      skip_space();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent after '^'");
      std::uint64_t value = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        const std::uint64_t digit = static_cast<std::uint64_t>(peek() - '0');
        if (value > (UINT64_MAX - digit) / 10) fail("exponent too large");
        value = value * 10 + digit;
        advance();
      }
      t.power = value;
      t.explicit_power = true;
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void print_terms(const std::vector<WordTerm>& terms, std::string& out) {
  bool first = true;
  for (const auto& t : terms) {
    if (!first) out += ' ';
    first = false;
    if (t.letter) {
      out += t.letter;
    } else {
      out += '(';
      print_terms(t.group, out);
      out += ')';
    }
    if (t.explicit_power || t.power != 1) out += "^" + std::to_string(t.power);
  }
}

Integer count_terms(const std::vector<WordTerm>& terms) {
  Integer total = 0;
  for (const auto& t : terms) {
    const Integer inner = t.letter ? Integer(1) : count_terms(t.group);
    total += inner * Integer(static_cast<unsigned long>(t.power));
  }
  return total;
}

void expand(const std::vector<WordTerm>& terms, RauzyPath& path) {
  const Alphabet& alphabet = path.start().alphabet();
  for (const auto& t : terms) {
    if (!t.letter) {
      for (std::uint64_t i = 0; i < t.power; ++i) expand(t.group, path);
      continue;
    }
    const auto letter = alphabet.find(t.letter);
    if (!letter) throw ParseError(std::string("letter '") + t.letter + "' is not in the alphabet", t.line, t.column);
    std::uint64_t left = t.power;
    while (left > 0) {
      const auto arrow = arrow_with_winner(path.end(), *letter);
      if (!arrow) {
        throw ParseError(std::string("'") + t.letter + "' is not a winner at " + path.end().to_string(), t.line,
                         t.column);
      }
      const std::uint64_t take = arrow->is_loop() ? left : 1;
      path.append(*arrow, take);
      left -= take;
    }
  }
}

}  // namespace

WinnerWord WinnerWord::parse(std::string_view text) { return WordParser(text).parse(); }

Integer WinnerWord::arrow_count() const { return count_terms(terms_); }

std::string WinnerWord::to_string() const {
  std::string out;
  print_terms(terms_, out);
  return out;
}

void WinnerWord::append(const WinnerWord& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

RauzyPath WinnerWord::realize(const PermutationPair& start) const {
  if (!is_admissible(start)) throw NotAdmissible("permutation is not admissible: " + start.to_string());
  RauzyPath path(start);
  expand(terms_, path);
  return path;
}

RauzyPath parse_winner_word(std::string_view text, const PermutationPair& start) {
  return WinnerWord::parse(text).realize(start);
}

LengthData realize_lengths(const RauzyPath& path, const std::optional<LengthData>& tail) {
  const std::size_t d = path.start().size();
  std::vector<Rational> t(d, Rational(1));
  if (tail) {
    if (tail->size() != d) throw std::invalid_argument("tail has the wrong dimension");
    t.assign(tail->values().begin(), tail->values().end());
  }
  const CocycleMatrix q = cocycle(path, 0, path.length());
  return LengthData(q.apply(t)).normalized();
}

// --------------------------------------------------------- example families

PermutationPair example_start() { return PermutationPair::parse("ABDC/DACB"); }

namespace {

WordTerm letter_term(char c, std::uint64_t power = 1) {
  WordTerm t;
  t.letter = c;
  t.power = power;
  return t;
}

WordTerm loop_group(std::uint64_t power) {
  WordTerm t;
  t.group = {letter_term('D', 2), letter_term('A', 3), letter_term('D')};
  t.power = power;
  return t;
}

void finish(ExampleSchedule& schedule) {
  schedule.path = schedule.word.realize(schedule.start);
}

}  // namespace

ExampleSchedule zorich_failure_schedule(unsigned k_max, const FibonacciOracle& fib) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (k_max > 5) throw std::overflow_error("block lengths past k = 5 exceed 64-bit run counts");
  ExampleSchedule out;
  out.family = Family::zorich_failure;
  out.k_max = k_max;
  out.start = example_start();
  out.boundaries = {0};
  out.formula_boundaries = {0};
  out.s = {0};
  std::vector<WordTerm> terms;
  for (unsigned k = 1; k <= k_max; ++k) {
    const std::uint64_t s = fib(1L << (k + 1)).get_ui();
    const std::uint64_t loops = (std::uint64_t{1} << k) + k;
    out.s.push_back(s);
    terms.push_back(letter_term('C', s));
    terms.push_back(letter_term('B'));
    terms.push_back(loop_group(loops));
    terms.push_back(letter_term('B'));
    out.boundaries.push_back(out.boundaries.back() + s + 1 + 6 * loops + 1);
    out.formula_boundaries.push_back(out.formula_boundaries.back() + s + 6 * (std::uint64_t{1} << k) + k + 2);
  }
  out.word = WinnerWord(std::move(terms));
  finish(out);
  return out;
}

ExampleSchedule uniform_failure_schedule(unsigned k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (k_max > 40) throw std::overflow_error("k_max too large");
  ExampleSchedule out;
  out.family = Family::uniform_failure;
  out.k_max = k_max;
  out.start = example_start();
  out.boundaries = {0};
  out.formula_boundaries = {0};
  std::vector<WordTerm> terms;
  for (unsigned k = 1; k <= k_max; ++k) {
    const std::uint64_t loops = std::uint64_t{1} << k;
    terms.push_back(letter_term('C'));
    terms.push_back(letter_term('B', 3));
    terms.push_back(loop_group(loops));
    terms.push_back(letter_term('B'));
    out.boundaries.push_back(out.boundaries.back() + 1 + 3 + 6 * loops + 1);
    out.formula_boundaries.push_back(5 * k + 12 * ((std::uint64_t{1} << k) - 1));
  }
  out.word = WinnerWord(std::move(terms));
  finish(out);
  return out;
}

namespace {

CocycleMatrix from_integer_rows(const std::vector<std::vector<Integer>>& rows) {
  CocycleMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

CocycleMatrix zorich_failure_closed_form(unsigned k, const FibonacciOracle& fib) {
  const long n = 1L << (k + 1);
  const Integer a = fib(n + 2 * k + 1);
  const Integer b = fib(n + 2 * k);
  const Integer c = fib(n + 2 * k + 2);
  const Integer s = fib(n);
  return from_integer_rows({{a, 0, 0, b}, {a - 1, 1, s, b}, {a - 1, 1, s + 1, b}, {c - 1, 1, s, a}});
}

CocycleMatrix uniform_failure_closed_form(unsigned k, const FibonacciOracle& fib) {
  const long n = 1L << (k + 1);
  const Integer f0 = fib(n), f1 = fib(n + 1), f2 = fib(n + 2);
  return from_integer_rows({{f1, f0, f0, f0},
                            {f1 - 1, f0 + 1, f0 + 1, f0},
                            {f1 - 1, f0 + 2, f0 + 3, f0},
                            {f2 - 1, f1 + 1, f1 + 1, f1}});
}

Integer uniform_failure_norm_formula(unsigned k, const FibonacciOracle& fib) {
  const long n = 1L << (k + 1);
  return 9 * fib(n) + 6 * fib(n + 1) + fib(n + 2) + 6;
}

CocycleMatrix uniform_failure_tail_closed_form(unsigned k, const FibonacciOracle& fib) {
  const long m = 1L << (k + 2);
  const Integer f0 = fib(m), f1 = fib(m + 1), f2 = fib(m + 2);
  return from_integer_rows({{f1, 0, 0, f0}, {f1 - 1, 1, 0, f0}, {f1 - 1, 1, 1, f0}, {f2 - 1, 1, 0, f1}});
}

CocycleMatrix uniform_failure_bridge() {
  return CocycleMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 2, 0}, {0, 1, 1, 1}});
}

BlockCheck verify_block_matrix(Family family, unsigned k, const FibonacciOracle& fib) {
  if (k < 1) throw std::invalid_argument("block index must be at least 1");
  BlockCheck out;
  if (family == Family::zorich_failure) {
    const auto schedule = zorich_failure_schedule(k);
    out.computed = cocycle(schedule.path, schedule.boundaries[k - 1], schedule.boundaries[k]);
    out.closed_form = zorich_failure_closed_form(k, fib);
  } else {
    const auto schedule = uniform_failure_schedule(k);
    out.computed = cocycle(schedule.path, schedule.boundaries[k - 1], schedule.boundaries[k]);
    out.closed_form = uniform_failure_closed_form(k, fib);
  }
  out.equal = out.computed == out.closed_form;
  return out;
}

ZFailure z_failure_witness(unsigned k, const FibonacciOracle& fib) {
  if (k < 1) throw std::invalid_argument("block index must be at least 1");
  const auto schedule = zorich_failure_schedule(k + 1);
  const std::uint64_t ell = schedule.boundaries[k];
  const std::uint64_t s_next = schedule.s[k + 1];
  ZFailure out;
  out.k = k;
  out.norm = cocycle(schedule.path, 0, ell).norm();
  out.bridge = cocycle(schedule.path, ell, ell + s_next);
  out.bridge_norm = out.bridge.norm();
  out.expected_bridge_norm = fib(1L << (k + 2)) + 4;
  CocycleMatrix shape(4);
  const Alphabet& ab = schedule.start.alphabet();
  shape(ab.index('B'), ab.index('C')) = Integer(static_cast<unsigned long>(s_next));
  out.bridge_shape = out.bridge == shape;
  out.ok = out.norm < out.bridge_norm * out.bridge_norm;
  return out;
}

namespace {

double ratio_for(const Integer& return_time, const Rational& lambda) {
  return log_of(return_time) / -log_of(lambda);
}

Rational barycenter_lambda_b(const RauzyPath& path, std::uint64_t m, Letter b) {
  const CocycleMatrix q0 = cocycle(path, 0, path.length());
  const CocycleMatrix qm = cocycle(path, m, path.length());
  Integer total = q0.norm();
  Integer column = 0;
  for (Letter beta = 0; beta < qm.size(); ++beta) column += qm(beta, b);
  return Rational(column, total);
}

}  // namespace

UFailure u_failure_ratio(unsigned k, unsigned horizon) {
  if (k < 1) throw std::invalid_argument("block index must be at least 1");
  if (horizon == 0) horizon = k + 2;
  if (horizon <= k + 1) throw std::invalid_argument("horizon must exceed k + 1");
  const auto schedule = uniform_failure_schedule(horizon + 1);
  const Alphabet& ab = schedule.start.alphabet();
  const Letter b = ab.index('B');
  const Letter c = ab.index('C');
  const std::uint64_t m = schedule.boundaries[k] + 3;
  const std::uint64_t h = schedule.boundaries[horizon];

  UFailure out;
  out.k = k;
  out.horizon = horizon;
  out.return_time = cocycle(schedule.path, 0, m).row_sum(c);

  // lambda_B(m) / lambda*(0) is a ratio of linear forms in the unknown positive
  // lambda(h), so its extremes sit at the coordinate vertices.
  const CocycleMatrix q0 = cocycle(schedule.path, 0, h);
  const CocycleMatrix qm = cocycle(schedule.path, m, h);
  for (Letter beta = 0; beta < q0.size(); ++beta) {
    const Rational v(qm(beta, b), q0.row_sum(beta));
    if (beta == 0 || v < out.lambda_low) out.lambda_low = v;
    if (beta == 0 || v > out.lambda_high) out.lambda_high = v;
  }
  out.ratio_low = ratio_for(out.return_time, out.lambda_low);
  out.ratio_high = ratio_for(out.return_time, out.lambda_high);
  out.ratio_at_horizon = ratio_for(out.return_time, barycenter_lambda_b(schedule.path.slice(0, h), m, b));
  out.ratio_at_next = ratio_for(
      out.return_time, barycenter_lambda_b(schedule.path.slice(0, schedule.boundaries[horizon + 1]), m, b));
  out.analytic = (1.0 + 5.0 * k * std::ldexp(1.0, -static_cast<int>(k) - 2) + std::ldexp(1.0, -static_cast<int>(k) - 1)) / 2.0;
  out.ok = out.ratio_high < 0.75;
  return out;
}

}  // namespace iet
