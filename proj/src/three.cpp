#include "iet/three.hpp"

#include <algorithm>

namespace iet {

ContinuedFraction continued_fraction(const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("continued fraction needs 0 < alpha < 1");
  ContinuedFraction cf;
  cf.p = {0};
  cf.q = {1};
  Integer p_prev = 1, q_prev = 0;
  Integer num = alpha.get_num(), den = alpha.get_den();
  while (num != 0) {
    const Integer a = den / num;
    const Integer rest = den - a * num;
    den = num;
    num = rest;
    cf.a.push_back(a);
    const Integer p = a * cf.p.back() + p_prev;
    const Integer q = a * cf.q.back() + q_prev;
    p_prev = cf.p.back();
    q_prev = cf.q.back();
    cf.p.push_back(p);
    cf.q.push_back(q);
  }
  return cf;
}

namespace {

bool is_normalized_three(const Iem& map) {
  return map.size() == 3 && map.alphabet().labels() == "ABC" && map.perm().top_row() == "ABC" &&
         map.perm().bottom_row() == "CBA";
}

}  // namespace

InducingRotation inducing_rotation(const Iem& map) {
  if (!is_normalized_three(map)) {
    throw std::invalid_argument("expected a 3-interval exchange with data ABC/CBA, got " + map.perm().to_string());
  }
  const auto& l = map.lengths();
  InducingRotation rot;
  rot.base_length = map.total();
  rot.interval_length = map.total() + l[1];
  rot.angle = l[1] + l[2];
  rot.alpha = rot.angle / rot.interval_length;
  rot.cf = continued_fraction(rot.alpha);
  rot.map = Iem(PermutationPair(Alphabet("AC"), "AC", "CA"), LengthData({l[0] + l[1], l[1] + l[2]}));
  return rot;
}

bool RMatrix::operator==(const RMatrix& other) const {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (entries[i][j] != other.entries[i][j]) return false;
    }
  }
  return true;
}

RMatrix r_matrix(const CocycleMatrix& q) {
  RMatrix r;
  for (Letter i = 0; i < 3; ++i) {
    r.entries[i][0] = q(i, 0) + q(i, 1);
    r.entries[i][1] = q(i, 1) + q(i, 2);
  }
  return r;
}

std::uint64_t ProjectionResult::ell(std::uint64_t n) const {
  if (n == 0) return 0;
  const std::size_t i = source->run_index(n - 1);
  return ell_at_run[i] + (run_projects[i] ? n - source->run_offset(i) : 0);
}

ProjectionResult project_path(const InductionTrace& trace) {
  if (!is_normalized_three(trace.initial())) {
    throw std::invalid_argument("projection needs a trace starting at ABC/CBA");
  }
  ProjectionResult out;
  out.source = &trace.path();
  const PermutationPair bar_start(Alphabet("AC"), "AC", "CA");
  out.bar_path = RauzyPath(bar_start);
  const auto [bar_top, bar_bottom] = rauzy_successors(bar_start);
  std::uint64_t ell = 0;
  for (const auto& run : trace.path().runs()) {
    out.ell_at_run.push_back(ell);
    const char loser = trace.initial().alphabet().label(run.arrow.loser);
    // Rotation top arrow: winner C, loser A; bottom arrow: winner A, loser C.
    const bool projects = loser != 'B';
    out.run_projects.push_back(projects);
    if (projects) {
      out.bar_path.append(loser == 'A' ? bar_top : bar_bottom, run.count);
      ell += run.count;
    }
  }
  out.ell_at_run.push_back(ell);
  return out;
}

std::vector<Rational> projected_lengths(const PermutationPair& perm, const LengthData& lambda) {
  const std::string key = perm.to_string();
  if (key == "ABC/CBA") return {lambda[0] + lambda[1], lambda[1] + lambda[2]};
  if (key == "ACB/CBA") return {lambda[0], lambda[1] + lambda[2]};
  if (key == "ABC/CAB") return {lambda[0] + lambda[1], lambda[2]};
  throw std::invalid_argument("permutation " + key + " is outside the 3-interval Rauzy class");
}

bool check_projection_identity(const InductionTrace& trace, const ProjectionResult& projection, std::uint64_t n) {
  const RMatrix r = r_matrix(trace.cocycle(0, n));
  const CocycleMatrix bar = projection.bar_q(n);
  // Rotation letters: A is index 0, C is index 1; rows A and C of R are 0 and 2.
  const std::size_t rows[2] = {0, 2};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (bar(i, j) != r.entries[rows[i]][j]) return false;
    }
  }
  return true;
}

bool check_row_identity(const InductionTrace& trace, std::uint64_t n) {
  const RMatrix r = r_matrix(trace.cocycle(0, n));
  const std::string key = trace.perm_at(n).to_string();
  for (int j = 0; j < 2; ++j) {
    Integer rhs;
    if (key == "ABC/CBA") {
      rhs = r.entries[0][j] + r.entries[2][j];
    } else if (key == "ACB/CBA") {
      rhs = r.entries[2][j];
    } else if (key == "ABC/CAB") {
      rhs = r.entries[0][j];
    } else {
      return false;
    }
    if (r.entries[1][j] != rhs) return false;
  }
  return true;
}

NormSandwich norm_sandwich(const InductionTrace& trace, const ProjectionResult& projection, std::uint64_t n) {
  NormSandwich out;
  out.norm = trace.cocycle(0, n).norm();
  out.bar_norm = projection.bar_q(n).norm();
  out.ok = out.bar_norm <= 2 * out.norm && out.norm <= 2 * out.bar_norm;
  return out;
}

NormSandwich norm_sandwich(const InductionTrace& trace, std::uint64_t n) {
  return norm_sandwich(trace, project_path(trace), n);
}

std::vector<AlignmentRow> zorich_alignment(const InductionTrace& trace, std::size_t K) {
  const ProjectionResult projection = project_path(trace);
  const auto& nz = trace.zorich_times();
  const auto bar_nz = zorich_times(projection.bar_path);
  std::vector<AlignmentRow> rows;
  std::size_t j = 0;
  for (std::size_t k = 0; k < K && k + 1 < bar_nz.size(); ++k) {
    std::size_t next = j + 1;
    while (next < nz.size() && projection.ell(nz[next]) < bar_nz[k + 1]) ++next;
    if (next >= nz.size() || projection.ell(nz[next]) != bar_nz[k + 1]) break;
    AlignmentRow row;
    row.k = k;
    row.j = j;
    row.j_next = next;
    row.ok_step = next - j == 1 || next - j == 3;
    row.bar_norm = cocycle(projection.bar_path, bar_nz[k], bar_nz[k + 1]).norm();
    row.norm = trace.cocycle(nz[j], nz[next]).norm();
    row.ok_norms = row.bar_norm < row.norm && row.norm <= 2 * row.bar_norm;
    rows.push_back(std::move(row));
    j = next;
  }
  return rows;
}

// ------------------------------------------------------------ step functions

StepFunction::StepFunction(Rational length, std::vector<Rational> breaks, std::vector<Rational> values)
    : length_(std::move(length)), breaks_(std::move(breaks)), values_(std::move(values)) {
  if (length_ <= 0) throw std::invalid_argument("step function needs a positive length");
  if (breaks_.empty() || breaks_.size() != values_.size() || breaks_.front() != 0) {
    throw std::invalid_argument("step function needs breaks starting at 0, one value per piece");
  }
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (breaks_[i] <= breaks_[i - 1]) throw std::invalid_argument("step function breaks must increase");
  }
  if (breaks_.back() >= length_) throw std::invalid_argument("step function break past the length");
}

StepFunction StepFunction::indicator(const Rational& length, const Rational& lo, const Rational& hi) {
  if (!(0 <= lo && lo < hi && hi <= length)) throw std::invalid_argument("bad indicator interval");
  std::vector<Rational> breaks, values;
  if (lo > 0) {
    breaks.push_back(0);
    values.push_back(0);
  }
  breaks.push_back(lo);
  values.push_back(1);
  if (hi < length) {
    breaks.push_back(hi);
    values.push_back(0);
  }
  return StepFunction(length, std::move(breaks), std::move(values));
}

StepFunction StepFunction::constant(const Rational& length, const Rational& value) {
  return StepFunction(length, {Rational(0)}, {value});
}

Rational StepFunction::operator()(const Rational& x) const {
  if (x < 0 || x >= length_) throw DomainError("step function evaluated outside its interval");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

Rational StepFunction::mean() const {
  Rational sum = 0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    const Rational& right = i + 1 < breaks_.size() ? breaks_[i + 1] : length_;
    sum += values_[i] * (right - breaks_[i]);
  }
  return sum / length_;
}

Rational StepFunction::variation() const {
  Rational v = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const Rational& prev = values_[i == 0 ? values_.size() - 1 : i - 1];
    v += abs(values_[i] - prev);
  }
  return v;
}

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// sum_{i<n} floor((a i + b) / m), m > 0.
Integer floor_sum(Integer n, Integer m, Integer a, Integer b) {
  Integer ans = 0;
  if (n <= 0) return ans;
  if (a < 0 || a >= m) {
    const Integer qa = floor_div(a, m);
    ans += qa * (n * (n - 1) / 2);
    a -= qa * m;
  }
  if (b < 0 || b >= m) {
    const Integer qb = floor_div(b, m);
    ans += qb * n;
    b -= qb * m;
  }
  for (;;) {
    if (a >= m) {
      ans += (n * (n - 1) / 2) * (a / m);
      a %= m;
    }
    if (b >= m) {
      ans += n * (b / m);
      b %= m;
    }
    const Integer y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return ans;
}

// #{i < n : frac(u + i alpha) < c} for c in [0, 1].
Integer count_below(const Rational& u, const Rational& alpha, const Rational& c, const Integer& n) {
  if (c <= 0) return 0;
  if (c >= 1) return n;
  const Rational shifted = u - c;
  Integer m;
  mpz_lcm(m.get_mpz_t(), alpha.get_den().get_mpz_t(), u.get_den().get_mpz_t());
  mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), shifted.get_den().get_mpz_t());
  const Integer a = alpha.get_num() * (m / alpha.get_den());
  const Integer b1 = u.get_num() * (m / u.get_den());
  const Integer b2 = shifted.get_num() * (m / shifted.get_den());
  return floor_sum(n, m, a, b1) - floor_sum(n, m, a, b2);
}

}  // namespace

Rational birkhoff_sum(const InducingRotation& rot, const StepFunction& f, const Rational& x, const Integer& n) {
  if (f.length() != rot.interval_length) throw std::invalid_argument("step function lives on another interval");
  const Rational u = x / rot.interval_length;
  const auto& breaks = f.breaks();
  Rational sum = 0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const Rational lo = breaks[i] / rot.interval_length;
    const Rational hi = i + 1 < breaks.size() ? Rational(breaks[i + 1] / rot.interval_length) : Rational(1);
    const Integer hits = count_below(u, rot.alpha, hi, n) - count_below(u, rot.alpha, lo, n);
    sum += f.values()[i] * Rational(hits);
  }
  return sum;
}

DenjoyKoksma denjoy_koksma_check(const InducingRotation& rot, const StepFunction& f, const Rational& x, std::size_t k) {
  if (k >= rot.cf.q.size()) {
    throw std::out_of_range("q_" + std::to_string(k) + " past the end of the continued fraction");
  }
  DenjoyKoksma out;
  out.q = rot.cf.q[k];
  out.sum_error = abs(birkhoff_sum(rot, f, x, out.q) - Rational(out.q) * f.mean());
  out.variation = f.variation();
  out.ok = out.variation == 0 ? out.sum_error == 0 : out.sum_error < out.variation;
  return out;
}

ReturnComparison return_time_comparison(const Iem& map, const Rational& x, const Rational& r, std::uint64_t cap) {
  const InducingRotation rot = inducing_rotation(map);
  ReturnComparison out;
  out.tau = return_time(map, x, r, cap);
  out.bar_tau = return_time(rot.map, x, r, cap);
  if (out.tau && out.bar_tau) {
    const Rational scaled = Rational(Integer(static_cast<unsigned long>(*out.bar_tau))) * map.total() / rot.interval_length;
    out.gap = abs(Rational(Integer(static_cast<unsigned long>(*out.tau))) - scaled);
    out.ok = out.gap < 2;
  }
  return out;
}

bool induced_map_check(const Iem& map, const InducingRotation& rot, const Rational& x) {
  const auto back = first_return(rot.map, x, map.total(), 1u << 20);
  return back && back->point == map(x);
}

}  // namespace iet
