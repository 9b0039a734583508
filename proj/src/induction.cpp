#include "iet/induction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace iet {

namespace {

Arrow make_arrow(const PermutationPair& perm, ArrowKind kind) {
  const Letter top_last = perm.top_last();
  const Letter bottom_last = perm.bottom_last();
  Arrow arrow;
  arrow.source = perm;
  arrow.kind = kind;
  std::string top = perm.top_row();
  std::string bottom = perm.bottom_row();
  const char t = perm.alphabet().label(top_last);
  const char b = perm.alphabet().label(bottom_last);
  if (kind == ArrowKind::top) {
    arrow.winner = top_last;
    arrow.loser = bottom_last;
    bottom.pop_back();
    bottom.insert(bottom.find(t) + 1, 1, b);
  } else {
    arrow.winner = bottom_last;
    arrow.loser = top_last;
    top.pop_back();
    top.insert(top.find(b) + 1, 1, t);
  }
  arrow.target = PermutationPair(perm.alphabet(), std::move(top), std::move(bottom));
  return arrow;
}

void require_admissible(const PermutationPair& perm) {
  if (!is_admissible(perm)) throw NotAdmissible("permutation is not admissible: " + perm.to_string());
}

}  // namespace

Arrow rauzy_arrow(const PermutationPair& perm, ArrowKind kind) {
  require_admissible(perm);
  return make_arrow(perm, kind);
}

std::pair<Arrow, Arrow> rauzy_successors(const PermutationPair& perm) {
  require_admissible(perm);
  return {make_arrow(perm, ArrowKind::top), make_arrow(perm, ArrowKind::bottom)};
}

std::optional<Arrow> arrow_with_winner(const PermutationPair& perm, Letter winner) {
  if (perm.top_last() == winner) return rauzy_arrow(perm, ArrowKind::top);
  if (perm.bottom_last() == winner) return rauzy_arrow(perm, ArrowKind::bottom);
  return std::nullopt;
}

RauzyDiagram rauzy_class(const PermutationPair& perm) {
  require_admissible(perm);
  RauzyDiagram diagram;
  std::set<PermutationPair> seen{perm};
  std::deque<PermutationPair> queue{perm};
  while (!queue.empty()) {
    PermutationPair v = queue.front();
    queue.pop_front();
    diagram.vertices.push_back(v);
    for (ArrowKind kind : {ArrowKind::top, ArrowKind::bottom}) {
      Arrow a = make_arrow(v, kind);
      if (seen.insert(a.target).second) queue.push_back(a.target);
      diagram.arrows.push_back(std::move(a));
    }
  }
  return diagram;
}

// ----------------------------------------------------------- CocycleMatrix

CocycleMatrix::CocycleMatrix(std::size_t d) : d_(d), entries_(d * d, Integer(0)) {
  for (std::size_t i = 0; i < d; ++i) entries_[i * d + i] = 1;
}

CocycleMatrix CocycleMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  CocycleMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Integer CocycleMatrix::norm() const {
  Integer s = 0;
  for (const auto& e : entries_) s += abs(e);
  return s;
}

Integer CocycleMatrix::row_sum(Letter row) const {
  Integer s = 0;
  for (std::size_t j = 0; j < d_; ++j) s += (*this)(row, j);
  return s;
}

bool CocycleMatrix::positive() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Integer& e) { return e > 0; });
}

Integer CocycleMatrix::determinant() const {
  // Fraction-free Gaussian elimination.
  std::vector<Integer> a = entries_;
  const std::size_t n = d_;
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap * n + k] == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = v;
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

void CocycleMatrix::left_multiply_elementary(Letter loser, Letter winner, const Integer& s) {
  for (std::size_t j = 0; j < d_; ++j) (*this)(loser, j) += s * (*this)(winner, j);
}

std::vector<Rational> CocycleMatrix::apply(std::span<const Rational> row) const {
  if (row.size() != d_) throw std::invalid_argument("vector size does not match matrix");
  std::vector<Rational> out(d_, Rational(0));
  for (std::size_t i = 0; i < d_; ++i) {
    if (row[i] == 0) continue;
    for (std::size_t j = 0; j < d_; ++j) out[j] += row[i] * Rational((*this)(i, j));
  }
  return out;
}

CocycleMatrix operator*(const CocycleMatrix& a, const CocycleMatrix& b) {
  if (a.d_ != b.d_) throw std::invalid_argument("matrix sizes differ");
  CocycleMatrix c(a.d_);
  for (std::size_t i = 0; i < a.d_; ++i) {
    for (std::size_t j = 0; j < a.d_; ++j) {
      Integer s = 0;
      for (std::size_t k = 0; k < a.d_; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

std::string CocycleMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < d_; ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < d_; ++j) out << (j ? ", " : "") << (*this)(i, j).get_str();
    out << ']';
  }
  out << ']';
  return out.str();
}

CocycleMatrix arrow_matrix(const Arrow& arrow, const Integer& power) {
  CocycleMatrix m(arrow.source.size());
  m(arrow.loser, arrow.winner) += power;
  return m;
}

// --------------------------------------------------------------- RauzyPath

RauzyPath::RauzyPath(PermutationPair start) : start_(std::move(start)) {}

void RauzyPath::append(const Arrow& arrow, std::uint64_t count) {
  if (count == 0) return;
  if (arrow.source != end()) {
    throw std::invalid_argument("arrow from " + arrow.source.to_string() + " does not continue path ending at " +
                                end().to_string());
  }
  if (!runs_.empty() && runs_.back().arrow == arrow) {
    runs_.back().count += count;
  } else {
    runs_.push_back(ArrowRun{arrow, count});
    offsets_.push_back(length_);
  }
  length_ += count;
}

void RauzyPath::append(const RauzyPath& tail) {
  for (const auto& run : tail.runs_) append(run.arrow, run.count);
}

const PermutationPair& RauzyPath::end() const { return runs_.empty() ? start_ : runs_.back().arrow.target; }

std::size_t RauzyPath::run_index(std::uint64_t index) const {
  if (index >= length_) throw std::out_of_range("arrow index " + std::to_string(index) + " past path length");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

const Arrow& RauzyPath::arrow_at(std::uint64_t index) const { return runs_[run_index(index)].arrow; }

const PermutationPair& RauzyPath::vertex_at(std::uint64_t n) const {
  if (n > length_) throw std::out_of_range("vertex index " + std::to_string(n) + " past path length");
  if (n == 0) return start_;
  return arrow_at(n - 1).target;
}

RauzyPath RauzyPath::slice(std::uint64_t from, std::uint64_t to) const {
  if (from > to || to > length_) throw std::out_of_range("bad path slice");
  RauzyPath out(vertex_at(from));
  if (from == to) return out;
  for (std::size_t i = run_index(from); i < runs_.size() && offsets_[i] < to; ++i) {
    const std::uint64_t lo = std::max(offsets_[i], from);
    const std::uint64_t hi = std::min(offsets_[i] + runs_[i].count, to);
    out.append(runs_[i].arrow, hi - lo);
  }
  return out;
}

std::string RauzyPath::winner_word() const {
  std::string out;
  for (const auto& run : runs_) {
    if (!out.empty()) out += ' ';
    out += start_.alphabet().label(run.arrow.winner);
    if (run.count > 1) out += "^" + std::to_string(run.count);
  }
  return out;
}

CocycleMatrix cocycle(const RauzyPath& path, std::uint64_t m, std::uint64_t n) {
  if (m > n || n > path.length()) {
    throw std::out_of_range("cocycle(" + std::to_string(m) + ", " + std::to_string(n) + ") outside path of length " +
                            std::to_string(path.length()));
  }
  CocycleMatrix q(path.start().size());
  std::uint64_t pos = 0;
  for (const auto& run : path.runs()) {
    const std::uint64_t lo = std::max(pos, m);
    const std::uint64_t hi = std::min(pos + run.count, n);
    if (lo < hi) q.left_multiply_elementary(run.arrow.loser, run.arrow.winner, Integer(static_cast<unsigned long>(hi - lo)));
    pos += run.count;
    if (pos >= n) break;
  }
  return q;
}

// --------------------------------------------------------------- induction

std::pair<Iem, Arrow> rv_step(const Iem& map) {
  const PermutationPair& perm = map.perm();
  require_admissible(perm);
  const Letter t = perm.top_last();
  const Letter b = perm.bottom_last();
  const auto& lambda = map.lengths();
  if (lambda[t] == lambda[b]) {
    throw TieError("tie between " + std::string(1, map.alphabet().label(t)) + " and " +
                   std::string(1, map.alphabet().label(b)));
  }
  Arrow arrow = make_arrow(perm, lambda[t] > lambda[b] ? ArrowKind::top : ArrowKind::bottom);
  std::vector<Rational> next(lambda.values().begin(), lambda.values().end());
  next[arrow.winner] -= next[arrow.loser];
  return {Iem(arrow.target, LengthData(std::move(next))), arrow};
}

std::vector<std::uint64_t> zorich_times(const RauzyPath& path) {
  std::vector<std::uint64_t> out{0};
  std::uint64_t pos = 0;
  const auto& runs = path.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i > 0 && runs[i].arrow.winner != runs[i - 1].arrow.winner) out.push_back(pos);
    pos += runs[i].count;
  }
  return out;
}

std::vector<std::uint64_t> mmy_times(const RauzyPath& path) {
  std::vector<std::uint64_t> out{0};
  const std::size_t d = path.start().size();
  std::vector<bool> seen(d, false);
  std::size_t count = 0;
  std::uint64_t pos = 0;
  for (const auto& run : path.runs()) {
    if (!seen[run.arrow.winner]) {
      seen[run.arrow.winner] = true;
      if (++count == d) {
        out.push_back(pos);
        std::fill(seen.begin(), seen.end(), false);
        seen[run.arrow.winner] = true;
        count = 1;
      }
    }
    pos += run.count;
  }
  return out;
}

std::string to_string(Scheme scheme) { return scheme == Scheme::zorich ? "zorich" : "mmy"; }

InductionTrace::InductionTrace(Iem initial, RauzyPath path, StopReason reason,
                               std::vector<std::pair<std::uint64_t, LengthData>> snapshots)
    : initial_(std::move(initial)),
      path_(std::move(path)),
      reason_(reason),
      snapshots_(std::move(snapshots)),
      zorich_(iet::zorich_times(path_)),
      mmy_(iet::mmy_times(path_)) {
  if (snapshots_.empty() || snapshots_.front().first != 0) snapshots_.insert(snapshots_.begin(), {0, initial_.lengths()});
}

LengthData InductionTrace::lengths_at(std::uint64_t n) const {
  if (n > steps()) throw std::out_of_range("step " + std::to_string(n) + " past trace of " + std::to_string(steps()));
  auto it = std::upper_bound(snapshots_.begin(), snapshots_.end(), n,
                             [](std::uint64_t v, const auto& s) { return v < s.first; });
  --it;
  std::uint64_t pos = it->first;
  if (pos == n) return it->second;
  std::vector<Rational> lambda(it->second.values().begin(), it->second.values().end());
  for (std::size_t i = path_.run_index(pos); pos < n; ++i) {
    const ArrowRun& run = path_.runs()[i];
    const std::uint64_t stop = std::min(path_.run_offset(i) + run.count, n);
    lambda[run.arrow.winner] -= Rational(Integer(static_cast<unsigned long>(stop - pos))) * lambda[run.arrow.loser];
    pos = stop;
  }
  return LengthData(std::move(lambda));
}

CocycleMatrix InductionTrace::cocycle(std::uint64_t m, std::uint64_t n) const { return iet::cocycle(path_, m, n); }

const std::vector<std::uint64_t>& InductionTrace::times(Scheme scheme) const {
  return scheme == Scheme::zorich ? zorich_ : mmy_;
}

InductionTrace induce(const Iem& map, std::uint64_t max_steps) {
  require_admissible(map.perm());
  RauzyPath path(map.perm());
  std::vector<Rational> lambda(map.lengths().values().begin(), map.lengths().values().end());
  std::vector<std::pair<std::uint64_t, LengthData>> snapshots{{0, map.lengths()}};
  PermutationPair perm = map.perm();
  StopReason reason = StopReason::max_steps;
  std::optional<Letter> last_winner;
  while (path.length() < max_steps) {
    const Letter t = perm.top_last();
    const Letter b = perm.bottom_last();
    if (lambda[t] == lambda[b]) {
      reason = StopReason::tie;
      break;
    }
    Arrow arrow = make_arrow(perm, lambda[t] > lambda[b] ? ArrowKind::top : ArrowKind::bottom);
    const Letter w = arrow.winner;
    const Letter l = arrow.loser;
    if (last_winner && *last_winner != w) snapshots.emplace_back(path.length(), LengthData(lambda));
    std::uint64_t count = 1;
    if (arrow.is_loop()) {
      // The loop repeats while the winner is still longer than the loser.
      Rational ratio = lambda[w] / lambda[l];
      Integer c = ratio.get_num() / ratio.get_den();
      if (c * ratio.get_den() == ratio.get_num()) c -= 1;
      const Integer budget(static_cast<unsigned long>(max_steps - path.length()));
      if (c > budget) c = budget;
      count = c.get_ui();
    }
    lambda[w] -= Rational(Integer(static_cast<unsigned long>(count))) * lambda[l];
    path.append(arrow, count);
    perm = arrow.target;
    last_winner = w;
  }
  snapshots.emplace_back(path.length(), LengthData(lambda));
  if (snapshots.size() >= 2 && snapshots[snapshots.size() - 2].first == path.length()) snapshots.pop_back();
  return InductionTrace(map, std::move(path), reason, std::move(snapshots));
}

std::vector<std::uint64_t> zorich_times(const InductionTrace& trace) { return trace.zorich_times(); }
std::vector<std::uint64_t> mmy_times(const InductionTrace& trace) { return trace.mmy_times(); }

CocycleMatrix accelerated_cocycle(const InductionTrace& trace, Scheme scheme, std::size_t k, std::size_t l) {
  const auto& t = trace.times(scheme);
  if (k > l || l >= t.size()) {
    throw std::out_of_range(to_string(scheme) + " index (" + std::to_string(k) + ", " + std::to_string(l) +
                            ") outside " + std::to_string(t.size()) + " recorded times");
  }
  return trace.cocycle(t[k], t[l]);
}

std::vector<Ancestor> discontinuity_ancestry(const InductionTrace& trace, std::uint64_t n) {
  const Iem& map = trace.initial();
  const PointSet disc = map.discontinuities();
  const Iem sub = trace.iem_at(n);
  const CocycleMatrix q = trace.cocycle(0, n);
  std::map<Rational, Ancestor> found;
  for (std::size_t pos = 1; pos < sub.size(); ++pos) {
    const Letter a = sub.perm().top_at(pos);
    const Integer height = q.row_sum(a);
    Rational x = sub.left(a);
    for (Integer i = 0; i < height; ++i) {
      if (disc.contains(x) && !found.count(x)) found.emplace(x, Ancestor{x, a, i.get_ui()});
      if (found.size() == disc.size()) break;
      x = map(x);
    }
  }
  std::vector<Ancestor> out;
  for (const auto& p : disc.points()) {
    auto it = found.find(p);
    if (it == found.end()) throw std::logic_error("discontinuity " + format_rational(p) + " has no ancestor");
    out.push_back(it->second);
  }
  return out;
}

namespace {

// Towers base^i(I_alpha(sub)), 0 <= i < heights[alpha], level by level.
bool towers_tile(const Iem& base, const Iem& sub, const std::vector<Integer>& heights) {
  std::vector<std::pair<Rational, Rational>> pieces;
  for (Letter a = 0; a < sub.size(); ++a) {
    Rational lo = sub.left(a);
    Rational hi = lo + sub.lengths()[a];
    for (Integer i = 0; i < heights[a]; ++i) {
      pieces.emplace_back(lo, hi);
      const Letter b = base.interval_of(lo);
      if (hi > base.left(b) + base.lengths()[b]) return false;
      const Rational shift = base.image_left(b) - base.left(b);
      lo += shift;
      hi += shift;
    }
    if (lo != sub.image_left(a)) return false;
  }
  std::sort(pieces.begin(), pieces.end());
  Rational cursor = 0;
  for (const auto& [lo, hi] : pieces) {
    if (lo != cursor) return false;
    cursor = hi;
  }
  return cursor == base.total();
}

constexpr unsigned long kLiteralLevels = 1ul << 16;

}  // namespace

bool tiling_check(const InductionTrace& trace, std::uint64_t n) {
  const Iem& map = trace.initial();
  const Iem sub = trace.iem_at(n);
  const CocycleMatrix q = trace.cocycle(0, n);
  std::vector<Integer> heights;
  Integer levels = 0;
  Rational covered = 0;
  for (Letter a = 0; a < sub.size(); ++a) {
    heights.push_back(q.row_sum(a));
    levels += heights.back();
    covered += sub.lengths()[a] * Rational(heights.back());
  }
  if (covered != map.total()) return false;
  if (levels <= kLiteralLevels) return towers_tile(map, sub, heights);
  // Towers over T(n) are the composition of the one-step towers of T(m)
  // over T(m+1), each of height 1 or 2.
  Iem prev = map;
  for (std::uint64_t m = 0; m < n; ++m) {
    Iem next = rv_step(prev).first;
    std::vector<Integer> step(sub.size(), Integer(1));
    step[trace.arrow_at(m).loser] = 2;
    if (!towers_tile(prev, next, step)) return false;
    prev = std::move(next);
  }
  return true;
}

}  // namespace iet
