#include "iet/core.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace iet {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::string labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw std::invalid_argument("alphabet needs at least two letters");
  std::string sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("alphabet labels must be distinct: '" + labels_ + "'");
  }
  for (char c : labels_) {
    if (c == '(' || c == ')' || c == '^' || c == '/' || std::isspace(static_cast<unsigned char>(c)) ||
        std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument(std::string("reserved character used as label: '") + c + "'");
    }
  }
}

std::optional<Letter> Alphabet::find(char label) const {
  const auto pos = labels_.find(label);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

Letter Alphabet::index(char label) const {
  if (auto l = find(label)) return *l;
  throw std::invalid_argument(std::string("unknown label '") + label + "'");
}

// --------------------------------------------------------- PermutationPair

PermutationPair::PermutationPair(Alphabet alphabet, std::string top, std::string bottom)
    : alphabet_(std::move(alphabet)), top_(std::move(top)), bottom_(std::move(bottom)) {
  auto check_row = [&](const std::string& row, const char* name) {
    if (row.size() != alphabet_.size()) {
      throw std::invalid_argument(std::string(name) + " row has wrong length: '" + row + "'");
    }
    std::string a = row, b = alphabet_.labels();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw std::invalid_argument(std::string(name) + " row is not a bijection: '" + row + "'");
  };
  check_row(top_, "top");
  check_row(bottom_, "bottom");
}

PermutationPair PermutationPair::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument("permutation must look like TOP/BOTTOM: '" + std::string(text) + "'");
  }
  std::string labels(text.substr(0, slash));
  std::sort(labels.begin(), labels.end());
  return parse(text, Alphabet(labels));
}

PermutationPair PermutationPair::parse(std::string_view text, const Alphabet& alphabet) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument("permutation must look like TOP/BOTTOM: '" + std::string(text) + "'");
  }
  return PermutationPair(alphabet, std::string(text.substr(0, slash)), std::string(text.substr(slash + 1)));
}

std::size_t PermutationPair::top_position(Letter letter) const {
  return top_.find(alphabet_.label(letter));
}

std::size_t PermutationPair::bottom_position(Letter letter) const {
  return bottom_.find(alphabet_.label(letter));
}

bool is_admissible(const PermutationPair& perm) {
  const std::size_t d = perm.size();
  std::string top_prefix, bottom_prefix;
  for (std::size_t k = 1; k < d; ++k) {
    top_prefix.push_back(perm.top_row()[k - 1]);
    bottom_prefix.push_back(perm.bottom_row()[k - 1]);
    std::string a = top_prefix, b = bottom_prefix;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return false;
  }
  return true;
}

// -------------------------------------------------------------- LengthData

LengthData::LengthData(std::vector<Rational> lengths) : lengths_(std::move(lengths)), total_(0) {
  if (lengths_.empty()) throw std::invalid_argument("length data is empty");
  for (auto& l : lengths_) {
    l.canonicalize();
    if (l <= 0) throw std::invalid_argument("lengths must be positive, got " + format_rational(l));
    total_ += l;
  }
}

LengthData LengthData::normalized() const {
  std::vector<Rational> out(lengths_);
  for (auto& l : out) l /= total_;
  return LengthData(std::move(out));
}

Rational LengthData::min() const { return *std::min_element(lengths_.begin(), lengths_.end()); }
Rational LengthData::max() const { return *std::max_element(lengths_.begin(), lengths_.end()); }

// ---------------------------------------------------------------- PointSet

PointSet::PointSet(std::vector<Rational> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

bool PointSet::contains(const Rational& x) const {
  return std::binary_search(points_.begin(), points_.end(), x);
}

Rational PointSet::min_gap(const Rational& total) const {
  Rational prev = 0;
  Rational best = total;
  for (const auto& p : points_) {
    if (p - prev < best) best = p - prev;
    prev = p;
  }
  if (total - prev < best) best = total - prev;
  return best;
}

// --------------------------------------------------------------------- Iem

Iem::Iem(PermutationPair perm, LengthData lengths) : perm_(std::move(perm)), lengths_(std::move(lengths)) {
  const std::size_t d = perm_.size();
  if (lengths_.size() != d) throw std::invalid_argument("length data and permutation sizes differ");
  left_.assign(d, Rational(0));
  image_left_.assign(d, Rational(0));
  Rational acc = 0;
  for (std::size_t pos = 0; pos < d; ++pos) {
    const Letter a = perm_.top_at(pos);
    top_order_.push_back(a);
    left_[a] = acc;
    acc += lengths_[a];
  }
  acc = 0;
  for (std::size_t pos = 0; pos < d; ++pos) {
    const Letter a = perm_.bottom_at(pos);
    bottom_order_.push_back(a);
    image_left_[a] = acc;
    acc += lengths_[a];
  }
}

void Iem::check_domain(const Rational& x) const {
  if (x < 0 || x >= total()) {
    throw DomainError("point " + format_rational(x) + " outside [0, " + format_rational(total()) + ")");
  }
}

Letter Iem::interval_of(const Rational& x) const {
  check_domain(x);
  for (std::size_t pos = top_order_.size(); pos-- > 0;) {
    const Letter a = top_order_[pos];
    if (x >= left_[a]) return a;
  }
  return top_order_.front();
}

Letter Iem::image_interval_of(const Rational& y) const {
  check_domain(y);
  for (std::size_t pos = bottom_order_.size(); pos-- > 0;) {
    const Letter a = bottom_order_[pos];
    if (y >= image_left_[a]) return a;
  }
  return bottom_order_.front();
}

Rational Iem::operator()(const Rational& x) const {
  const Letter a = interval_of(x);
  return x - left_[a] + image_left_[a];
}

Rational Iem::inverse(const Rational& y) const {
  const Letter a = image_interval_of(y);
  return y - image_left_[a] + left_[a];
}

Iem Iem::inverse_map() const {
  return Iem(PermutationPair(perm_.alphabet(), perm_.bottom_row(), perm_.top_row()), lengths_);
}

PointSet Iem::discontinuities() const {
  std::vector<Rational> pts;
  for (std::size_t pos = 1; pos < top_order_.size(); ++pos) pts.push_back(left_[top_order_[pos]]);
  return PointSet(std::move(pts));
}

Rational evaluate(const Iem& map, const Rational& x) { return map(x); }
Rational evaluate_inverse(const Iem& map, const Rational& y) { return map.inverse(y); }

DiscontinuityGrowth::DiscontinuityGrowth(const Iem& map) : map_(&map), min_gap_(map.total()) {
  const PointSet base = map.discontinuities();
  frontier_.assign(base.points().begin(), base.points().end());
  for (const auto& p : frontier_) insert(p);
}

void DiscontinuityGrowth::insert(const Rational& p) {
  auto [it, fresh] = chains_.insert(p);
  if (!fresh) return;
  grew_ = true;
  if (p == 0) return;
  // Gap bookkeeping over {0} u D u {lambda*}; 0 itself never counts as a discontinuity.
  auto next = std::next(it);
  const Rational right = next == chains_.end() ? map_->total() : *next;
  const Rational left = it == chains_.begin() ? Rational(0) : *std::prev(it);
  if (right - p < min_gap_) min_gap_ = right - p;
  if (p - left < min_gap_) min_gap_ = p - left;
  ++count_;
}

void DiscontinuityGrowth::advance() {
  if (closed_) {
    ++n_;
    return;
  }
  grew_ = false;
  for (auto& p : frontier_) {
    p = map_->inverse(p);
    insert(p);
  }
  // C_{n+1} = D(T) u T^{-1} C_n, so once a pullback adds nothing the set is stable.
  if (!grew_) closed_ = true;
  ++n_;
}

PointSet DiscontinuityGrowth::points() const {
  std::vector<Rational> out;
  out.reserve(chains_.size());
  for (const auto& p : chains_) {
    if (p != 0) out.push_back(p);
  }
  return PointSet(std::move(out));
}

PointSet discontinuities(const Iem& map, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("discontinuities: n must be >= 1");
  DiscontinuityGrowth growth(map);
  while (growth.n() < n && !growth.closed()) growth.advance();
  return growth.points();
}

Rational delta(const Iem& map, std::uint64_t n) { return discontinuities(map, n).min_gap(map.total()); }

std::optional<std::uint64_t> return_time(const Iem& map, const Rational& x, const Rational& r,
                                         std::uint64_t cap) {
  if (r <= 0) throw std::invalid_argument("return_time: radius must be positive");
  Rational y = map(x);
  for (std::uint64_t j = 1; j <= cap; ++j) {
    if (abs(y - x) < r) return j;
    y = map(y);
  }
  return std::nullopt;
}

std::optional<FirstReturn> first_return(const Iem& map, const Rational& x, const Rational& bound,
                                        std::uint64_t cap) {
  Rational y = x;
  for (std::uint64_t j = 1; j <= cap; ++j) {
    y = map(y);
    if (y < bound) return FirstReturn{y, j};
  }
  return std::nullopt;
}

std::optional<KeaneWitness> keane_witness(const Iem& map, std::uint64_t horizon) {
  const PointSet disc = map.discontinuities();
  const std::size_t d = map.size();
  std::vector<Rational> orbit(d);
  for (Letter a = 0; a < d; ++a) orbit[a] = map.left(a);
  for (std::uint64_t m = 1; m <= horizon; ++m) {
    for (Letter a = 0; a < d; ++a) {
      orbit[a] = map(orbit[a]);
      if (disc.contains(orbit[a])) {
        for (Letter b = 0; b < d; ++b) {
          if (map.left(b) == orbit[a]) return KeaneWitness{m, a, b};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace iet
