#include "iet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace iet {

namespace {

const std::vector<std::uint64_t>& require_times(const InductionTrace& trace, Scheme scheme, std::size_t needed) {
  const auto& t = trace.times(scheme);
  if (t.size() < needed) {
    throw InsufficientDepth(to_string(scheme) + " profile needs " + std::to_string(needed) + " acceleration times, trace has " +
                            std::to_string(t.size()));
  }
  return t;
}

}  // namespace

std::vector<ConditionProfileRow> condition_profile(const InductionTrace& trace, Scheme scheme, std::size_t K) {
  const auto& t = require_times(trace, scheme, K + 2);
  std::vector<ConditionProfileRow> rows;
  for (std::size_t k = 1; k <= K; ++k) {
    ConditionProfileRow row;
    row.k = k;
    row.norm_k = trace.cocycle(0, t[k]).norm();
    row.norm_step = trace.cocycle(t[k], t[k + 1]).norm();
    row.epsilon = log_of(row.norm_step) / log_of(row.norm_k);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DeltaProfileRow> delta_profile(const Iem& map, std::uint64_t N, DeltaSchedule schedule) {
  if (N < 2) throw std::invalid_argument("delta profile needs N >= 2");
  std::vector<DeltaProfileRow> rows;
  DiscontinuityGrowth growth(map);
  std::uint64_t next = 1;
  for (;;) {
    const std::uint64_t n = growth.n();
    if (n == next) {
      DeltaProfileRow row;
      row.n = n;
      row.delta = growth.min_gap();
      if (n >= 2) row.exponent = -log_of(row.delta) / std::log(static_cast<double>(n));
      row.closed = growth.closed();
      rows.push_back(std::move(row));
      if (growth.closed() || n == N) break;
      next = schedule == DeltaSchedule::all ? n + 1 : std::min(2 * n, N);
    }
    growth.advance();
  }
  return rows;
}

SampleSpec SampleSpec::explicit_points(std::vector<Rational> pts) {
  SampleSpec s;
  s.kind = Kind::points;
  s.points = std::move(pts);
  return s;
}

SampleSpec SampleSpec::lattice(std::uint64_t p) {
  SampleSpec s;
  s.kind = Kind::lattice;
  s.modulus = p;
  return s;
}

SampleSpec SampleSpec::random(std::size_t count, std::uint64_t seed) {
  SampleSpec s;
  s.kind = Kind::random;
  s.count = count;
  s.seed = seed;
  return s;
}

std::vector<Rational> sample_points(const Iem& map, const SampleSpec& spec) {
  std::vector<Rational> out;
  switch (spec.kind) {
    case SampleSpec::Kind::points:
      for (const auto& x : spec.points) {
        if (x < 0 || x >= map.total()) throw DomainError("sample " + format_rational(x) + " outside the interval");
        out.push_back(x);
      }
      break;
    case SampleSpec::Kind::lattice:
      if (spec.modulus < 2) throw std::invalid_argument("lattice modulus must be at least 2");
      for (std::uint64_t i = 1; i < spec.modulus; ++i) {
        out.push_back(map.total() * Rational(Integer(static_cast<unsigned long>(i)),
                                             Integer(static_cast<unsigned long>(spec.modulus))));
      }
      break;
    case SampleSpec::Kind::random: {
      std::mt19937_64 rng(spec.seed);
      const std::uint64_t den = (std::uint64_t{1} << 40) + 15;
      std::uniform_int_distribution<std::uint64_t> pick(1, den - 1);
      for (std::size_t i = 0; i < spec.count; ++i) {
        Rational u(Integer(static_cast<unsigned long>(pick(rng))), Integer(static_cast<unsigned long>(den)));
        u.canonicalize();
        out.push_back(map.total() * u);
      }
      break;
    }
  }
  return out;
}

double return_ratio(std::uint64_t tau, const Rational& r) {
  if (tau == 1) return 0.0;
  return std::log(static_cast<double>(tau)) / -log_of(r);
}

std::vector<ReturnProfileRow> return_profile(const Iem& map, const std::vector<Rational>& radii,
                                             const SampleSpec& samples, std::uint64_t cap) {
  const auto points = sample_points(map, samples);
  std::vector<ReturnProfileRow> rows;
  for (const auto& r : radii) {
    ReturnProfileRow row;
    row.r = r;
    double sum = 0;
    std::size_t done = 0;
    for (const auto& x : points) {
      ReturnSample s{x, return_time(map, x, r, cap)};
      if (!s.tau) {
        ++row.capped;
      } else {
        const double ratio = return_ratio(*s.tau, r);
        row.min_ratio = row.min_ratio ? std::min(*row.min_ratio, ratio) : ratio;
        row.max_ratio = row.max_ratio ? std::max(*row.max_ratio, ratio) : ratio;
        sum += ratio;
        ++done;
      }
      row.samples.push_back(std::move(s));
    }
    if (done) row.mean_ratio = sum / static_cast<double>(done);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BalanceRow> balance_profile(const InductionTrace& trace, std::size_t K) {
  const auto& t = require_times(trace, Scheme::mmy, K + 1);
  const Rational total = trace.initial().total();
  std::vector<BalanceRow> rows;
  for (std::size_t k = 0; k <= K; ++k) {
    const LengthData lambda = trace.lengths_at(t[k]);
    BalanceRow row;
    row.k = k;
    row.ratio = lambda.max() / lambda.min();
    row.norm = trace.cocycle(0, t[k]).norm();
    row.sandwich = Rational(1, row.norm) <= lambda.max() / total;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t positivity_bound(std::size_t d) { return std::max<std::size_t>(2 * d - 3, 2); }

std::vector<PositivityRow> positivity_depth(const InductionTrace& trace, std::size_t K) {
  const auto& t = require_times(trace, Scheme::mmy, K + 1);
  std::vector<PositivityRow> rows;
  for (std::size_t k = 0; k < K; ++k) {
    PositivityRow row;
    row.k = k;
    CocycleMatrix a(trace.initial().size());
    for (std::size_t r = 1; k + r < t.size(); ++r) {
      a = trace.cocycle(t[k + r - 1], t[k + r]) * a;
      if (a.positive()) {
        row.depth = r;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace iet
