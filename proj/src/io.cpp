#include "iet/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace iet {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string row_string(const json& row, const char* key) {
  if (!row.contains(key) || !row[key].is_array()) throw std::invalid_argument(std::string("map JSON needs an array '") + key + "'");
  std::string out;
  for (const auto& item : row[key]) {
    if (!item.is_string() || item.get<std::string>().size() != 1) {
      throw std::invalid_argument(std::string("entries of '") + key + "' must be one-character labels");
    }
    out += item.get<std::string>();
  }
  return out;
}

json optional_double(const std::optional<double>& v) { return v ? json(format_double(*v)) : json(nullptr); }

}  // namespace

json map_to_json(const Iem& map) {
  json j;
  j["labels"] = json::array();
  j["top"] = json::array();
  j["bottom"] = json::array();
  j["lengths"] = json::array();
  for (char c : map.alphabet().labels()) j["labels"].push_back(std::string(1, c));
  for (char c : map.perm().top_row()) j["top"].push_back(std::string(1, c));
  for (char c : map.perm().bottom_row()) j["bottom"].push_back(std::string(1, c));
  for (const auto& l : map.lengths().values()) j["lengths"].push_back(format_rational(l));
  return j;
}

Iem map_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("map JSON must be an object");
  Alphabet alphabet(row_string(j, "labels"));
  PermutationPair perm(alphabet, row_string(j, "top"), row_string(j, "bottom"));
  if (!j.contains("lengths") || !j["lengths"].is_array()) throw std::invalid_argument("map JSON needs an array 'lengths'");
  std::vector<Rational> lengths;
  for (const auto& item : j["lengths"]) {
    if (!item.is_string()) throw std::invalid_argument("lengths must be \"num/den\" strings");
    lengths.push_back(parse_rational(item.get<std::string>()));
  }
  return Iem(std::move(perm), LengthData(std::move(lengths)));
}

Iem read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return map_from_json(j);
}

json matrix_to_json(const CocycleMatrix& m) {
  json rows = json::array();
  for (Letter i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (Letter k = 0; k < m.size(); ++k) row.push_back(format_integer(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json lengths_to_json(const LengthData& lengths) {
  json out = json::array();
  for (const auto& l : lengths.values()) out.push_back(format_rational(l));
  return out;
}

std::vector<json> trace_blocks(const InductionTrace& trace, Scheme scheme) {
  const auto& t = trace.times(scheme);
  std::vector<json> out;
  const Alphabet& ab = trace.initial().alphabet();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const std::uint64_t end = k + 1 < t.size() ? t[k + 1] : trace.steps();
    if (end == t[k]) continue;
    json rec;
    rec["k"] = k;
    rec["n"] = t[k];
    rec["end"] = end;
    rec["complete"] = k + 1 < t.size();
    std::string winners;
    if (scheme == Scheme::zorich) {
      winners = std::string(1, ab.label(trace.arrow_at(t[k]).winner));
    } else {
      std::vector<bool> seen(ab.size(), false);
      for (std::size_t i = trace.path().run_index(t[k]); i < trace.path().runs().size(); ++i) {
        if (trace.path().run_offset(i) >= end) break;
        const Letter w = trace.path().runs()[i].arrow.winner;
        if (!seen[w]) winners += ab.label(w);
        seen[w] = true;
      }
    }
    rec["winner"] = winners;
    rec["matrix"] = matrix_to_json(trace.cocycle(t[k], end));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string trace_json_lines(const InductionTrace& trace, Scheme scheme) {
  std::string out;
  for (const auto& rec : trace_blocks(trace, scheme)) out += rec.dump() + "\n";
  return out;
}

json to_json(const std::vector<ConditionProfileRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"k", r.k},
                   {"norm_k", format_integer(r.norm_k)},
                   {"norm_step", format_integer(r.norm_step)},
                   {"epsilon", format_double(r.epsilon)}});
  }
  return out;
}

json to_json(const std::vector<DeltaProfileRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"delta", format_rational(r.delta)},
                   {"exponent", optional_double(r.exponent)},
                   {"closed", r.closed}});
  }
  return out;
}

json to_json(const std::vector<ReturnProfileRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json samples = json::array();
    for (const auto& s : r.samples) {
      samples.push_back({{"x", format_rational(s.x)}, {"tau", s.tau ? json(*s.tau) : json(nullptr)}});
    }
    out.push_back({{"r", format_rational(r.r)},
                   {"capped", r.capped},
                   {"min_ratio", optional_double(r.min_ratio)},
                   {"mean_ratio", optional_double(r.mean_ratio)},
                   {"max_ratio", optional_double(r.max_ratio)},
                   {"samples", samples}});
  }
  return out;
}

json to_json(const std::vector<BalanceRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"k", r.k},
                   {"ratio", format_rational(r.ratio)},
                   {"norm", format_integer(r.norm)},
                   {"sandwich", r.sandwich}});
  }
  return out;
}

json to_json(const std::vector<PositivityRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"k", r.k}, {"depth", r.depth ? json(*r.depth) : json(nullptr)}});
  return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

std::string to_csv(const std::vector<ConditionProfileRow>& rows) {
  std::ostringstream out;
  out << "k,norm_k,norm_step,epsilon\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_integer(r.norm_k) << ',' << format_integer(r.norm_step) << ','
        << format_double(r.epsilon) << '\n';
  }
  return out.str();
}

std::string to_csv(const std::vector<DeltaProfileRow>& rows) {
  std::ostringstream out;
  out << "n,delta,exponent,closed\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_rational(r.delta) << ',' << opt(r.exponent) << ',' << (r.closed ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string to_csv(const std::vector<ReturnProfileRow>& rows) {
  std::ostringstream out;
  out << "r,samples,capped,min_ratio,mean_ratio,max_ratio\n";
  for (const auto& r : rows) {
    out << format_rational(r.r) << ',' << r.samples.size() << ',' << r.capped << ',' << opt(r.min_ratio) << ','
        << opt(r.mean_ratio) << ',' << opt(r.max_ratio) << '\n';
  }
  return out.str();
}

std::string to_csv(const std::vector<BalanceRow>& rows) {
  std::ostringstream out;
  out << "k,ratio,norm,sandwich\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_rational(r.ratio) << ',' << format_integer(r.norm) << ',' << (r.sandwich ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string to_csv(const std::vector<PositivityRow>& rows) {
  std::ostringstream out;
  out << "k,depth\n";
  for (const auto& r : rows) out << r.k << ',' << (r.depth ? std::to_string(*r.depth) : "") << '\n';
  return out.str();
}

}  // namespace iet
