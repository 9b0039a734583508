#pragma once

// JSON and CSV serialization: maps, traces and profiles. Big integers are
// base-10 strings and rationals are "num/den".

#include "iet/diagnostics.hpp"
#include "iet/induction.hpp"
#include "iet/three.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace iet {

using nlohmann::json;

/// {labels: [..], top: [..], bottom: [..], lengths: ["num/den", ..]}, with
/// lengths listed in label order.
json map_to_json(const Iem& map);
/// Throws std::invalid_argument on malformed input.
Iem map_from_json(const json& j);

/// Throws std::invalid_argument for an unreadable file or malformed JSON.
Iem read_map_file(const std::string& path);

json matrix_to_json(const CocycleMatrix& m);
json lengths_to_json(const LengthData& lengths);

/// One record per acceleration block:
/// {k, n (the block's starting time), end, winner, matrix}.
std::vector<json> trace_blocks(const InductionTrace& trace, Scheme scheme);
/// Newline-terminated JSON lines of `trace_blocks`.
std::string trace_json_lines(const InductionTrace& trace, Scheme scheme);

json to_json(const std::vector<ConditionProfileRow>& rows);
json to_json(const std::vector<DeltaProfileRow>& rows);
json to_json(const std::vector<ReturnProfileRow>& rows);
json to_json(const std::vector<BalanceRow>& rows);
json to_json(const std::vector<PositivityRow>& rows);

std::string to_csv(const std::vector<ConditionProfileRow>& rows);
std::string to_csv(const std::vector<DeltaProfileRow>& rows);
std::string to_csv(const std::vector<ReturnProfileRow>& rows);
std::string to_csv(const std::vector<BalanceRow>& rows);
std::string to_csv(const std::vector<PositivityRow>& rows);

/// Fixed 17-significant-digit rendering so artifacts are byte-stable.
std::string format_double(double value);

}  // namespace iet
