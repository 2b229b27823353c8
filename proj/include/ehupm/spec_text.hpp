#pragma once

// Textual forms of utility specs, item filters and masks used on the command
// line and through the C API.
//
//   column     := ("it" | "tx" | "obj" | "cont") "." index
//   condition  := column ("<" | "<=" | "=" | "==" | "!=" | ">=" | ">") number
//   utility    := "hfirst:" row [":" agg]
//               | "vfirst:" agg ":" row
//               | "vfirst:mixcoh(" column "," column [";" pol "," pol] ")"
//               | "mixed:pearson(" column "," column ")"
//               | "mixed:multicorr(" column {"," column} ";" column ")"
//   row        := "filter(" column ")" | agg "(" column {"," column} ")"
//               | "coherent(" column {"," column} [";" pol] ")"
//               | "disagree(" condition "," condition ")"
//   agg        := sum | times | max | min | avg | std | sstd | pct
//   pol        := pos | neg | either
//   filter     := "all" | "nonzero(" level ["." index] ")" | "disagree(" condition "," condition ")"
//   mask       := "size:" min ".." max | "cover:" category {"," category} ["@" trigger]
//
// hfirst defaults its column aggregate to pct for coherent/disagree rows.

#include "ehupm/masks.hpp"
#include "ehupm/miner.hpp"
#include "ehupm/utility.hpp"

#include <string_view>

namespace ehupm {

Column parse_column(std::string_view text);
Condition parse_condition(std::string_view text);
UtilitySpec parse_utility_spec(std::string_view text);
IntraAggregator parse_intra_aggregator(std::string_view text);
ItemFilter parse_item_filter(std::string_view text);
MaskSpec parse_mask(std::string_view text);

/// "a..b" or "a" (meaning a..a).
std::pair<std::size_t, std::size_t> parse_size_range(std::string_view text);

} // namespace ehupm
