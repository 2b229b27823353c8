#pragma once

#include "ehupm/dataset.hpp"
#include "ehupm/pattern.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ehupm {

struct SizeMask {
    std::size_t min = 1;
    std::size_t max = 1;
};

/// Once a pattern has at least `trigger` items, every required category must
/// be carried by at least one of them. Smaller patterns pass.
struct CoverageMask {
    std::vector<std::string> required;
    std::size_t trigger = 1;
};

struct MaskSpec;
using Conjunction = std::vector<MaskSpec>;

struct MaskSpec {
    std::variant<SizeMask, CoverageMask, Conjunction> mask;
};

/// Throws ValidationError for malformed parameters.
void validate(const MaskSpec& mask);

/// Throws ValidationError when a coverage mask meets a dataset without an
/// item category map.
bool check_mask(const Pattern& pattern, const Dataset& dataset, const MaskSpec& mask);

/// Tightest size upper bound implied by the mask, if any. This is the only
/// part of a mask the miner may prune on.
std::optional<std::size_t> size_upper_bound(const MaskSpec& mask);

} // namespace ehupm
