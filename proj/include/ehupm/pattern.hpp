#pragma once

#include "ehupm/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ehupm {

enum class PatternMode : std::uint8_t {
    Itemset,
    // Order-preserving subsequence, gaps allowed.
    Sequence,
    // Order-preserving run of adjacent positions.
    ContiguousSequence,
};

bool is_sequence(PatternMode mode) noexcept;

/// Itemset patterns are kept sorted and duplicate-free; sequence patterns keep
/// their order and may repeat items.
struct Pattern {
    std::vector<ItemId> items;
    PatternMode mode = PatternMode::Itemset;

    std::size_t size() const noexcept { return items.size(); }

    static Pattern itemset(std::vector<ItemId> items);
    static Pattern sequence(std::vector<ItemId> items, bool contiguous = false);

    friend bool operator==(const Pattern&, const Pattern&) = default;
    /// Canonical order: size first, then lexicographic item ids.
    friend bool operator<(const Pattern& a, const Pattern& b);
};

/// Indices into `tx.occurrences` of the occurrence chosen for each pattern
/// item, or nullopt when the transaction does not support the pattern.
/// Itemsets take each item's first occurrence; sequences take the leftmost
/// embedding.
std::optional<std::vector<std::size_t>> match_occurrences(const Transaction& tx, const Pattern& pattern);

bool supports(const Transaction& tx, const Pattern& pattern);

std::string to_string(const Dataset& dataset, const Pattern& pattern);

} // namespace ehupm
