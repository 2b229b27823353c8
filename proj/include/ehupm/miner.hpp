#pragma once

#include "ehupm/dataset.hpp"
#include "ehupm/masks.hpp"
#include "ehupm/pattern.hpp"
#include "ehupm/utility.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ehupm {

/// Pre-filter deciding which items may take part in candidate patterns.
struct ItemFilter {
    enum class Kind : std::uint8_t {
        All,
        // Item occurs in some transaction whose facet at `level` is nonzero
        // (a specific `index`, or any facet of that level).
        NonZero,
        // Item occurs in some transaction where both conditions hold.
        Disagreement,
        Custom,
    };

    Kind kind = Kind::All;
    Level level = Level::Transaction;
    std::optional<std::size_t> index;
    std::array<Condition, 2> conditions{};
    std::function<bool(const Dataset&, ItemId)> custom;

    static ItemFilter all() { return {}; }
    static ItemFilter nonzero(Level level, std::optional<std::size_t> index = std::nullopt);
    static ItemFilter disagreement(Condition a, Condition b);
    static ItemFilter predicate(std::function<bool(const Dataset&, ItemId)> fn);
};

/// Useful items in ascending order. With a universe, only those transactions
/// are looked at.
std::vector<ItemId> useful_items(const Dataset& dataset, const ItemFilter& filter,
                                 std::optional<std::span<const TransactionId>> universe = std::nullopt);

struct MiningConfig {
    // th_f
    std::size_t min_support = 1;
    // th_u; a pattern needs u(P) > min_utility.
    double min_utility = 0.0;
    std::size_t min_length = 1;
    std::size_t max_length = 1;
    PatternMode mode = PatternMode::Itemset;
    ItemFilter filter;
    // Without a utility spec only frequency, size and masks are checked.
    std::optional<UtilitySpec> utility;
    std::vector<MaskSpec> masks;
    // 0 picks the hardware concurrency.
    std::size_t threads = 1;
};

/// Throws ValidationError when the config cannot run against `dataset`.
void validate(const MiningConfig& config, const Dataset& dataset);

struct SupportSet {
    std::vector<TransactionId> transactions;
    std::size_t count() const noexcept { return transactions.size(); }
};

SupportSet support_set(const Dataset& dataset, const Pattern& pattern);

struct PatternRecord {
    Pattern pattern;
    std::vector<TransactionId> support;
    std::optional<double> utility;

    std::size_t support_count() const noexcept { return support.size(); }
};

struct MiningDiagnostics {
    // Frequent patterns that passed size and masks.
    std::size_t candidates = 0;
    // Candidates whose utility was undefined on their U_P.
    std::size_t undefined_utility = 0;
    std::size_t useful_items = 0;
};

struct MiningResult {
    std::vector<PatternRecord> patterns;
    MiningDiagnostics diagnostics;
};

/// Called once per frequent pattern that fits the size range and masks; the
/// first argument is the worker index in [0, threads).
using FrequentVisitor = std::function<void(std::size_t, const Pattern&, std::span<const TransactionId>)>;

/// Depth-first set (or suffix) extension over useful items with tid-list
/// intersection, pruning on support and on the size upper bound. Utility is
/// never used for pruning. Returns the number of workers used.
std::size_t for_each_frequent(const Dataset& dataset, const MiningConfig& config, const FrequentVisitor& visit,
                              std::optional<std::span<const TransactionId>> universe = std::nullopt);

/// All patterns meeting support, size, masks and utility, in canonical order.
MiningResult mine(const Dataset& dataset, const MiningConfig& config,
                  std::optional<std::span<const TransactionId>> universe = std::nullopt);

} // namespace ehupm
