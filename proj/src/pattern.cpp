#include "ehupm/pattern.hpp"

#include <algorithm>

namespace ehupm {

bool is_sequence(PatternMode mode) noexcept { return mode != PatternMode::Itemset; }

Pattern Pattern::itemset(std::vector<ItemId> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return {std::move(items), PatternMode::Itemset};
}

Pattern Pattern::sequence(std::vector<ItemId> items, bool contiguous) {
    return {std::move(items), contiguous ? PatternMode::ContiguousSequence : PatternMode::Sequence};
}

bool operator<(const Pattern& a, const Pattern& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
}

std::optional<std::vector<std::size_t>> match_occurrences(const Transaction& tx, const Pattern& pattern) {
    const auto& occ = tx.occurrences;
    std::vector<std::size_t> chosen;
    chosen.reserve(pattern.items.size());

    switch (pattern.mode) {
    case PatternMode::Itemset:
        for (ItemId item : pattern.items) {
            auto it = std::find_if(occ.begin(), occ.end(), [item](const ItemOccurrence& o) { return o.item == item; });
            if (it == occ.end()) return std::nullopt;
            chosen.push_back(static_cast<std::size_t>(it - occ.begin()));
        }
        return chosen;

    case PatternMode::Sequence: {
        std::size_t next = 0;
        for (ItemId item : pattern.items) {
            while (next < occ.size() && occ[next].item != item) ++next;
            if (next == occ.size()) return std::nullopt;
            chosen.push_back(next++);
        }
        return chosen;
    }

    case PatternMode::ContiguousSequence: {
        const std::size_t k = pattern.items.size();
        if (k > occ.size()) return std::nullopt;
        for (std::size_t start = 0; start + k <= occ.size(); ++start) {
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) ok = occ[start + j].item == pattern.items[j];
            if (!ok) continue;
            for (std::size_t j = 0; j < k; ++j) chosen.push_back(start + j);
            return chosen;
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

bool supports(const Transaction& tx, const Pattern& pattern) {
    if (pattern.mode == PatternMode::Itemset) {
        return std::all_of(pattern.items.begin(), pattern.items.end(), [&](ItemId i) { return tx.contains(i); });
    }
    return match_occurrences(tx, pattern).has_value();
}

std::string to_string(const Dataset& dataset, const Pattern& pattern) {
    std::string out = is_sequence(pattern.mode) ? "<" : "{";
    for (std::size_t i = 0; i < pattern.items.size(); ++i) {
        if (i) out += ", ";
        out += dataset.item_name(pattern.items[i]);
    }
    out += is_sequence(pattern.mode) ? ">" : "}";
    return out;
}

} // namespace ehupm
