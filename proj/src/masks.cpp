#include "ehupm/masks.hpp"

#include "ehupm/error.hpp"

#include <algorithm>

namespace ehupm {

void validate(const MaskSpec& mask) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SizeMask>) {
                if (m.min < 1 || m.min > m.max) throw ValidationError("size mask needs 1 <= min <= max");
            } else if constexpr (std::is_same_v<M, CoverageMask>) {
                if (m.required.empty()) throw ValidationError("coverage mask needs at least one category");
            } else {
                for (const auto& part : m) validate(part);
            }
        },
        mask.mask);
}

bool check_mask(const Pattern& pattern, const Dataset& dataset, const MaskSpec& mask) {
    return std::visit(
        [&](const auto& m) -> bool {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SizeMask>) {
                return pattern.size() >= m.min && pattern.size() <= m.max;
            } else if constexpr (std::is_same_v<M, CoverageMask>) {
                if (!dataset.has_category_map())
                    throw ValidationError("coverage mask needs an item category map (itemCategory facts)");
                if (pattern.size() < m.trigger) return true;
                return std::all_of(m.required.begin(), m.required.end(), [&](const std::string& name) {
                    auto category = dataset.find_category(name);
                    if (!category) return false;
                    return std::any_of(pattern.items.begin(), pattern.items.end(), [&](ItemId item) {
                        auto cats = dataset.categories_of(item);
                        return std::binary_search(cats.begin(), cats.end(), *category);
                    });
                });
            } else {
                return std::all_of(m.begin(), m.end(),
                                   [&](const MaskSpec& part) { return check_mask(pattern, dataset, part); });
            }
        },
        mask.mask);
}

std::optional<std::size_t> size_upper_bound(const MaskSpec& mask) {
    return std::visit(
        [](const auto& m) -> std::optional<std::size_t> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SizeMask>) {
                return m.max;
            } else if constexpr (std::is_same_v<M, CoverageMask>) {
                return std::nullopt;
            } else {
                std::optional<std::size_t> bound;
                for (const auto& part : m)
                    if (auto b = size_upper_bound(part)) bound = bound ? std::min(*bound, *b) : *b;
                return bound;
            }
        },
        mask.mask);
}

} // namespace ehupm
