#include "ehupm/miner.hpp"

#include "ehupm/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace ehupm {

ItemFilter ItemFilter::nonzero(Level level, std::optional<std::size_t> index) {
    ItemFilter f;
    f.kind = Kind::NonZero;
    f.level = level;
    f.index = index;
    return f;
}

ItemFilter ItemFilter::disagreement(Condition a, Condition b) {
    ItemFilter f;
    f.kind = Kind::Disagreement;
    f.conditions = {a, b};
    return f;
}

ItemFilter ItemFilter::predicate(std::function<bool(const Dataset&, ItemId)> fn) {
    ItemFilter f;
    f.kind = Kind::Custom;
    f.custom = std::move(fn);
    return f;
}

namespace {

void check_facet(FacetDims dims, Level level, std::size_t index) {
    if (index >= dims.of(level))
        throw ValidationError("filter facet " + std::string(level_name(level)) + "." + std::to_string(index) +
                              " does not exist (" + std::to_string(dims.of(level)) + " facets at that level)");
}

void check_filter(const ItemFilter& filter, FacetDims dims) {
    switch (filter.kind) {
    case ItemFilter::Kind::All: break;
    case ItemFilter::Kind::NonZero:
        if (filter.index) check_facet(dims, filter.level, *filter.index);
        break;
    case ItemFilter::Kind::Disagreement:
        for (const auto& c : filter.conditions) check_facet(dims, c.column.level, c.column.index);
        break;
    case ItemFilter::Kind::Custom:
        if (!filter.custom) throw ValidationError("custom item filter has no predicate");
        break;
    }
}

double facet_seen_from(const Dataset& ds, ItemId item, TransactionId tid, Column c) {
    if (c.level == Level::Item) return ds.item_facets(item)[c.index];
    return ds.enclosing_facets(c.level, tid)[c.index];
}

bool any_nonzero(std::span<const double> values, std::optional<std::size_t> index) {
    if (index) return values[*index] != 0.0;
    return std::any_of(values.begin(), values.end(), [](double v) { return v != 0.0; });
}

// Sorted-range intersection.
std::vector<TransactionId> intersect(std::span<const TransactionId> a, std::span<const TransactionId> b) {
    std::vector<TransactionId> out;
    out.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool has_coverage_mask(const MaskSpec& mask) {
    return std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CoverageMask>) return true;
            else if constexpr (std::is_same_v<M, SizeMask>) return false;
            else return std::any_of(m.begin(), m.end(), [](const MaskSpec& p) { return has_coverage_mask(p); });
        },
        mask.mask);
}

class Enumerator {
public:
    Enumerator(const Dataset& ds, const MiningConfig& config, std::span<const TransactionId> universe,
               const FrequentVisitor& visit)
        : ds_(ds), config_(config), visit_(visit) {
        max_len_ = config.max_length;
        for (const auto& mask : config.masks)
            if (auto bound = size_upper_bound(mask)) max_len_ = std::min(max_len_, *bound);

        // Items whose own support is below th_f cannot be part of any frequent pattern.
        for (ItemId item : useful_items(ds, config.filter, universe)) {
            auto tids = intersect(ds.transactions_with(item), universe);
            if (tids.size() < config.min_support) continue;
            items_.push_back(item);
            tidlists_.push_back(std::move(tids));
        }
    }

    std::size_t branches() const noexcept { return items_.size(); }
    std::size_t useful() const noexcept { return items_.size(); }

    void run_branch(std::size_t worker, std::size_t root) {
        if (max_len_ == 0) return;
        Pattern pattern;
        pattern.mode = config_.mode;
        pattern.items.push_back(items_[root]);
        if (config_.mode == PatternMode::Itemset)
            grow_itemset(worker, pattern, tidlists_[root], root + 1);
        else
            grow_sequence(worker, pattern, tidlists_[root]);
    }

private:
    const Dataset& ds_;
    const MiningConfig& config_;
    const FrequentVisitor& visit_;
    std::size_t max_len_ = 0;
    std::vector<ItemId> items_;
    std::vector<std::vector<TransactionId>> tidlists_;

    void emit(std::size_t worker, const Pattern& pattern, std::span<const TransactionId> support) {
        if (pattern.size() < config_.min_length) return;
        for (const auto& mask : config_.masks)
            if (!check_mask(pattern, ds_, mask)) return;
        visit_(worker, pattern, support);
    }

    void grow_itemset(std::size_t worker, Pattern& pattern, const std::vector<TransactionId>& support,
                      std::size_t next) {
        emit(worker, pattern, support);
        if (pattern.size() >= max_len_) return;
        for (std::size_t j = next; j < items_.size(); ++j) {
            auto extended = intersect(support, tidlists_[j]);
            if (extended.size() < config_.min_support) continue;
            pattern.items.push_back(items_[j]);
            grow_itemset(worker, pattern, extended, j + 1);
            pattern.items.pop_back();
        }
    }

    void grow_sequence(std::size_t worker, Pattern& pattern, const std::vector<TransactionId>& support) {
        emit(worker, pattern, support);
        if (pattern.size() >= max_len_) return;
        for (std::size_t j = 0; j < items_.size(); ++j) {
            pattern.items.push_back(items_[j]);
            std::vector<TransactionId> extended;
            for (TransactionId tid : intersect(support, tidlists_[j]))
                if (supports(ds_.transaction(tid), pattern)) extended.push_back(tid);
            if (extended.size() >= config_.min_support) grow_sequence(worker, pattern, extended);
            pattern.items.pop_back();
        }
    }
};

std::vector<TransactionId> all_transactions(const Dataset& ds) {
    std::vector<TransactionId> out(ds.transaction_count());
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = TransactionId{i};
    return out;
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

} // namespace

std::vector<ItemId> useful_items(const Dataset& ds, const ItemFilter& filter,
                                 std::optional<std::span<const TransactionId>> universe) {
    check_filter(filter, ds.dims());
    std::vector<ItemId> out;
    for (std::uint32_t i = 0; i < ds.item_count(); ++i) {
        const ItemId item{i};
        std::vector<TransactionId> restricted;
        std::span<const TransactionId> tids = ds.transactions_with(item);
        if (universe) {
            restricted = intersect(tids, *universe);
            tids = restricted;
        }
        if (tids.empty()) continue;

        bool keep = false;
        switch (filter.kind) {
        case ItemFilter::Kind::All: keep = true; break;
        case ItemFilter::Kind::NonZero:
            if (filter.level == Level::Item) {
                keep = any_nonzero(ds.item_facets(item), filter.index);
            } else {
                keep = std::any_of(tids.begin(), tids.end(), [&](TransactionId t) {
                    return any_nonzero(ds.enclosing_facets(filter.level, t), filter.index);
                });
            }
            break;
        case ItemFilter::Kind::Disagreement: {
            const auto& [a, b] = filter.conditions;
            keep = std::any_of(tids.begin(), tids.end(), [&](TransactionId t) {
                return a.holds(facet_seen_from(ds, item, t, a.column)) && b.holds(facet_seen_from(ds, item, t, b.column));
            });
            break;
        }
        case ItemFilter::Kind::Custom: keep = filter.custom(ds, item); break;
        }
        if (keep) out.push_back(item);
    }
    return out;
}

void validate(const MiningConfig& config, const Dataset& dataset) {
    if (config.min_support < 1) throw ValidationError("occurrence threshold must be >= 1");
    if (config.min_length < 1 || config.min_length > config.max_length)
        throw ValidationError("pattern size range needs 1 <= min <= max");
    check_filter(config.filter, dataset.dims());
    if (config.utility) validate(*config.utility, dataset.dims());
    for (const auto& mask : config.masks) {
        validate(mask);
        if (has_coverage_mask(mask) && !dataset.has_category_map())
            throw ValidationError("coverage mask needs an item category map (itemCategory facts)");
    }
}

SupportSet support_set(const Dataset& dataset, const Pattern& pattern) {
    SupportSet out;
    if (pattern.items.empty()) return out;
    for (std::uint32_t t = 0; t < dataset.transaction_count(); ++t)
        if (supports(dataset.transaction(TransactionId{t}), pattern)) out.transactions.push_back(TransactionId{t});
    return out;
}

std::size_t for_each_frequent(const Dataset& dataset, const MiningConfig& config, const FrequentVisitor& visit,
                              std::optional<std::span<const TransactionId>> universe) {
    validate(config, dataset);
    std::vector<TransactionId> everything;
    if (!universe) {
        everything = all_transactions(dataset);
        universe = everything;
    }
    Enumerator enumerator(dataset, config, *universe, visit);

    const std::size_t workers = std::min(resolve_threads(config.threads), std::max<std::size_t>(1, enumerator.branches()));
    if (workers == 1) {
        for (std::size_t b = 0; b < enumerator.branches(); ++b) enumerator.run_branch(0, b);
        return 1;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = next++; b < enumerator.branches(); b = next++) enumerator.run_branch(w, b);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = enumerator.branches();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return workers;
}

MiningResult mine(const Dataset& dataset, const MiningConfig& config,
                  std::optional<std::span<const TransactionId>> universe) {
    const std::size_t slots = resolve_threads(config.threads);
    std::vector<std::vector<PatternRecord>> found(slots);
    std::vector<MiningDiagnostics> diag(slots);

    auto visit = [&](std::size_t worker, const Pattern& pattern, std::span<const TransactionId> support) {
        auto& d = diag[worker];
        ++d.candidates;
        PatternRecord record{pattern, {support.begin(), support.end()}, std::nullopt};
        if (config.utility) {
            auto matrix = pattern_utility_matrix(dataset, pattern, support, config.utility->intra);
            record.utility = evaluate(matrix, *config.utility);
            if (!record.utility) {
                ++d.undefined_utility;
                return;
            }
            if (!(*record.utility > config.min_utility)) return;
        }
        found[worker].push_back(std::move(record));
    };
    for_each_frequent(dataset, config, visit, universe);

    MiningResult result;
    for (std::size_t w = 0; w < slots; ++w) {
        result.diagnostics.candidates += diag[w].candidates;
        result.diagnostics.undefined_utility += diag[w].undefined_utility;
        for (auto& r : found[w]) result.patterns.push_back(std::move(r));
    }
    result.diagnostics.useful_items = useful_items(dataset, config.filter, universe).size();
    std::sort(result.patterns.begin(), result.patterns.end(),
              [](const PatternRecord& a, const PatternRecord& b) { return a.pattern < b.pattern; });
    return result;
}

} // namespace ehupm
