#pragma once

#include "ehupm/facts.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ehupm {

template <class Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr auto operator<=>(const Id&) const = default;
};

using ItemId = Id<struct ItemTag>;
using TransactionId = Id<struct TransactionTag>;
using ObjectId = Id<struct ObjectTag>;
using ContainerId = Id<struct ContainerTag>;
using CategoryId = Id<struct CategoryTag>;

/// The four layers that can carry facets, in occurrence-vector order.
enum class Level : std::uint8_t { Item = 0, Transaction = 1, Object = 2, Container = 3 };

std::string_view level_name(Level level) noexcept;

/// Facet counts per layer: l (item), m (transaction), n (object), o (container).
struct FacetDims {
    std::size_t item = 0;
    std::size_t transaction = 0;
    std::size_t object = 0;
    std::size_t container = 0;

    std::size_t of(Level level) const noexcept;
    /// First column of `level` inside an occurrence utility vector.
    std::size_t offset(Level level) const noexcept;
    std::size_t total() const noexcept { return item + transaction + object + container; }

    friend bool operator==(const FacetDims&, const FacetDims&) = default;
};

struct ItemOccurrence {
    ItemId item;
    std::uint32_t position = 1;
    double quantity = 1.0;
};

struct Transaction {
    std::string name;
    ObjectId object;
    // Sorted by position.
    std::vector<ItemOccurrence> occurrences;
    // Distinct items, ascending.
    std::vector<ItemId> items;
    std::vector<double> facets;

    bool contains(ItemId item) const;
};

struct ObjectRec {
    std::string name;
    ContainerId container;
    std::vector<double> facets;
};

struct ContainerRec {
    std::string name;
    std::vector<double> facets;
    // Synthesized for objects declared without a container (object/1).
    bool implicit = false;
};

/// An immutable, validated four-layer transaction database.
///
/// Identifiers are dense indices assigned in lexicographic order of the source
/// atom text, so comparing ids compares names and assembly does not depend on
/// fact order.
class Dataset {
public:
    std::size_t item_count() const noexcept { return item_names_.size(); }
    std::size_t transaction_count() const noexcept { return transactions_.size(); }
    std::size_t object_count() const noexcept { return objects_.size(); }
    std::size_t container_count() const noexcept { return containers_.size(); }
    std::size_t explicit_container_count() const noexcept;

    FacetDims dims() const noexcept { return dims_; }

    const std::string& item_name(ItemId id) const { return item_names_.at(id.value); }
    std::optional<ItemId> find_item(std::string_view name) const;
    std::optional<TransactionId> find_transaction(std::string_view name) const;

    const Transaction& transaction(TransactionId id) const { return transactions_.at(id.value); }
    const ObjectRec& object(ObjectId id) const { return objects_.at(id.value); }
    const ContainerRec& container(ContainerId id) const { return containers_.at(id.value); }
    const ObjectRec& object_of(TransactionId id) const { return object(transaction(id).object); }
    const ContainerRec& container_of(TransactionId id) const { return container(object_of(id).container); }

    std::span<const double> item_facets(ItemId id) const;
    /// Facets of `level` as seen from transaction `tid` (its own, its object's, its
    /// container's). Item level is not addressable this way.
    std::span<const double> enclosing_facets(Level level, TransactionId tid) const;

    /// Vertical representation: ascending ids of transactions containing `item`.
    std::span<const TransactionId> transactions_with(ItemId item) const { return tid_lists_.at(item.value); }

    bool has_category_map() const noexcept { return has_category_map_; }
    std::optional<CategoryId> find_category(std::string_view name) const;
    const std::string& category_name(CategoryId id) const { return category_names_.at(id.value); }
    std::span<const CategoryId> categories_of(ItemId item) const { return item_categories_.at(item.value); }

    /// Optional facet labels; empty string when none was given.
    const std::string& facet_label(Level level, std::size_t index) const;

    friend Dataset assemble_dataset(const FactSet& facts);

private:
    FacetDims dims_;
    std::vector<std::string> item_names_;
    std::vector<std::vector<double>> item_facets_;
    std::vector<Transaction> transactions_;
    std::vector<ObjectRec> objects_;
    std::vector<ContainerRec> containers_;
    std::vector<std::vector<TransactionId>> tid_lists_;
    std::unordered_map<std::string, ItemId> item_index_;
    std::unordered_map<std::string, TransactionId> transaction_index_;

    bool has_category_map_ = false;
    std::vector<std::string> category_names_;
    std::vector<std::vector<CategoryId>> item_categories_;

    std::array<std::vector<std::string>, 4> labels_;
};

/// Builds and validates a Dataset. Throws ValidationError on dangling
/// references, duplicate ids, arity mismatches and schema misuse.
Dataset assemble_dataset(const FactSet& facts);

/// (l, m, n, o)
std::array<std::size_t, 4> facet_dims(const Dataset& dataset);

} // namespace ehupm
