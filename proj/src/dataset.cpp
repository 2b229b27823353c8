#include "ehupm/dataset.hpp"

#include "ehupm/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ehupm {

std::string_view level_name(Level level) noexcept {
    switch (level) {
    case Level::Item: return "item";
    case Level::Transaction: return "transaction";
    case Level::Object: return "object";
    case Level::Container: return "container";
    }
    return "?";
}

std::size_t FacetDims::of(Level level) const noexcept {
    switch (level) {
    case Level::Item: return item;
    case Level::Transaction: return transaction;
    case Level::Object: return object;
    case Level::Container: return container;
    }
    return 0;
}

std::size_t FacetDims::offset(Level level) const noexcept {
    switch (level) {
    case Level::Item: return 0;
    case Level::Transaction: return item;
    case Level::Object: return item + transaction;
    case Level::Container: return item + transaction + object;
    }
    return 0;
}

bool Transaction::contains(ItemId item) const { return std::binary_search(items.begin(), items.end(), item); }

std::size_t Dataset::explicit_container_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(containers_.begin(), containers_.end(), [](const ContainerRec& c) { return !c.implicit; }));
}

std::optional<ItemId> Dataset::find_item(std::string_view name) const {
    auto it = item_index_.find(std::string(name));
    if (it == item_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<TransactionId> Dataset::find_transaction(std::string_view name) const {
    auto it = transaction_index_.find(std::string(name));
    if (it == transaction_index_.end()) return std::nullopt;
    return it->second;
}

std::span<const double> Dataset::item_facets(ItemId id) const { return item_facets_.at(id.value); }

std::span<const double> Dataset::enclosing_facets(Level level, TransactionId tid) const {
    switch (level) {
    case Level::Transaction: return transaction(tid).facets;
    case Level::Object: return object_of(tid).facets;
    case Level::Container: return container_of(tid).facets;
    case Level::Item: break;
    }
    throw ValidationError("item facets are not enclosing facets of a transaction");
}

std::optional<CategoryId> Dataset::find_category(std::string_view name) const {
    auto it = std::lower_bound(category_names_.begin(), category_names_.end(), name);
    if (it == category_names_.end() || *it != name) return std::nullopt;
    return CategoryId{static_cast<std::uint32_t>(it - category_names_.begin())};
}

const std::string& Dataset::facet_label(Level level, std::size_t index) const {
    return labels_.at(static_cast<std::size_t>(level)).at(index);
}

std::array<std::size_t, 4> facet_dims(const Dataset& dataset) {
    auto d = dataset.dims();
    return {d.item, d.transaction, d.object, d.container};
}

namespace {

std::string at(const Fact& fact) {
    return std::to_string(fact.where.line) + ":" + std::to_string(fact.where.column) + ": ";
}

[[noreturn]] void invalid(const Fact& fact, const std::string& what) { throw ValidationError(at(fact) + what); }

const std::string& id_text(const Fact& fact, std::size_t arg) {
    const Term& t = fact.args[arg];
    if (t.kind == Term::Kind::Decimal) invalid(fact, fact.predicate + ": argument " + std::to_string(arg + 1) + " must be an identifier");
    return t.text;
}

double number_arg(const Fact& fact, std::size_t arg) {
    const Term& t = fact.args[arg];
    if (!t.is_number()) invalid(fact, fact.predicate + ": argument " + std::to_string(arg + 1) + " must be a number");
    return t.number();
}

void require_arity(const Fact& fact, std::initializer_list<std::size_t> allowed) {
    if (std::find(allowed.begin(), allowed.end(), fact.arity()) == allowed.end())
        invalid(fact, "unexpected arity " + std::to_string(fact.arity()) + " for predicate '" + fact.predicate + "'");
}

template <class IdT>
std::unordered_map<std::string, IdT> index_sorted(std::vector<std::string>& names) {
    std::sort(names.begin(), names.end());
    std::unordered_map<std::string, IdT> index;
    index.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], IdT{static_cast<std::uint32_t>(i)});
    return index;
}

// Reads one *UtilityVector predicate into per-entity rows; returns the arity.
template <class IdT>
std::size_t read_vectors(const FactSet& facts, std::string_view predicate, std::string_view what,
                         const std::unordered_map<std::string, IdT>& index,
                         std::vector<std::vector<double>>& rows, std::vector<bool>& seen) {
    const auto& group = facts.facts(predicate);
    if (group.empty()) return 0;
    const std::size_t dim = group.front().arity() - 1;
    for (const auto& fact : group) {
        if (fact.arity() == 0) invalid(fact, std::string(predicate) + " needs an identifier");
        if (fact.arity() - 1 != dim)
            invalid(fact, std::string(predicate) + " has " + std::to_string(fact.arity() - 1) +
                              " facets, expected " + std::to_string(dim) + " (inconsistent vector arity)");
        const auto& name = id_text(fact, 0);
        auto it = index.find(name);
        if (it == index.end()) invalid(fact, std::string(predicate) + " refers to unknown " + std::string(what) + " '" + name + "'");
        auto id = it->second.value;
        if (seen[id]) invalid(fact, "duplicate " + std::string(predicate) + " for '" + name + "'");
        seen[id] = true;
        auto& row = rows[id];
        row.reserve(dim);
        for (std::size_t k = 1; k < fact.arity(); ++k) row.push_back(number_arg(fact, k));
    }
    return dim;
}

} // namespace

Dataset assemble_dataset(const FactSet& facts) {
    Dataset ds;

    // Containers.
    std::map<std::string, const Fact*> container_facts;
    for (const auto& fact : facts.facts("container")) {
        require_arity(fact, {1});
        if (!container_facts.emplace(id_text(fact, 0), &fact).second)
            invalid(fact, "duplicate container '" + fact.args[0].text + "'");
    }

    // Objects; object/1 hangs off a synthesized container.
    struct ObjectDecl {
        const Fact* fact;
        std::optional<std::string> container;
    };
    std::map<std::string, ObjectDecl> object_decls;
    bool implicit_container = false;
    for (const auto& fact : facts.facts("object")) {
        require_arity(fact, {1, 2});
        ObjectDecl decl{&fact, std::nullopt};
        if (fact.arity() == 2) {
            decl.container = id_text(fact, 1);
            if (!container_facts.count(*decl.container))
                invalid(fact, "object '" + fact.args[0].text + "' refers to unknown container '" + *decl.container + "'");
        } else {
            implicit_container = true;
        }
        if (!object_decls.emplace(id_text(fact, 0), decl).second)
            invalid(fact, "duplicate object '" + fact.args[0].text + "'");
    }

    std::map<std::string, const Fact*> transaction_facts;
    for (const auto& fact : facts.facts("transaction")) {
        require_arity(fact, {2});
        const auto& object = id_text(fact, 1);
        if (!object_decls.count(object))
            invalid(fact, "transaction '" + fact.args[0].text + "' refers to unknown object '" + object + "'");
        if (!transaction_facts.emplace(id_text(fact, 0), &fact).second)
            invalid(fact, "duplicate transaction '" + fact.args[0].text + "'");
    }
    if (transaction_facts.empty()) throw ValidationError("dataset has no transactions");

    // Item occurrences: item/4 (item, tid, position, q) or item/2 (tid, item), never both.
    const auto& item_group = facts.facts("item");
    std::optional<std::size_t> item_arity;
    std::set<std::string> item_name_set;
    for (const auto& fact : item_group) {
        require_arity(fact, {2, 4});
        if (item_arity && *item_arity != fact.arity())
            invalid(fact, "item/2 and item/4 facts cannot be mixed in one dataset");
        item_arity = fact.arity();
        const bool long_form = fact.arity() == 4;
        const auto& item = id_text(fact, long_form ? 0 : 1);
        const auto& tid = id_text(fact, long_form ? 1 : 0);
        if (!transaction_facts.count(tid)) invalid(fact, "item '" + item + "' refers to unknown transaction '" + tid + "'");
        item_name_set.insert(item);
    }

    // Dense ids in lexicographic order.
    std::vector<std::string> container_names;
    for (const auto& [name, f] : container_facts) container_names.push_back(name);
    const std::string implicit_name;
    if (implicit_container) container_names.push_back(implicit_name);
    auto container_index = index_sorted<ContainerId>(container_names);

    std::vector<std::string> object_names;
    for (const auto& [name, d] : object_decls) object_names.push_back(name);
    auto object_index = index_sorted<ObjectId>(object_names);

    std::vector<std::string> tx_names;
    for (const auto& [name, f] : transaction_facts) tx_names.push_back(name);
    ds.transaction_index_ = index_sorted<TransactionId>(tx_names);

    ds.item_names_.assign(item_name_set.begin(), item_name_set.end());
    ds.item_index_ = index_sorted<ItemId>(ds.item_names_);

    ds.containers_.resize(container_names.size());
    for (std::size_t i = 0; i < container_names.size(); ++i) {
        ds.containers_[i].name = container_names[i];
        ds.containers_[i].implicit = implicit_container && container_names[i] == implicit_name;
    }
    ds.objects_.resize(object_names.size());
    for (std::size_t i = 0; i < object_names.size(); ++i) {
        const auto& decl = object_decls.at(object_names[i]);
        ds.objects_[i].name = object_names[i];
        ds.objects_[i].container = container_index.at(decl.container.value_or(implicit_name));
    }
    ds.transactions_.resize(tx_names.size());
    for (std::size_t i = 0; i < tx_names.size(); ++i) {
        ds.transactions_[i].name = tx_names[i];
        ds.transactions_[i].object = object_index.at(transaction_facts.at(tx_names[i])->args[1].text);
    }

    // Facet vectors.
    auto load_level = [&](auto& records, std::string_view predicate, std::string_view what, const auto& index,
                          std::size_t& dim) {
        std::vector<std::vector<double>> rows(records.size());
        std::vector<bool> seen(records.size(), false);
        dim = read_vectors(facts, predicate, what, index, rows, seen);
        for (std::size_t i = 0; i < records.size(); ++i) records[i].facets = std::move(rows[i]);
        return seen;
    };
    std::vector<bool> seen_tx = load_level(ds.transactions_, "transactionUtilityVector", "transaction",
                                           ds.transaction_index_, ds.dims_.transaction);
    std::vector<bool> seen_obj = load_level(ds.objects_, "objectUtilityVector", "object", object_index, ds.dims_.object);
    std::vector<bool> seen_cont =
        load_level(ds.containers_, "containerUtilityVector", "container", container_index, ds.dims_.container);
    {
        std::vector<std::vector<double>> rows(ds.item_names_.size());
        std::vector<bool> seen(ds.item_names_.size(), false);
        ds.dims_.item = read_vectors(facts, "itemUtilityVector", "item", ds.item_index_, rows, seen);
        ds.item_facets_ = std::move(rows);
        if (ds.dims_.item > 0)
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (!seen[i]) throw ValidationError("item '" + ds.item_names_[i] + "' has no itemUtilityVector");
    }
    auto require_all = [](const auto& records, const std::vector<bool>& seen, std::size_t dim, std::string_view what) {
        if (dim == 0) return;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (seen[i]) continue;
            throw ValidationError(std::string(what) + " '" + records[i].name + "' has no utility vector (" +
                                  std::to_string(dim) + " facets expected)");
        }
    };
    require_all(ds.transactions_, seen_tx, ds.dims_.transaction, "transaction");
    require_all(ds.objects_, seen_obj, ds.dims_.object, "object");
    for (std::size_t i = 0; i < ds.containers_.size(); ++i)
        if (ds.dims_.container > 0 && !seen_cont[i])
            throw ValidationError(ds.containers_[i].implicit
                                      ? std::string("objects without a container cannot be used when containers carry facets")
                                      : "container '" + ds.containers_[i].name + "' has no utility vector");

    // Occurrences.
    std::vector<std::uint32_t> next_position(ds.transactions_.size(), 1);
    for (const auto& fact : item_group) {
        const bool long_form = fact.arity() == 4;
        ItemId item = ds.item_index_.at(fact.args[long_form ? 0 : 1].text);
        TransactionId tid = ds.transaction_index_.at(fact.args[long_form ? 1 : 0].text);
        ItemOccurrence occ{item, 1, 1.0};
        if (long_form) {
            auto pos = fact.args[2].integer();
            if (!pos || *pos < 1 || *pos > std::int64_t{UINT32_MAX})
                invalid(fact, "item position must be an integer >= 1");
            occ.position = static_cast<std::uint32_t>(*pos);
            occ.quantity = number_arg(fact, 3);
        } else {
            occ.position = next_position[tid.value]++;
        }
        ds.transactions_[tid.value].occurrences.push_back(occ);
    }
    for (auto& tx : ds.transactions_) {
        std::sort(tx.occurrences.begin(), tx.occurrences.end(),
                  [](const ItemOccurrence& a, const ItemOccurrence& b) { return a.position < b.position; });
        for (std::size_t i = 1; i < tx.occurrences.size(); ++i)
            if (tx.occurrences[i].position == tx.occurrences[i - 1].position)
                throw ValidationError("transaction '" + tx.name + "' has two items at position " +
                                      std::to_string(tx.occurrences[i].position));
        for (const auto& occ : tx.occurrences) tx.items.push_back(occ.item);
        std::sort(tx.items.begin(), tx.items.end());
        tx.items.erase(std::unique(tx.items.begin(), tx.items.end()), tx.items.end());
    }

    ds.tid_lists_.resize(ds.item_names_.size());
    for (std::uint32_t t = 0; t < ds.transactions_.size(); ++t)
        for (ItemId item : ds.transactions_[t].items) ds.tid_lists_[item.value].push_back(TransactionId{t});

    // Category map; entries for items outside the dataset are ignored.
    const auto& category_group = facts.facts("itemCategory");
    ds.has_category_map_ = !category_group.empty();
    std::set<std::string> category_set;
    for (const auto& fact : category_group) {
        require_arity(fact, {2});
        category_set.insert(id_text(fact, 1));
    }
    ds.category_names_.assign(category_set.begin(), category_set.end());
    ds.item_categories_.resize(ds.item_names_.size());
    for (const auto& fact : category_group) {
        auto item = ds.find_item(fact.args[0].text);
        if (!item) continue;
        auto& cats = ds.item_categories_[item->value];
        cats.push_back(*ds.find_category(fact.args[1].text));
    }
    for (auto& cats : ds.item_categories_) {
        std::sort(cats.begin(), cats.end());
        cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    }

    for (Level level : {Level::Item, Level::Transaction, Level::Object, Level::Container})
        ds.labels_[static_cast<std::size_t>(level)].assign(ds.dims_.of(level), std::string{});
    for (const auto& fact : facts.facts("facetLabel")) {
        require_arity(fact, {3});
        const auto& level_text = fact.args[0].text;
        std::optional<Level> level;
        for (Level l : {Level::Item, Level::Transaction, Level::Object, Level::Container})
            if (level_text == level_name(l)) level = l;
        if (!level) invalid(fact, "facetLabel level must be item, transaction, object or container");
        auto index = fact.args[1].integer();
        if (!index || *index < 0 || static_cast<std::size_t>(*index) >= ds.dims_.of(*level))
            invalid(fact, "facetLabel index out of range for level " + level_text);
        std::string label = fact.args[2].text;
        if (fact.args[2].kind == Term::Kind::String) label = label.substr(1, label.size() - 2);
        ds.labels_[static_cast<std::size_t>(*level)][static_cast<std::size_t>(*index)] = std::move(label);
    }

    return ds;
}

} // namespace ehupm
