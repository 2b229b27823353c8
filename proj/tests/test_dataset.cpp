#include <doctest.h>

#include "ehupm/dataset.hpp"
#include "ehupm/error.hpp"
#include "support/running_example.hpp"

#include <algorithm>
#include <string>

using namespace ehupm;

namespace {
Dataset load(const std::string& text) { return assemble_dataset(parse_facts(text)); }

void expect_invalid(const std::string& text, const std::string& fragment) {
    CAPTURE(text);
    try {
        load(text);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
}
} // namespace

TEST_CASE("dataset: running example shape") {
    auto ds = load(kRunningExample);
    CHECK(ds.container_count() == 2);
    CHECK(ds.explicit_container_count() == 2);
    CHECK(ds.object_count() == 3);
    CHECK(ds.transaction_count() == 4);
    CHECK(ds.item_count() == 9);
    CHECK(facet_dims(ds) == std::array<std::size_t, 4>{0, 8, 2, 1});
    CHECK(ds.dims().total() == 11);
    CHECK(ds.dims().offset(Level::Object) == 8);
    CHECK(ds.facet_label(Level::Transaction, 1) == "Clarity");
    CHECK(ds.facet_label(Level::Object, 0) == "Rating");
    CHECK(ds.facet_label(Level::Object, 1).empty());
    CHECK_FALSE(ds.has_category_map());
}

TEST_CASE("dataset: ids are dense and lexicographic") {
    auto ds = load(kRunningExample);
    std::vector<std::string> names;
    for (std::uint32_t i = 0; i < ds.item_count(); ++i) names.push_back(ds.item_name(ItemId{i}));
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(ds.find_item("concern")->value == 0);
    CHECK_FALSE(ds.find_item("nothing").has_value());
    for (std::uint32_t t = 0; t < ds.transaction_count(); ++t)
        CHECK(ds.transaction(TransactionId{t}).name == "s" + std::to_string(t + 1));
}

TEST_CASE("dataset: fact order does not matter") {
    auto a = parse_facts(kRunningExample);
    std::string reversed;
    std::string text = serialize_facts(a);
    std::vector<std::string> lines;
    for (std::size_t pos = 0, next; pos < text.size(); pos = next + 1) {
        next = text.find('\n', pos);
        lines.push_back(text.substr(pos, next - pos));
    }
    std::reverse(lines.begin(), lines.end());
    for (const auto& l : lines) reversed += l + "\n";
    auto x = assemble_dataset(a);
    auto y = load(reversed);
    REQUIRE(x.transaction_count() == y.transaction_count());
    for (std::uint32_t t = 0; t < x.transaction_count(); ++t) {
        const auto& tx = x.transaction(TransactionId{t});
        const auto& ty = y.transaction(TransactionId{t});
        CHECK(tx.items == ty.items);
        CHECK(tx.facets == ty.facets);
        CHECK(tx.occurrences.size() == ty.occurrences.size());
    }
}

TEST_CASE("dataset: occurrences, tid lists and enclosing facets") {
    auto ds = load(kRunningExample);
    auto paper = *ds.find_item("paper");
    auto repro = *ds.find_item("reproducibility");
    auto tids = ds.transactions_with(paper);
    CHECK(tids.size() == 4);
    auto rt = ds.transactions_with(repro);
    REQUIRE(rt.size() == 2);
    CHECK(rt[0].value == 1);
    CHECK(rt[1].value == 3);

    const auto& s1 = ds.transaction(TransactionId{0});
    REQUIRE(s1.occurrences.size() == 3);
    CHECK(s1.occurrences[0].item == paper);
    CHECK(s1.occurrences[0].quantity == 2.0);
    CHECK(ds.object_of(TransactionId{3}).name == "r3");
    auto obj = ds.enclosing_facets(Level::Object, TransactionId{3});
    CHECK(obj[0] == 9.0);
    auto cont = ds.enclosing_facets(Level::Container, TransactionId{3});
    CHECK(cont[0] == 1.0);
}

TEST_CASE("dataset: short item form and implicit containers") {
    auto ds = load("object(o1). transaction(t1, o1). transaction(t2, o1).\n"
                   "item(t1, b). item(t1, a). item(t2, a).\n"
                   "transactionUtilityVector(t1, 1). transactionUtilityVector(t2, -1).");
    CHECK(ds.container_count() == 1);
    CHECK(ds.explicit_container_count() == 0);
    const auto& t1 = ds.transaction(*ds.find_transaction("t1"));
    REQUIRE(t1.occurrences.size() == 2);
    CHECK(ds.item_name(t1.occurrences[0].item) == "b");
    CHECK(t1.occurrences[1].position == 2);
}

TEST_CASE("dataset: category map") {
    auto ds = load("container(c). object(o, c). transaction(t, o). item(a, t, 1, 1). item(b, t, 2, 1).\n"
                   "itemCategory(a, noun). itemCategory(a, adj). itemCategory(ghost, verb).");
    REQUIRE(ds.has_category_map());
    auto noun = ds.find_category("noun");
    REQUIRE(noun);
    auto cats = ds.categories_of(*ds.find_item("a"));
    CHECK(cats.size() == 2);
    CHECK(ds.categories_of(*ds.find_item("b")).empty());
}

TEST_CASE("dataset: validation errors") {
    const std::string base = "container(c). object(o, c). transaction(t, o). item(a, t, 1, 1).\n";
    expect_invalid("container(c). object(o, x). transaction(t, o).", "unknown container");
    expect_invalid("container(c). object(o, c). transaction(t, z).", "unknown object");
    expect_invalid(base + "item(b, zz, 1, 1).", "unknown transaction");
    expect_invalid(base + "transaction(t, o).", "duplicate transaction");
    expect_invalid(base + "container(c).", "duplicate container");
    expect_invalid(base + "object(o, c).", "duplicate object");
    expect_invalid("container(c). object(o, c).", "no transactions");
    expect_invalid(base + "item(t, b).", "cannot be mixed");
    expect_invalid(base + "item(b, t, 1, 1).", "two items at position 1");
    expect_invalid(base + "item(b, t, 0, 1).", "position");
    expect_invalid(base + "transaction(u, o). transactionUtilityVector(t, 1). transactionUtilityVector(u, 1, 2).",
                   "inconsistent vector arity");
    expect_invalid(base + "transaction(u, o). transactionUtilityVector(t, 1).", "'u' has no utility vector");
    expect_invalid(base + "itemUtilityVector(ghost, 1).", "unknown item");
    expect_invalid(base + "item(b, t, 2, 1). itemUtilityVector(a, 1).", "'b' has no itemUtilityVector");
    expect_invalid(base + "objectUtilityVector(o, x).", "must be a number");
    expect_invalid(base + "facetLabel(planet, 0, x).", "level");
    expect_invalid(base + "transactionUtilityVector(t, 1). facetLabel(transaction, 1, x).", "out of range");
    expect_invalid(base + "container(c, d).", "arity");
    expect_invalid("object(o). transaction(t, o). item(a, t, 1, 1). containerUtilityVector(zz, 1). container(zz).",
                   "objects without a container");
}
