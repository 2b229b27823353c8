#include <doctest.h>

#include "ehupm/error.hpp"
#include "ehupm/masks.hpp"
#include "ehupm/spec_text.hpp"

using namespace ehupm;

namespace {
Dataset tagged() {
    return assemble_dataset(parse_facts(R"(
        container(c). object(o, c). transaction(t, o).
        item(good, t, 1, 1). item(paper, t, 2, 1). item(runs, t, 3, 1).
        itemCategory(good, adj). itemCategory(paper, noun). itemCategory(runs, verb). itemCategory(runs, noun).
    )"));
}
Pattern of(const Dataset& ds, std::initializer_list<const char*> names) {
    std::vector<ItemId> ids;
    for (auto n : names) ids.push_back(*ds.find_item(n));
    return Pattern::itemset(ids);
}
} // namespace

TEST_CASE("masks: size") {
    auto ds = tagged();
    MaskSpec m{SizeMask{2, 3}};
    CHECK_FALSE(check_mask(of(ds, {"good"}), ds, m));
    CHECK(check_mask(of(ds, {"good", "paper"}), ds, m));
    CHECK(check_mask(of(ds, {"good", "paper", "runs"}), ds, m));
    CHECK(size_upper_bound(m) == 3u);
    CHECK_THROWS_AS(validate(MaskSpec{SizeMask{3, 2}}), ValidationError);
    CHECK_THROWS_AS(validate(MaskSpec{SizeMask{0, 2}}), ValidationError);
}

TEST_CASE("masks: category coverage with trigger") {
    auto ds = tagged();
    MaskSpec m{CoverageMask{{"adj", "noun"}, 2}};
    CHECK(check_mask(of(ds, {"paper"}), ds, m));              // below trigger
    CHECK(check_mask(of(ds, {"good", "paper"}), ds, m));
    CHECK(check_mask(of(ds, {"good", "runs"}), ds, m));       // runs is also a noun
    CHECK_FALSE(check_mask(of(ds, {"paper", "runs"}), ds, m)); // no adjective
    MaskSpec unknown{CoverageMask{{"pron"}, 1}};
    CHECK_FALSE(check_mask(of(ds, {"good"}), ds, unknown));
    CHECK_FALSE(size_upper_bound(m).has_value());
    CHECK_THROWS_AS(validate(MaskSpec{CoverageMask{{}, 1}}), ValidationError);
}

TEST_CASE("masks: conjunction and missing category map") {
    auto ds = tagged();
    MaskSpec both{Conjunction{MaskSpec{SizeMask{1, 2}}, MaskSpec{CoverageMask{{"noun"}, 1}}, MaskSpec{SizeMask{1, 4}}}};
    CHECK(check_mask(of(ds, {"paper"}), ds, both));
    CHECK_FALSE(check_mask(of(ds, {"good"}), ds, both));
    CHECK_FALSE(check_mask(of(ds, {"good", "paper", "runs"}), ds, both));
    CHECK(size_upper_bound(both) == 2u);

    auto plain = assemble_dataset(parse_facts("container(c). object(o, c). transaction(t, o). item(a, t, 1, 1)."));
    CHECK_THROWS_AS(check_mask(Pattern::itemset({ItemId{0}}), plain, MaskSpec{CoverageMask{{"noun"}, 1}}),
                    ValidationError);
}

TEST_CASE("masks: text form") {
    auto m = parse_mask("cover:adj, noun@2");
    auto* c = std::get_if<CoverageMask>(&m.mask);
    REQUIRE(c);
    CHECK(c->required == std::vector<std::string>{"adj", "noun"});
    CHECK(c->trigger == 2);
    auto s = parse_mask("size:2..4");
    REQUIRE(std::get_if<SizeMask>(&s.mask));
    CHECK(std::get<SizeMask>(s.mask).max == 4);
    CHECK_THROWS_AS(parse_mask("shape:round"), ValidationError);
}
