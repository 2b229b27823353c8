#include "ehupm/spec_text.hpp"

#include "ehupm/error.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace ehupm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
    throw ValidationError(std::string(what) + ": '" + std::string(text) + "'");
}

std::size_t parse_index(std::string_view text, std::string_view context) {
    text = trim(text);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) bad("expected a non-negative integer", context);
    return value;
}

double parse_number(std::string_view text, std::string_view context) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) bad("expected a number", context);
    return value;
}

std::optional<Level> parse_level(std::string_view text) {
    text = trim(text);
    if (text == "it" || text == "item") return Level::Item;
    if (text == "tx" || text == "transaction") return Level::Transaction;
    if (text == "obj" || text == "object") return Level::Object;
    if (text == "cont" || text == "container") return Level::Container;
    return std::nullopt;
}

std::optional<Aggregate> parse_aggregate(std::string_view text) {
    text = trim(text);
    if (text == "sum") return Aggregate::Sum;
    if (text == "times") return Aggregate::Times;
    if (text == "max") return Aggregate::Max;
    if (text == "min") return Aggregate::Min;
    if (text == "avg") return Aggregate::Avg;
    if (text == "std") return Aggregate::Std;
    if (text == "sstd") return Aggregate::SampleStd;
    if (text == "pct") return Aggregate::Percent;
    return std::nullopt;
}

Polarity parse_polarity(std::string_view text) {
    text = trim(text);
    if (text == "pos" || text == "positive") return Polarity::Positive;
    if (text == "neg" || text == "negative") return Polarity::Negative;
    if (text == "either") return Polarity::Either;
    bad("polarity must be pos, neg or either", text);
}

// Splits "name(args)" into name and args; nullopt when there are no parentheses.
std::optional<std::pair<std::string_view, std::string_view>> call(std::string_view text) {
    text = trim(text);
    auto open = text.find('(');
    if (open == std::string_view::npos) return std::nullopt;
    if (text.back() != ')') bad("missing ')'", text);
    return std::pair{trim(text.substr(0, open)), text.substr(open + 1, text.size() - open - 2)};
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<Column> parse_columns(std::string_view text) {
    std::vector<Column> out;
    if (trim(text).empty()) return out;
    for (auto part : split(text, ',')) out.push_back(parse_column(part));
    return out;
}

// Parses the argument list of a call, separated at the first ';'.
std::pair<std::string_view, std::optional<std::string_view>> args_and_tail(std::string_view args) {
    auto semi = args.find(';');
    if (semi == std::string_view::npos) return {args, std::nullopt};
    return {args.substr(0, semi), args.substr(semi + 1)};
}

std::array<Condition, 2> two_conditions(std::string_view args, std::string_view context) {
    auto parts = split(args, ',');
    if (parts.size() != 2) bad("expected two conditions", context);
    return {parse_condition(parts[0]), parse_condition(parts[1])};
}

RowFunction parse_row(std::string_view text) {
    auto c = call(text);
    if (!c) bad("expected a row function such as filter(obj.0)", text);
    auto [name, args] = *c;
    RowFunction row;
    if (name == "filter") {
        row.kind = RowFunction::Kind::Filter;
        row.columns = parse_columns(args);
        if (row.columns.size() != 1) bad("filter takes exactly one facet", text);
    } else if (name == "coherent") {
        row.kind = RowFunction::Kind::Coherent;
        auto [cols, tail] = args_and_tail(args);
        row.columns = parse_columns(cols);
        row.polarity = tail ? parse_polarity(*tail) : Polarity::Either;
        if (row.columns.empty()) bad("coherent needs at least one facet", text);
    } else if (name == "disagree") {
        row.kind = RowFunction::Kind::Disagree;
        row.conditions = two_conditions(args, text);
    } else if (auto agg = parse_aggregate(name)) {
        row.kind = RowFunction::Kind::Aggregate;
        row.aggregate = *agg;
        row.columns = parse_columns(args);
        if (row.columns.empty()) bad("row aggregate needs at least one facet", text);
    } else {
        bad("unknown row function", name);
    }
    return row;
}

} // namespace

Column parse_column(std::string_view text) {
    text = trim(text);
    auto dot = text.find('.');
    if (dot == std::string_view::npos) bad("facet must look like tx.2", text);
    auto level = parse_level(text.substr(0, dot));
    if (!level) bad("facet level must be it, tx, obj or cont", text);
    return {*level, parse_index(text.substr(dot + 1), text)};
}

Condition parse_condition(std::string_view text) {
    text = trim(text);
    static constexpr std::pair<std::string_view, Comparison> ops[] = {
        {"<=", Comparison::LessEqual}, {">=", Comparison::GreaterEqual}, {"!=", Comparison::NotEqual},
        {"==", Comparison::Equal},     {"<", Comparison::Less},          {">", Comparison::Greater},
        {"=", Comparison::Equal},
    };
    for (const auto& [symbol, op] : ops) {
        auto pos = text.find(symbol);
        if (pos == std::string_view::npos) continue;
        return {parse_column(text.substr(0, pos)), op, parse_number(text.substr(pos + symbol.size()), text)};
    }
    bad("condition must look like tx.2>0", text);
}

UtilitySpec parse_utility_spec(std::string_view text) {
    const std::string_view whole = trim(text);
    auto colon = whole.find(':');
    if (colon == std::string_view::npos) bad("utility must start with hfirst:, vfirst: or mixed:", whole);
    const auto cls = trim(whole.substr(0, colon));
    const auto body = trim(whole.substr(colon + 1));

    UtilitySpec spec;
    if (cls == "hfirst") {
        // The row part may itself contain ':' only inside parentheses, so split
        // at the last top-level colon.
        auto close = body.rfind(')');
        auto tail_colon = body.find(':', close == std::string_view::npos ? 0 : close);
        HorizontalFirst f;
        f.row = parse_row(body.substr(0, tail_colon));
        if (tail_colon != std::string_view::npos) {
            auto agg = parse_aggregate(body.substr(tail_colon + 1));
            if (!agg) bad("unknown column aggregate", body.substr(tail_colon + 1));
            f.column = *agg;
        } else if (f.row.kind == RowFunction::Kind::Coherent || f.row.kind == RowFunction::Kind::Disagree) {
            f.column = Aggregate::Percent;
        } else {
            bad("hfirst needs a column aggregate, e.g. hfirst:filter(obj.0):max", whole);
        }
        spec.function = f;
    } else if (cls == "vfirst") {
        if (auto c = call(body); c && c->first == "mixcoh") {
            auto [cols, tail] = args_and_tail(c->second);
            auto parsed = parse_columns(cols);
            if (parsed.size() != 2) bad("mixcoh takes two facets", whole);
            MixedCoherence f{parsed[0], parsed[1], Polarity::Positive, Polarity::Positive};
            if (tail) {
                auto pols = split(*tail, ',');
                if (pols.size() != 2) bad("mixcoh takes two polarities", whole);
                f.pa = parse_polarity(pols[0]);
                f.pb = parse_polarity(pols[1]);
            }
            spec.function = f;
        } else {
            auto sep = body.find(':');
            if (sep == std::string_view::npos) bad("vfirst needs agg:row, e.g. vfirst:max:sum(tx.0,tx.1)", whole);
            auto agg = parse_aggregate(body.substr(0, sep));
            if (!agg) bad("unknown column aggregate", body.substr(0, sep));
            VerticalFirst f;
            f.column = *agg;
            f.row = parse_row(body.substr(sep + 1));
            if (f.row.kind == RowFunction::Kind::Coherent || f.row.kind == RowFunction::Kind::Disagree)
                bad("coherent/disagree are horizontal-first row functions", whole);
            spec.function = f;
        }
    } else if (cls == "mixed") {
        auto c = call(body);
        if (!c) bad("mixed needs pearson(...) or multicorr(...)", whole);
        auto [name, args] = *c;
        if (name == "pearson") {
            auto cols = parse_columns(args);
            if (cols.size() != 2) bad("pearson takes two facets", whole);
            spec.function = PearsonCorrelation{cols[0], cols[1]};
        } else if (name == "multicorr") {
            auto [xs, y] = args_and_tail(args);
            if (!y) bad("multicorr needs 'x1, x2; y'", whole);
            auto predictors = parse_columns(xs);
            if (predictors.empty()) bad("multicorr needs predictor facets", whole);
            spec.function = MultipleCorrelation{predictors, parse_column(*y)};
        } else {
            bad("unknown mixed function", name);
        }
    } else {
        bad("utility class must be hfirst, vfirst or mixed", cls);
    }
    return spec;
}

IntraAggregator parse_intra_aggregator(std::string_view text) {
    text = trim(text);
    if (text == "sum") return IntraAggregator::Sum;
    if (text == "max") return IntraAggregator::Max;
    if (text == "min") return IntraAggregator::Min;
    if (text == "avg") return IntraAggregator::Avg;
    bad("intra-pattern aggregator must be sum, max, min or avg", text);
}

ItemFilter parse_item_filter(std::string_view text) {
    text = trim(text);
    if (text.empty() || text == "all") return ItemFilter::all();
    auto c = call(text);
    if (!c) bad("unknown item filter", text);
    auto [name, args] = *c;
    if (name == "nonzero") {
        args = trim(args);
        auto dot = args.find('.');
        auto level = parse_level(args.substr(0, dot));
        if (!level) bad("nonzero needs a level such as tx or tx.2", text);
        std::optional<std::size_t> index;
        if (dot != std::string_view::npos) index = parse_index(args.substr(dot + 1), text);
        return ItemFilter::nonzero(*level, index);
    }
    if (name == "disagree") {
        auto conds = two_conditions(args, text);
        return ItemFilter::disagreement(conds[0], conds[1]);
    }
    bad("unknown item filter", text);
}

MaskSpec parse_mask(std::string_view text) {
    text = trim(text);
    auto colon = text.find(':');
    if (colon == std::string_view::npos) bad("mask must be size:a..b or cover:c1,c2@k", text);
    auto kind = trim(text.substr(0, colon));
    auto body = trim(text.substr(colon + 1));
    if (kind == "size") {
        auto [lo, hi] = parse_size_range(body);
        MaskSpec m{SizeMask{lo, hi}};
        validate(m);
        return m;
    }
    if (kind == "cover") {
        CoverageMask cover;
        auto at = body.find('@');
        if (at != std::string_view::npos) cover.trigger = parse_index(body.substr(at + 1), text);
        for (auto name : split(body.substr(0, at), ','))
            if (!name.empty()) cover.required.emplace_back(name);
        MaskSpec m{cover};
        validate(m);
        return m;
    }
    bad("unknown mask kind", kind);
}

std::pair<std::size_t, std::size_t> parse_size_range(std::string_view text) {
    text = trim(text);
    auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        auto v = parse_index(text, text);
        return {v, v};
    }
    return {parse_index(text.substr(0, dots), text), parse_index(text.substr(dots + 2), text)};
}

} // namespace ehupm
