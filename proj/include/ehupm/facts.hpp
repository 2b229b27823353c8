#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ehupm {

/// One argument of a ground fact. `text` is the exact source spelling
/// (quoted strings keep their quotes and escapes), which is what makes
/// serialization lossless.
struct Term {
    enum class Kind { Name, String, Integer, Decimal };

    Kind kind = Kind::Name;
    std::string text;

    bool is_number() const noexcept { return kind == Kind::Integer || kind == Kind::Decimal; }
    bool is_symbol() const noexcept { return kind == Kind::Name || kind == Kind::String; }
    double number() const;
    std::optional<std::int64_t> integer() const;

    friend bool operator==(const Term&, const Term&) = default;
};

struct SourceLocation {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Fact {
    std::string predicate;
    std::vector<Term> args;
    SourceLocation where;

    std::size_t arity() const noexcept { return args.size(); }
};

/// Facts grouped by predicate, source order kept inside each group.
class FactSet {
public:
    void add(Fact fact);
    void merge(FactSet other);

    /// Renames predicates in place. Facts of a renamed predicate are appended
    /// after any facts already carrying the new name.
    void rename(const std::map<std::string, std::string>& renames);

    const std::vector<Fact>& facts(std::string_view predicate) const;
    const std::map<std::string, std::vector<Fact>, std::less<>>& groups() const noexcept { return groups_; }
    std::size_t size() const noexcept;

    /// Location-insensitive comparison.
    bool same_facts(const FactSet& other) const;

private:
    std::map<std::string, std::vector<Fact>, std::less<>> groups_;
};

/// Parses `pred(t1, ..., tk).` facts separated by whitespace and `%` comments.
/// Throws ParseError with the 1-based position of the first problem.
FactSet parse_facts(std::string_view text);

FactSet parse_fact_file(const std::string& path);

/// Inverse of parse_facts, one fact per line grouped by predicate.
std::string serialize_facts(const FactSet& facts);

struct PredicateSchema {
    std::string name;
    // Fixed arity, or the minimum arity when `variadic` is set (id + facets).
    std::size_t arity;
    bool variadic;
    std::string_view fields;
};

/// The predicates understood by dataset assembly.
const std::vector<PredicateSchema>& expected_schema();

} // namespace ehupm
