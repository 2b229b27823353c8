#include "ehupm/facts.hpp"

#include "ehupm/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ehupm {

double Term::number() const {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("term '" + text + "' is not a number");
    return value;
}

std::optional<std::int64_t> Term::integer() const {
    if (kind != Kind::Integer) return std::nullopt;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

void FactSet::add(Fact fact) {
    auto it = groups_.find(fact.predicate);
    if (it == groups_.end()) it = groups_.emplace(fact.predicate, std::vector<Fact>{}).first;
    it->second.push_back(std::move(fact));
}

void FactSet::merge(FactSet other) {
    for (auto& [name, group] : other.groups_)
        for (auto& fact : group) add(std::move(fact));
}

void FactSet::rename(const std::map<std::string, std::string>& renames) {
    for (const auto& [from, to] : renames) {
        if (from == to) continue;
        auto it = groups_.find(from);
        if (it == groups_.end()) continue;
        auto moved = std::move(it->second);
        groups_.erase(it);
        for (auto& fact : moved) {
            fact.predicate = to;
            add(std::move(fact));
        }
    }
}

const std::vector<Fact>& FactSet::facts(std::string_view predicate) const {
    static const std::vector<Fact> empty;
    auto it = groups_.find(predicate);
    return it == groups_.end() ? empty : it->second;
}

std::size_t FactSet::size() const noexcept {
    std::size_t n = 0;
    for (const auto& [name, group] : groups_) n += group.size();
    return n;
}

bool FactSet::same_facts(const FactSet& other) const {
    if (groups_.size() != other.groups_.size()) return false;
    for (auto a = groups_.begin(), b = other.groups_.begin(); a != groups_.end(); ++a, ++b) {
        if (a->first != b->first || a->second.size() != b->second.size()) return false;
        for (std::size_t i = 0; i < a->second.size(); ++i)
            if (a->second[i].args != b->second[i].args) return false;
    }
    return true;
}

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_name_char(char c) { return is_lower(c) || is_upper(c) || is_digit(c) || c == '_'; }

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    FactSet run() {
        FactSet out;
        for (;;) {
            skip_layout();
            if (at_end()) break;
            out.add(fact());
        }
        return out;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

    void skip_layout() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '%') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string name() {
        std::size_t start = pos_;
        while (!at_end() && is_name_char(peek())) advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    Fact fact() {
        Fact f;
        f.where = {line_, column_};
        char c = peek();
        if (is_upper(c) || c == '_') fail("variables are not allowed; expected a predicate name");
        if (!is_lower(c)) fail(std::string("expected a predicate name, found '") + c + "'");
        f.predicate = name();

        skip_layout();
        if (peek() == '(') {
            advance();
            for (;;) {
                skip_layout();
                f.args.push_back(term());
                skip_layout();
                if (at_end()) fail("unterminated term list, expected ')'");
                if (peek() == ',') {
                    advance();
                    continue;
                }
                if (peek() == ')') {
                    advance();
                    break;
                }
                fail(std::string("expected ',' or ')', found '") + peek() + "'");
            }
            skip_layout();
        }
        if (peek() == ':' && peek(1) == '-') fail("rules are not allowed, only facts");
        if (peek() != '.') fail("missing '.' after fact");
        advance();
        return f;
    }

    Term term() {
        if (at_end()) fail("unterminated term list, expected a term");
        char c = peek();
        if (is_lower(c)) return {Term::Kind::Name, name()};
        if (c == '"') return quoted();
        if (c == '-' || is_digit(c)) return number();
        if (is_upper(c) || c == '_') fail("variables are not allowed in facts");
        fail(std::string("expected a term, found '") + c + "'");
    }

    Term quoted() {
        std::size_t start = pos_;
        advance();
        for (;;) {
            if (at_end() || peek() == '\n') fail("unterminated quoted string");
            char c = peek();
            if (c == '\\') {
                advance();
                if (at_end() || peek() == '\n') fail("unterminated quoted string");
                advance();
                continue;
            }
            advance();
            if (c == '"') break;
        }
        return {Term::Kind::String, std::string(text_.substr(start, pos_ - start))};
    }

    Term number() {
        std::size_t start = pos_;
        if (peek() == '-') advance();
        if (!is_digit(peek())) fail("bad number: expected digits");
        while (is_digit(peek())) advance();
        Term::Kind kind = Term::Kind::Integer;
        if (peek() == '.') {
            if (!is_digit(peek(1))) fail("bad number: expected digits after '.'");
            advance();
            while (is_digit(peek())) advance();
            kind = Term::Kind::Decimal;
        }
        if (is_name_char(peek()) || peek() == '.') fail("bad number");
        return {kind, std::string(text_.substr(start, pos_ - start))};
    }
};

} // namespace

FactSet parse_facts(std::string_view text) { return Scanner(text).run(); }

FactSet parse_fact_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_facts(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), path);
    }
}

std::string serialize_facts(const FactSet& facts) {
    std::string out;
    for (const auto& [predicate, group] : facts.groups()) {
        for (const auto& fact : group) {
            out += predicate;
            if (!fact.args.empty()) {
                out += '(';
                for (std::size_t i = 0; i < fact.args.size(); ++i) {
                    if (i) out += ", ";
                    out += fact.args[i].text;
                }
                out += ')';
            }
            out += ".\n";
        }
    }
    return out;
}

const std::vector<PredicateSchema>& expected_schema() {
    static const std::vector<PredicateSchema> schema = {
        {"container", 1, false, "container"},
        {"object", 2, false, "object, container"},
        {"object", 1, false, "object (no container layer)"},
        {"transaction", 2, false, "transaction, object"},
        {"item", 4, false, "item, transaction, position, quantity"},
        {"item", 2, false, "transaction, item"},
        {"itemUtilityVector", 1, true, "item, iu_1..iu_l"},
        {"transactionUtilityVector", 1, true, "transaction, tu_1..tu_m"},
        {"objectUtilityVector", 1, true, "object, ou_1..ou_n"},
        {"containerUtilityVector", 1, true, "container, cu_1..cu_o"},
        {"itemCategory", 2, false, "item, category"},
        {"facetLabel", 3, false, "level, index, label"},
    };
    return schema;
}

} // namespace ehupm
