#pragma once

#include "ehupm/dataset.hpp"
#include "ehupm/pattern.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ehupm {

/// A facet addressed by layer and zero-based index within that layer.
struct Column {
    Level level = Level::Transaction;
    std::size_t index = 0;

    friend bool operator==(const Column&, const Column&) = default;
};

enum class Comparison : std::uint8_t { Less, LessEqual, Equal, NotEqual, GreaterEqual, Greater };

struct Condition {
    Column column;
    Comparison op = Comparison::Greater;
    double value = 0.0;

    bool holds(double x) const noexcept;
};

enum class Polarity : std::uint8_t { Positive, Negative, Either };

/// How the item utility vectors of a pattern merge inside one transaction.
enum class IntraAggregator : std::uint8_t { Sum, Max, Min, Avg };

/// Reductions over a list of numbers. Std divides by n, SampleStd by n-1;
/// Percent is 100 times the mean (for 0/1 indicators, a percentage of rows).
enum class Aggregate : std::uint8_t { Sum, Times, Max, Min, Avg, Std, SampleStd, Percent };

/// Per facet k: aggregate over pattern items of IU_i[k] * q(i, T). Empty when
/// items carry no facets.
std::vector<double> intra_pattern_utility(const Dataset& dataset, const Pattern& pattern, TransactionId tid,
                                          IntraAggregator aggregator);

struct OccurrenceUtilityVector {
    TransactionId transaction;
    // IU ++ TU ++ OU ++ CU
    std::vector<double> values;
    FacetDims segments;
};

/// Throws ValidationError when `tid` does not support `pattern`.
OccurrenceUtilityVector occurrence_utility_vector(const Dataset& dataset, const Pattern& pattern, TransactionId tid,
                                                  IntraAggregator aggregator = IntraAggregator::Sum);

/// U_P: one occurrence utility vector per supporting transaction, row-major.
class PatternUtilityMatrix {
public:
    PatternUtilityMatrix(FacetDims dims, std::vector<TransactionId> transactions, std::vector<double> values);

    std::size_t rows() const noexcept { return transactions_.size(); }
    std::size_t cols() const noexcept { return dims_.total(); }
    FacetDims dims() const noexcept { return dims_; }
    const std::vector<TransactionId>& transactions() const noexcept { return transactions_; }

    double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }
    std::vector<double> column(std::size_t c) const;

    /// Flat index of `column`; throws ValidationError if the facet does not exist.
    std::size_t index_of(Column column) const;

private:
    FacetDims dims_;
    std::vector<TransactionId> transactions_;
    std::vector<double> values_;
};

/// Rows follow the order of `support` (canonical ascending ids when it comes
/// from the miner). An empty support is a precondition violation.
PatternUtilityMatrix pattern_utility_matrix(const Dataset& dataset, const Pattern& pattern,
                                            std::span<const TransactionId> support,
                                            IntraAggregator aggregator = IntraAggregator::Sum);

// ---------------------------------------------------------------------------
// Built-in evaluators. Columns are flat indices into the matrix. Functions
// that can be undefined return nullopt instead of NaN.

std::optional<double> aggregate(Aggregate how, std::span<const double> values);

double filter_sum(const PatternUtilityMatrix& m, std::size_t column);
double filter_times(const PatternUtilityMatrix& m, std::size_t column);

/// Percentage of rows whose selected values are all > 0, all < 0, or either.
double coherence_degree(const PatternUtilityMatrix& m, std::span<const std::size_t> columns, Polarity polarity);

/// Percentage of rows where both conditions hold.
double disagreement_degree(const PatternUtilityMatrix& m, const Condition& a, const Condition& b);

/// Sum over columns of the column maximum.
double max_sum(const PatternUtilityMatrix& m, std::span<const std::size_t> columns);

/// Max over columns of the column standard deviation; undefined below 2 rows.
std::optional<double> std_max(const PatternUtilityMatrix& m, std::span<const std::size_t> columns,
                              bool sample = false);

/// Fraction of rows with column a of the given sign, times the same for b.
double mixed_coherence_degree(const PatternUtilityMatrix& m, std::size_t a, std::size_t b, Polarity pa, Polarity pb);

/// Pearson correlation coefficient; undefined for fewer than two points or a
/// constant input.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// R of the least-squares fit of y on the predictors (with intercept).
/// Undefined when rows <= predictors, the design is rank deficient, or y is
/// constant.
std::optional<double> multiple_correlation(const std::vector<std::vector<double>>& predictors,
                                           std::span<const double> y);

// ---------------------------------------------------------------------------
// Utility specifications.

enum class UtilityClass : std::uint8_t { HorizontalFirst, VerticalFirst, Mixed };

/// f_h: combines the facets of one row (or, vertical first, of the reduced row).
struct RowFunction {
    enum class Kind : std::uint8_t { Filter, Aggregate, Coherent, Disagree };

    Kind kind = Kind::Filter;
    std::vector<Column> columns;
    Aggregate aggregate = Aggregate::Sum;
    Polarity polarity = Polarity::Positive;
    std::array<Condition, 2> conditions{};
};

struct HorizontalFirst {
    RowFunction row;
    Aggregate column = Aggregate::Sum;
};

struct VerticalFirst {
    Aggregate column = Aggregate::Max;
    RowFunction row;
};

struct MixedCoherence {
    Column a;
    Column b;
    Polarity pa = Polarity::Positive;
    Polarity pb = Polarity::Positive;
};

struct PearsonCorrelation {
    Column x;
    Column y;
};

struct MultipleCorrelation {
    std::vector<Column> predictors;
    Column target;
};

struct UtilitySpec {
    std::variant<HorizontalFirst, VerticalFirst, MixedCoherence, PearsonCorrelation, MultipleCorrelation> function;
    IntraAggregator intra = IntraAggregator::Sum;

    UtilityClass utility_class() const noexcept;
};

/// Checks that every referenced facet exists and each function has the
/// arguments it needs. Throws ValidationError.
void validate(const UtilitySpec& spec, FacetDims dims);

/// u(P). nullopt means evaluation-undefined (never NaN).
std::optional<double> evaluate(const PatternUtilityMatrix& m, const UtilitySpec& spec);

} // namespace ehupm
