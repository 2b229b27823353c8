#include "ehupm/utility.hpp"

#include "ehupm/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ehupm {

bool Condition::holds(double x) const noexcept {
    switch (op) {
    case Comparison::Less: return x < value;
    case Comparison::LessEqual: return x <= value;
    case Comparison::Equal: return x == value;
    case Comparison::NotEqual: return x != value;
    case Comparison::GreaterEqual: return x >= value;
    case Comparison::Greater: return x > value;
    }
    return false;
}

namespace {

bool matches(Polarity p, double x) {
    switch (p) {
    case Polarity::Positive: return x > 0;
    case Polarity::Negative: return x < 0;
    case Polarity::Either: return x != 0;
    }
    return false;
}

std::optional<double> finite_or_undefined(std::optional<double> v) {
    if (v && !std::isfinite(*v)) return std::nullopt;
    return v;
}

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

bool constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

} // namespace

std::vector<double> intra_pattern_utility(const Dataset& dataset, const Pattern& pattern, TransactionId tid,
                                          IntraAggregator aggregator) {
    const std::size_t l = dataset.dims().item;
    if (l == 0) return {};
    const auto& tx = dataset.transaction(tid);
    auto chosen = match_occurrences(tx, pattern);
    if (!chosen) throw ValidationError("transaction '" + tx.name + "' does not support " + to_string(dataset, pattern));

    std::vector<double> out(l, 0.0);
    for (std::size_t k = 0; k < l; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < chosen->size(); ++j) {
            const auto& occ = tx.occurrences[(*chosen)[j]];
            const double product = dataset.item_facets(occ.item)[k] * occ.quantity;
            switch (aggregator) {
            case IntraAggregator::Sum:
            case IntraAggregator::Avg: acc += product; break;
            case IntraAggregator::Max: acc = j == 0 ? product : std::max(acc, product); break;
            case IntraAggregator::Min: acc = j == 0 ? product : std::min(acc, product); break;
            }
        }
        if (aggregator == IntraAggregator::Avg && !chosen->empty()) acc /= static_cast<double>(chosen->size());
        out[k] = acc;
    }
    return out;
}

OccurrenceUtilityVector occurrence_utility_vector(const Dataset& dataset, const Pattern& pattern, TransactionId tid,
                                                  IntraAggregator aggregator) {
    const auto& tx = dataset.transaction(tid);
    if (!supports(tx, pattern))
        throw ValidationError("transaction '" + tx.name + "' does not support " + to_string(dataset, pattern));
    OccurrenceUtilityVector out{tid, intra_pattern_utility(dataset, pattern, tid, aggregator), dataset.dims()};
    out.values.reserve(out.segments.total());
    for (Level level : {Level::Transaction, Level::Object, Level::Container}) {
        auto facets = dataset.enclosing_facets(level, tid);
        out.values.insert(out.values.end(), facets.begin(), facets.end());
    }
    return out;
}

PatternUtilityMatrix::PatternUtilityMatrix(FacetDims dims, std::vector<TransactionId> transactions,
                                           std::vector<double> values)
    : dims_(dims), transactions_(std::move(transactions)), values_(std::move(values)) {
    if (values_.size() != transactions_.size() * dims_.total())
        throw ValidationError("pattern utility matrix is not rectangular");
}

std::vector<double> PatternUtilityMatrix::column(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
    return out;
}

std::size_t PatternUtilityMatrix::index_of(Column column) const {
    if (column.index >= dims_.of(column.level))
        throw ValidationError("facet " + std::string(level_name(column.level)) + "." + std::to_string(column.index) +
                              " does not exist (" + std::to_string(dims_.of(column.level)) + " facets at that level)");
    return dims_.offset(column.level) + column.index;
}

PatternUtilityMatrix pattern_utility_matrix(const Dataset& dataset, const Pattern& pattern,
                                            std::span<const TransactionId> support, IntraAggregator aggregator) {
    if (support.empty()) throw ValidationError("pattern utility matrix requested for a pattern with no support");
    std::vector<double> values;
    values.reserve(support.size() * dataset.dims().total());
    for (TransactionId tid : support) {
        auto occ = occurrence_utility_vector(dataset, pattern, tid, aggregator);
        values.insert(values.end(), occ.values.begin(), occ.values.end());
    }
    return PatternUtilityMatrix(dataset.dims(), {support.begin(), support.end()}, std::move(values));
}

std::optional<double> aggregate(Aggregate how, std::span<const double> values) {
    switch (how) {
    case Aggregate::Sum: return std::accumulate(values.begin(), values.end(), 0.0);
    case Aggregate::Times:
        return std::accumulate(values.begin(), values.end(), 1.0, std::multiplies<>{});
    case Aggregate::Max:
        if (values.empty()) return std::nullopt;
        return *std::max_element(values.begin(), values.end());
    case Aggregate::Min:
        if (values.empty()) return std::nullopt;
        return *std::min_element(values.begin(), values.end());
    case Aggregate::Avg:
        if (values.empty()) return std::nullopt;
        return mean_of(values);
    case Aggregate::Percent:
        if (values.empty()) return std::nullopt;
        return 100.0 * mean_of(values);
    case Aggregate::Std:
    case Aggregate::SampleStd: {
        if (values.size() < 2) return std::nullopt;
        const double mean = mean_of(values);
        double ss = 0.0;
        for (double x : values) ss += (x - mean) * (x - mean);
        const double n = static_cast<double>(values.size());
        return std::sqrt(ss / (how == Aggregate::Std ? n : n - 1.0));
    }
    }
    return std::nullopt;
}

double filter_sum(const PatternUtilityMatrix& m, std::size_t column) {
    double total = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) total += m.at(r, column);
    return total;
}

double filter_times(const PatternUtilityMatrix& m, std::size_t column) {
    double total = 1.0;
    for (std::size_t r = 0; r < m.rows(); ++r) total *= m.at(r, column);
    return total;
}

double coherence_degree(const PatternUtilityMatrix& m, std::span<const std::size_t> columns, Polarity polarity) {
    if (m.rows() == 0) return 0.0;
    std::size_t coherent = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto all = [&](Polarity p) {
            return std::all_of(columns.begin(), columns.end(), [&](std::size_t c) { return matches(p, m.at(r, c)); });
        };
        bool ok = polarity == Polarity::Either ? all(Polarity::Positive) || all(Polarity::Negative) : all(polarity);
        if (ok) ++coherent;
    }
    return 100.0 * static_cast<double>(coherent) / static_cast<double>(m.rows());
}

double disagreement_degree(const PatternUtilityMatrix& m, const Condition& a, const Condition& b) {
    if (m.rows() == 0) return 0.0;
    const std::size_t ca = m.index_of(a.column);
    const std::size_t cb = m.index_of(b.column);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (a.holds(m.at(r, ca)) && b.holds(m.at(r, cb))) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(m.rows());
}

double max_sum(const PatternUtilityMatrix& m, std::span<const std::size_t> columns) {
    double total = 0.0;
    for (std::size_t c : columns) {
        auto col = m.column(c);
        total += *std::max_element(col.begin(), col.end());
    }
    return total;
}

std::optional<double> std_max(const PatternUtilityMatrix& m, std::span<const std::size_t> columns, bool sample) {
    if (m.rows() < 2 || columns.empty()) return std::nullopt;
    double best = 0.0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        auto col = m.column(columns[i]);
        double s = *aggregate(sample ? Aggregate::SampleStd : Aggregate::Std, col);
        best = i == 0 ? s : std::max(best, s);
    }
    return best;
}

double mixed_coherence_degree(const PatternUtilityMatrix& m, std::size_t a, std::size_t b, Polarity pa, Polarity pb) {
    if (m.rows() == 0) return 0.0;
    std::size_t na = 0, nb = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (matches(pa, m.at(r, a))) ++na;
        if (matches(pb, m.at(r, b))) ++nb;
    }
    const double n = static_cast<double>(m.rows());
    return (static_cast<double>(na) / n) * (static_cast<double>(nb) / n);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    if (constant(x) || constant(y)) return std::nullopt;
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    const double r = sxy / std::sqrt(sxx * syy);
    if (!std::isfinite(r)) return std::nullopt;
    return std::clamp(r, -1.0, 1.0);
}

std::optional<double> multiple_correlation(const std::vector<std::vector<double>>& predictors,
                                           std::span<const double> y) {
    const std::size_t p = predictors.size();
    const std::size_t n = y.size();
    if (p == 0 || n <= p) return std::nullopt;
    for (const auto& col : predictors)
        if (col.size() != n) return std::nullopt;
    if (constant(y)) return std::nullopt;

    // Centering absorbs the intercept.
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd yc(n);
    const double my = mean_of(y);
    for (std::size_t i = 0; i < n; ++i) yc(static_cast<Eigen::Index>(i)) = y[i] - my;
    for (std::size_t j = 0; j < p; ++j) {
        const double mx = mean_of(predictors[j]);
        for (std::size_t i = 0; i < n; ++i)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = predictors[j][i] - mx;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < p) return std::nullopt;

    const Eigen::VectorXd beta = qr.solve(yc);
    const double ss_res = (yc - X * beta).squaredNorm();
    const double ss_tot = yc.squaredNorm();
    if (ss_tot <= 0.0) return std::nullopt;
    const double r2 = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    return std::sqrt(r2);
}

UtilityClass UtilitySpec::utility_class() const noexcept {
    switch (function.index()) {
    case 0: return UtilityClass::HorizontalFirst;
    case 1:
    case 2: return UtilityClass::VerticalFirst;
    default: return UtilityClass::Mixed;
    }
}

namespace {

void check_column(Column c, FacetDims dims) {
    if (c.index >= dims.of(c.level))
        throw ValidationError("facet " + std::string(level_name(c.level)) + "." + std::to_string(c.index) +
                              " does not exist (" + std::to_string(dims.of(c.level)) + " facets at that level)");
}

void check_row(const RowFunction& row, FacetDims dims, bool vertical) {
    using K = RowFunction::Kind;
    switch (row.kind) {
    case K::Filter:
        if (row.columns.size() != 1) throw ValidationError("filter takes exactly one facet");
        break;
    case K::Aggregate:
    case K::Coherent:
        if (row.columns.empty()) throw ValidationError("row function needs at least one facet");
        break;
    case K::Disagree:
        check_column(row.conditions[0].column, dims);
        check_column(row.conditions[1].column, dims);
        break;
    }
    if (vertical && (row.kind == K::Coherent || row.kind == K::Disagree))
        throw ValidationError("coherent/disagree are horizontal-first row functions");
    for (Column c : row.columns) check_column(c, dims);
}

std::optional<double> apply_row(const RowFunction& row, std::span<const double> values,
                                std::span<const std::size_t> cols, const PatternUtilityMatrix* m) {
    using K = RowFunction::Kind;
    switch (row.kind) {
    case K::Filter: return values[cols[0]];
    case K::Aggregate: {
        std::vector<double> picked;
        picked.reserve(cols.size());
        for (std::size_t c : cols) picked.push_back(values[c]);
        return aggregate(row.aggregate, picked);
    }
    case K::Coherent: {
        auto all = [&](Polarity p) {
            return std::all_of(cols.begin(), cols.end(), [&](std::size_t c) { return matches(p, values[c]); });
        };
        bool ok = row.polarity == Polarity::Either ? all(Polarity::Positive) || all(Polarity::Negative)
                                                   : all(row.polarity);
        return ok ? 1.0 : 0.0;
    }
    case K::Disagree: {
        const auto& [a, b] = row.conditions;
        return a.holds(values[m->index_of(a.column)]) && b.holds(values[m->index_of(b.column)]) ? 1.0 : 0.0;
    }
    }
    return std::nullopt;
}

} // namespace

void validate(const UtilitySpec& spec, FacetDims dims) {
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, HorizontalFirst>) {
                check_row(f.row, dims, false);
            } else if constexpr (std::is_same_v<F, VerticalFirst>) {
                check_row(f.row, dims, true);
            } else if constexpr (std::is_same_v<F, MixedCoherence>) {
                check_column(f.a, dims);
                check_column(f.b, dims);
            } else if constexpr (std::is_same_v<F, PearsonCorrelation>) {
                check_column(f.x, dims);
                check_column(f.y, dims);
            } else {
                if (f.predictors.empty()) throw ValidationError("multiple correlation needs predictor facets");
                for (Column c : f.predictors) check_column(c, dims);
                check_column(f.target, dims);
            }
        },
        spec.function);
}

std::optional<double> evaluate(const PatternUtilityMatrix& m, const UtilitySpec& spec) {
    if (m.rows() == 0) return std::nullopt;
    auto resolve = [&](const std::vector<Column>& columns) {
        std::vector<std::size_t> out;
        out.reserve(columns.size());
        for (Column c : columns) out.push_back(m.index_of(c));
        return out;
    };

    std::optional<double> result = std::visit(
        [&](const auto& f) -> std::optional<double> {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, HorizontalFirst>) {
                const auto cols = resolve(f.row.columns);
                std::vector<double> per_row;
                per_row.reserve(m.rows());
                for (std::size_t r = 0; r < m.rows(); ++r) {
                    auto v = apply_row(f.row, m.row(r), cols, &m);
                    if (!v) return std::nullopt;
                    per_row.push_back(*v);
                }
                return aggregate(f.column, per_row);
            } else if constexpr (std::is_same_v<F, VerticalFirst>) {
                const auto cols = resolve(f.row.columns);
                std::vector<double> reduced;
                reduced.reserve(cols.size());
                for (std::size_t c : cols) {
                    auto v = aggregate(f.column, m.column(c));
                    if (!v) return std::nullopt;
                    reduced.push_back(*v);
                }
                std::vector<std::size_t> positions(cols.size());
                std::iota(positions.begin(), positions.end(), std::size_t{0});
                return apply_row(f.row, reduced, positions, nullptr);
            } else if constexpr (std::is_same_v<F, MixedCoherence>) {
                return mixed_coherence_degree(m, m.index_of(f.a), m.index_of(f.b), f.pa, f.pb);
            } else if constexpr (std::is_same_v<F, PearsonCorrelation>) {
                return pearson(m.column(m.index_of(f.x)), m.column(m.index_of(f.y)));
            } else {
                std::vector<std::vector<double>> xs;
                for (Column c : f.predictors) xs.push_back(m.column(m.index_of(c)));
                return multiple_correlation(xs, m.column(m.index_of(f.target)));
            }
        },
        spec.function);
    return finite_or_undefined(result);
}

} // namespace ehupm
