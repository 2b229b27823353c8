#pragma once

#include "ehupm/dataset.hpp"
#include "ehupm/miner.hpp"
#include "ehupm/pattern.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ehupm {

/// Affine least-squares fit of the object facet on one transaction facet.
/// Estimates are clamped to [0, 1].
struct Regression {
    double slope = 0.0;
    double intercept = 0.0;

    double operator()(double value) const noexcept;
};

/// Ordinary least squares of y on x; nullopt when x is constant.
std::optional<Regression> fit_regression(std::span<const double> x, std::span<const double> y);

struct PatternPredictor {
    // Item ids are only meaningful for the dataset the set is bound to.
    Pattern pattern;
    std::vector<std::string> items;
    std::size_t facet = 0;
    std::size_t support = 0;
    double gamma = 0.0;
    Regression regression;
    bool bound = true;

    double weight() const noexcept;
};

struct PredictorConfig {
    // Transaction facets to correlate; empty means all of them.
    std::vector<std::size_t> target_facets;
    std::size_t object_facet = 0;
    std::size_t min_support = 10;
    double min_abs_gamma = 0.5;
    std::size_t min_length = 1;
    std::size_t max_length = 3;
    ItemFilter filter;
    std::size_t threads = 1;
};

/// Slack applied when comparing |gamma| with the threshold, so that perfectly
/// linear data still passes a threshold of 1.0 under rounding.
inline constexpr double kGammaSlack = 1e-12;

struct PredictorSet {
    std::vector<PatternPredictor> predictors;
    std::size_t object_facet = 0;
    std::size_t min_support = 0;
    double min_abs_gamma = 0.0;

    std::size_t size() const noexcept { return predictors.size(); }
    /// Predictors with |gamma| >= threshold; the input order is kept.
    PredictorSet with_min_gamma(double threshold) const;
    /// Distinct patterns, canonical order.
    std::vector<Pattern> patterns() const;
    /// Resolves item names against `dataset`. Predictors with unknown items
    /// stay unbound and never match.
    void bind(const Dataset& dataset);
};

/// Mines frequent itemsets (over `universe` when given) and keeps every
/// (pattern, facet) pair whose Pearson correlation with the object facet is
/// defined and at least min_abs_gamma in magnitude.
PredictorSet build_predictors(const Dataset& dataset, const PredictorConfig& config,
                              std::optional<std::span<const TransactionId>> universe = std::nullopt);

/// Weighted mean of the regressions of every matching predictor, weights
/// |gamma| * support. nullopt when no predictor matches.
std::optional<double> predict(const PredictorSet& predictors, const Dataset& dataset, TransactionId tid);

/// 1 iff estimate >= 0.5.
int classify(double estimate) noexcept;

struct FoldReport {
    std::size_t test_transactions = 0;
    std::size_t attempted = 0;
    std::size_t correct = 0;
    std::size_t predictors = 0;
    double accuracy = 0.0;
    double missing_rate = 0.0;
    // No prediction was attempted in this fold; accuracy counted as 0.
    bool flagged = false;
};

struct CVReport {
    std::vector<FoldReport> folds;
    double mean_accuracy = 0.0;
    double accuracy_variance = 0.0;
    // Pooled over all folds: transactions without prediction / test transactions.
    double missing_rate = 0.0;
};

/// Seeded assignment of objects to k folds (shuffle, then round robin).
std::vector<std::size_t> assign_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

/// k-fold cross-validation over objects, so transactions of one object never
/// straddle train and test.
CVReport cross_validate(const Dataset& dataset, const PredictorConfig& config, std::size_t k, std::uint64_t seed);

struct Coverage {
    // Transactions supported by at least one pattern / all transactions.
    double transactions = 0.0;
    // Distinct transaction item-sets containing some pattern / all distinct item-sets.
    double combinations = 0.0;
};

Coverage coverage_metrics(const Dataset& dataset, const std::vector<Pattern>& patterns);

struct SweepCell {
    std::size_t min_support = 0;
    double threshold = 0.0;
    CVReport cv;
    Coverage coverage;
    // Predictors built on the whole dataset for this cell.
    std::size_t predictors = 0;
};

/// Grid over occurrence and |gamma| thresholds. Folds are fixed by `seed` and
/// shared by every cell.
std::vector<SweepCell> sweep(const Dataset& dataset, const PredictorConfig& base,
                             std::span<const std::size_t> min_supports, std::span<const double> thresholds,
                             std::size_t k, std::uint64_t seed);

/// Line-oriented text form:
///   ehupm-predictors <TAB> 1
///   object_facet <TAB> n / min_support <TAB> n / min_abs_gamma <TAB> x
///   item... <TAB> facet <TAB> nu <TAB> gamma <TAB> slope <TAB> intercept
std::string save_predictors(const PredictorSet& predictors);
/// The result is unbound; call bind() before predicting.
PredictorSet load_predictors(std::string_view text);

} // namespace ehupm
