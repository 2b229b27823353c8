#include "ehupm/prediction.hpp"

#include "ehupm/error.hpp"
#include "ehupm/utility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <thread>

namespace ehupm {

double Regression::operator()(double value) const noexcept {
    const double y = intercept + slope * value;
    if (!(y > 0.0)) return 0.0;
    return y < 1.0 ? y : 1.0;
}

std::optional<Regression> fit_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    Regression r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    return r;
}

double PatternPredictor::weight() const noexcept { return std::abs(gamma) * static_cast<double>(support); }

PredictorSet PredictorSet::with_min_gamma(double threshold) const {
    PredictorSet out;
    out.object_facet = object_facet;
    out.min_support = min_support;
    out.min_abs_gamma = threshold;
    for (const auto& p : predictors)
        if (std::abs(p.gamma) >= threshold - kGammaSlack) out.predictors.push_back(p);
    return out;
}

std::vector<Pattern> PredictorSet::patterns() const {
    std::vector<Pattern> out;
    for (const auto& p : predictors)
        if (p.bound) out.push_back(p.pattern);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void PredictorSet::bind(const Dataset& dataset) {
    if (object_facet >= dataset.dims().object)
        throw ValidationError("predictors use object facet " + std::to_string(object_facet) +
                              " but the dataset has " + std::to_string(dataset.dims().object));
    for (auto& p : predictors) {
        if (p.facet >= dataset.dims().transaction)
            throw ValidationError("predictor uses transaction facet " + std::to_string(p.facet) +
                                  " but the dataset has " + std::to_string(dataset.dims().transaction));
        p.pattern = Pattern{};
        p.bound = true;
        for (const auto& name : p.items) {
            auto id = dataset.find_item(name);
            if (!id) {
                p.bound = false;
                break;
            }
            p.pattern.items.push_back(*id);
        }
        if (p.bound) std::sort(p.pattern.items.begin(), p.pattern.items.end());
    }
}

namespace {

void check_config(const Dataset& ds, const PredictorConfig& config) {
    const auto dims = ds.dims();
    if (dims.object == 0) throw ValidationError("prediction needs at least one object facet");
    if (config.object_facet >= dims.object)
        throw ValidationError("object facet " + std::to_string(config.object_facet) + " does not exist (" +
                              std::to_string(dims.object) + " object facets)");
    for (auto f : config.target_facets)
        if (f >= dims.transaction)
            throw ValidationError("target facet tx." + std::to_string(f) + " does not exist (" +
                                  std::to_string(dims.transaction) + " transaction facets)");
    if (!(config.min_abs_gamma >= 0.0) || config.min_abs_gamma > 1.0)
        throw ValidationError("correlation threshold must lie in [0, 1]");
}

std::vector<std::size_t> targets_of(const Dataset& ds, const PredictorConfig& config) {
    if (!config.target_facets.empty()) {
        auto t = config.target_facets;
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        return t;
    }
    std::vector<std::size_t> all(ds.dims().transaction);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
}

std::size_t worker_slots(std::size_t threads) {
    return threads > 0 ? threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

bool predictor_less(const PatternPredictor& a, const PatternPredictor& b) {
    if (a.pattern == b.pattern) return a.facet < b.facet;
    return a.pattern < b.pattern;
}

std::vector<TransactionId> transactions_of_objects(const Dataset& ds, const std::vector<std::size_t>& fold_of,
                                                   std::size_t fold, bool inside) {
    std::vector<TransactionId> out;
    for (std::uint32_t t = 0; t < ds.transaction_count(); ++t) {
        const TransactionId tid{t};
        if ((fold_of[ds.transaction(tid).object.value] == fold) == inside) out.push_back(tid);
    }
    return out;
}

FoldReport evaluate_fold(const PredictorSet& predictors, const Dataset& ds, std::span<const TransactionId> test,
                         std::size_t object_facet) {
    FoldReport r;
    r.test_transactions = test.size();
    r.predictors = predictors.size();
    for (TransactionId tid : test) {
        auto estimate = predict(predictors, ds, tid);
        if (!estimate) continue;
        ++r.attempted;
        const double actual = ds.object_of(tid).facets[object_facet];
        if (static_cast<double>(classify(*estimate)) == actual) ++r.correct;
    }
    r.flagged = r.attempted == 0;
    r.accuracy = r.flagged ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(r.attempted);
    r.missing_rate = r.test_transactions == 0
                         ? 0.0
                         : static_cast<double>(r.test_transactions - r.attempted) / static_cast<double>(r.test_transactions);
    return r;
}

CVReport summarize(std::vector<FoldReport> folds) {
    CVReport report;
    report.folds = std::move(folds);
    if (report.folds.empty()) return report;
    const double k = static_cast<double>(report.folds.size());
    std::size_t tested = 0, missing = 0;
    for (const auto& f : report.folds) {
        report.mean_accuracy += f.accuracy;
        tested += f.test_transactions;
        missing += f.test_transactions - f.attempted;
    }
    report.mean_accuracy /= k;
    for (const auto& f : report.folds)
        report.accuracy_variance += (f.accuracy - report.mean_accuracy) * (f.accuracy - report.mean_accuracy);
    report.accuracy_variance /= k;
    report.missing_rate = tested == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(tested);
    return report;
}

void check_folds(const Dataset& ds, std::size_t k) {
    if (k < 2) throw ValidationError("cross-validation needs k >= 2");
    if (k > ds.object_count())
        throw ValidationError("k = " + std::to_string(k) + " exceeds the number of objects (" +
                              std::to_string(ds.object_count()) + ")");
}

void append_double(std::string& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

template <class T>
T parse_field(std::string_view text, std::size_t line, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(std::string("bad ") + what + " '" + std::string(text) + "'", line, 1, "predictors");
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

} // namespace

PredictorSet build_predictors(const Dataset& dataset, const PredictorConfig& config,
                              std::optional<std::span<const TransactionId>> universe) {
    check_config(dataset, config);
    const auto targets = targets_of(dataset, config);

    MiningConfig mining;
    mining.min_support = config.min_support;
    mining.min_length = config.min_length;
    mining.max_length = config.max_length;
    mining.mode = PatternMode::Itemset;
    mining.filter = config.filter;
    mining.threads = config.threads;

    std::vector<std::vector<PatternPredictor>> found(worker_slots(config.threads));
    auto visit = [&](std::size_t worker, const Pattern& pattern, std::span<const TransactionId> support) {
        std::vector<double> x(support.size()), y(support.size());
        for (std::size_t r = 0; r < support.size(); ++r) y[r] = dataset.object_of(support[r]).facets[config.object_facet];
        for (auto facet : targets) {
            for (std::size_t r = 0; r < support.size(); ++r) x[r] = dataset.transaction(support[r]).facets[facet];
            auto gamma = pearson(x, y);
            if (!gamma || std::abs(*gamma) < config.min_abs_gamma - kGammaSlack) continue;
            auto fit = fit_regression(x, y);
            if (!fit) continue;
            PatternPredictor p;
            p.pattern = pattern;
            for (ItemId item : pattern.items) p.items.push_back(dataset.item_name(item));
            p.facet = facet;
            p.support = support.size();
            p.gamma = *gamma;
            p.regression = *fit;
            found[worker].push_back(std::move(p));
        }
    };
    for_each_frequent(dataset, mining, visit, universe);

    PredictorSet set;
    set.object_facet = config.object_facet;
    set.min_support = config.min_support;
    set.min_abs_gamma = config.min_abs_gamma;
    for (auto& bucket : found)
        for (auto& p : bucket) set.predictors.push_back(std::move(p));
    std::sort(set.predictors.begin(), set.predictors.end(), predictor_less);
    return set;
}

std::optional<double> predict(const PredictorSet& predictors, const Dataset& dataset, TransactionId tid) {
    const Transaction& tx = dataset.transaction(tid);
    double weighted = 0.0, total = 0.0;
    double lo = 1.0, hi = 0.0;
    for (const auto& p : predictors.predictors) {
        if (!p.bound || !supports(tx, p.pattern)) continue;
        const double w = p.weight();
        if (!(w > 0.0)) continue;
        const double mu = p.regression(tx.facets.at(p.facet));
        weighted += w * mu;
        total += w;
        lo = std::min(lo, mu);
        hi = std::max(hi, mu);
    }
    if (!(total > 0.0)) return std::nullopt;
    // Rounding must not push the mean outside the range of its terms.
    return std::clamp(weighted / total, lo, hi);
}

int classify(double estimate) noexcept { return estimate >= 0.5 ? 1 : 0; }

std::vector<std::size_t> assign_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    check_folds(dataset, k);
    std::vector<std::size_t> order(dataset.object_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Explicit Fisher-Yates: std::shuffle's draw sequence is library-specific.
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<std::size_t> fold_of(dataset.object_count());
    for (std::size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % k;
    return fold_of;
}

CVReport cross_validate(const Dataset& dataset, const PredictorConfig& config, std::size_t k, std::uint64_t seed) {
    check_config(dataset, config);
    const auto fold_of = assign_folds(dataset, k, seed);
    std::vector<FoldReport> folds;
    for (std::size_t f = 0; f < k; ++f) {
        const auto train = transactions_of_objects(dataset, fold_of, f, false);
        const auto test = transactions_of_objects(dataset, fold_of, f, true);
        const auto predictors = build_predictors(dataset, config, std::span<const TransactionId>(train));
        folds.push_back(evaluate_fold(predictors, dataset, test, config.object_facet));
    }
    return summarize(std::move(folds));
}

Coverage coverage_metrics(const Dataset& dataset, const std::vector<Pattern>& patterns) {
    Coverage c;
    if (dataset.transaction_count() == 0) return c;
    std::set<std::vector<ItemId>> all, covered;
    std::size_t hit = 0;
    for (std::uint32_t t = 0; t < dataset.transaction_count(); ++t) {
        const Transaction& tx = dataset.transaction(TransactionId{t});
        const bool yes = std::any_of(patterns.begin(), patterns.end(), [&](const Pattern& p) {
            return std::includes(tx.items.begin(), tx.items.end(), p.items.begin(), p.items.end()) && !p.items.empty();
        });
        all.insert(tx.items);
        if (yes) {
            ++hit;
            covered.insert(tx.items);
        }
    }
    c.transactions = static_cast<double>(hit) / static_cast<double>(dataset.transaction_count());
    c.combinations = static_cast<double>(covered.size()) / static_cast<double>(all.size());
    return c;
}

std::vector<SweepCell> sweep(const Dataset& dataset, const PredictorConfig& base,
                             std::span<const std::size_t> min_supports, std::span<const double> thresholds,
                             std::size_t k, std::uint64_t seed) {
    std::vector<SweepCell> cells;
    if (min_supports.empty() || thresholds.empty()) return cells;
    for (double t : thresholds)
        if (!(t >= 0.0) || t > 1.0) throw ValidationError("correlation thresholds must lie in [0, 1]");
    const double lowest = *std::min_element(thresholds.begin(), thresholds.end());
    const auto fold_of = assign_folds(dataset, k, seed);

    std::vector<std::vector<TransactionId>> train(k), test(k);
    for (std::size_t f = 0; f < k; ++f) {
        train[f] = transactions_of_objects(dataset, fold_of, f, false);
        test[f] = transactions_of_objects(dataset, fold_of, f, true);
    }

    for (std::size_t occ : min_supports) {
        PredictorConfig config = base;
        config.min_support = occ;
        config.min_abs_gamma = lowest;
        // Build once at the loosest threshold; tighter ones are subsets.
        const auto full = build_predictors(dataset, config);
        std::vector<PredictorSet> per_fold;
        for (std::size_t f = 0; f < k; ++f)
            per_fold.push_back(build_predictors(dataset, config, std::span<const TransactionId>(train[f])));

        for (double threshold : thresholds) {
            SweepCell cell;
            cell.min_support = occ;
            cell.threshold = threshold;
            const auto kept = full.with_min_gamma(threshold);
            cell.predictors = kept.size();
            cell.coverage = coverage_metrics(dataset, kept.patterns());
            std::vector<FoldReport> folds;
            for (std::size_t f = 0; f < k; ++f)
                folds.push_back(evaluate_fold(per_fold[f].with_min_gamma(threshold), dataset, test[f], config.object_facet));
            cell.cv = summarize(std::move(folds));
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::string save_predictors(const PredictorSet& predictors) {
    std::string out = "ehupm-predictors\t1\n";
    out += "object_facet\t" + std::to_string(predictors.object_facet) + "\n";
    out += "min_support\t" + std::to_string(predictors.min_support) + "\n";
    out += "min_abs_gamma\t";
    append_double(out, predictors.min_abs_gamma);
    out += "\n";
    for (const auto& p : predictors.predictors) {
        for (const auto& item : p.items) {
            if (item.find_first_of("\t\n\r") != std::string::npos)
                throw ValidationError("item name '" + item + "' cannot be saved: contains a tab or newline");
            out += item;
            out += '\t';
        }
        out += std::to_string(p.facet) + "\t" + std::to_string(p.support) + "\t";
        append_double(out, p.gamma);
        out += '\t';
        append_double(out, p.regression.slope);
        out += '\t';
        append_double(out, p.regression.intercept);
        out += '\n';
    }
    return out;
}

PredictorSet load_predictors(std::string_view text) {
    PredictorSet set;
    std::size_t line_no = 0;
    bool header = false;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (!header) {
            if (fields.size() != 2 || fields[0] != "ehupm-predictors")
                throw ParseError("not a predictor file", line_no, 1, "predictors");
            if (fields[1] != "1") throw ParseError("unsupported predictor format version " + std::string(fields[1]), line_no, 1, "predictors");
            header = true;
            continue;
        }
        if (fields.size() == 2 && fields[0] == "object_facet") {
            set.object_facet = parse_field<std::size_t>(fields[1], line_no, "object facet");
        } else if (fields.size() == 2 && fields[0] == "min_support") {
            set.min_support = parse_field<std::size_t>(fields[1], line_no, "support threshold");
        } else if (fields.size() == 2 && fields[0] == "min_abs_gamma") {
            set.min_abs_gamma = parse_field<double>(fields[1], line_no, "correlation threshold");
        } else {
            if (fields.size() < 6) throw ParseError("predictor line needs items and five numbers", line_no, 1, "predictors");
            const std::size_t n = fields.size() - 5;
            PatternPredictor p;
            for (std::size_t i = 0; i < n; ++i) {
                if (fields[i].empty()) throw ParseError("empty item name", line_no, 1, "predictors");
                p.items.emplace_back(fields[i]);
            }
            p.facet = parse_field<std::size_t>(fields[n], line_no, "facet index");
            p.support = parse_field<std::size_t>(fields[n + 1], line_no, "support");
            p.gamma = parse_field<double>(fields[n + 2], line_no, "gamma");
            p.regression.slope = parse_field<double>(fields[n + 3], line_no, "slope");
            p.regression.intercept = parse_field<double>(fields[n + 4], line_no, "intercept");
            p.bound = false;
            set.predictors.push_back(std::move(p));
        }
    }
    if (!header) throw ParseError("empty predictor file", 1, 1, "predictors");
    return set;
}

} // namespace ehupm
