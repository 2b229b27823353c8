#include "ehupm/ehupm.h"

#include "ehupm/dataset.hpp"
#include "ehupm/error.hpp"
#include "ehupm/facts.hpp"
#include "ehupm/miner.hpp"
#include "ehupm/prediction.hpp"
#include "ehupm/spec_text.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

struct ehupm_dataset {
    ehupm::Dataset dataset;
};

struct ehupm_result {
    std::vector<std::vector<std::uint32_t>> items;
    std::vector<std::vector<std::uint32_t>> support;
    std::vector<std::optional<double>> utility;
    std::vector<std::string> text;
    ehupm_diagnostics diagnostics{};
};

struct ehupm_predictors {
    ehupm::PredictorSet set;
    const ehupm_dataset* bound_to = nullptr;
};

struct ehupm_cv {
    ehupm::CVReport report;
};

struct ehupm_sweep {
    std::vector<ehupm::SweepCell> cells;
};

namespace {

thread_local std::string last_error;

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class F>
ehupm_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return EHUPM_OK;
    } catch (const ehupm::ParseError& e) {
        last_error = e.what();
        return EHUPM_ERR_PARSE;
    } catch (const ehupm::ValidationError& e) {
        last_error = e.what();
        return EHUPM_ERR_VALIDATION;
    } catch (const ehupm::IoError& e) {
        last_error = e.what();
        return EHUPM_ERR_IO;
    } catch (const ArgumentError& e) {
        last_error = e.what();
        return EHUPM_ERR_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return EHUPM_ERR_RUNTIME;
    } catch (const std::exception& e) {
        last_error = e.what();
        return EHUPM_ERR_RUNTIME;
    } catch (...) {
        last_error = "unknown error";
        return EHUPM_ERR_RUNTIME;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw ArgumentError(std::string(what) + " must not be null");
}

std::map<std::string, std::string> parse_renames(const char* text) {
    std::map<std::string, std::string> out;
    if (!text) return out;
    std::string_view rest(text);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        auto part = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == part.size())
            throw ehupm::ValidationError("rename must look like from=to: '" + std::string(part) + "'");
        out.emplace(std::string(part.substr(0, eq)), std::string(part.substr(eq + 1)));
    }
    return out;
}

ehupm::MiningConfig to_core(const ehupm_mine_config& c) {
    ehupm::MiningConfig config;
    config.min_support = c.min_support;
    config.min_utility = c.min_utility;
    config.min_length = c.min_length;
    config.max_length = c.max_length;
    switch (c.mode) {
    case EHUPM_MODE_ITEMSET: config.mode = ehupm::PatternMode::Itemset; break;
    case EHUPM_MODE_SEQUENCE: config.mode = ehupm::PatternMode::Sequence; break;
    case EHUPM_MODE_CONTIGUOUS_SEQUENCE: config.mode = ehupm::PatternMode::ContiguousSequence; break;
    default: throw ArgumentError("unknown pattern mode");
    }
    if (c.utility) {
        config.utility = ehupm::parse_utility_spec(c.utility);
        if (c.intra) config.utility->intra = ehupm::parse_intra_aggregator(c.intra);
    }
    if (c.filter) config.filter = ehupm::parse_item_filter(c.filter);
    if (c.mask_count > 0) require(c.masks, "masks");
    for (std::size_t i = 0; i < c.mask_count; ++i) {
        require(c.masks[i], "mask");
        config.masks.push_back(ehupm::parse_mask(c.masks[i]));
    }
    config.threads = c.threads;
    return config;
}

ehupm::PredictorConfig to_core(const ehupm_predictor_config& c) {
    ehupm::PredictorConfig config;
    if (c.target_count > 0) {
        require(c.target_facets, "target_facets");
        config.target_facets.assign(c.target_facets, c.target_facets + c.target_count);
    }
    config.object_facet = c.object_facet;
    config.min_support = c.min_support;
    config.min_abs_gamma = c.min_abs_gamma;
    config.min_length = c.min_length;
    config.max_length = c.max_length;
    if (c.filter) config.filter = ehupm::parse_item_filter(c.filter);
    config.threads = c.threads;
    return config;
}

ehupm_cv_summary summary_of(const ehupm::CVReport& r) {
    return {r.folds.size(), r.mean_accuracy, r.accuracy_variance, r.missing_rate};
}

ehupm::Level to_level(ehupm_level level) {
    switch (level) {
    case EHUPM_LEVEL_ITEM: return ehupm::Level::Item;
    case EHUPM_LEVEL_TRANSACTION: return ehupm::Level::Transaction;
    case EHUPM_LEVEL_OBJECT: return ehupm::Level::Object;
    case EHUPM_LEVEL_CONTAINER: return ehupm::Level::Container;
    }
    throw ArgumentError("unknown level");
}

} // namespace

extern "C" {

const char* ehupm_version(void) { return "0.1.0"; }

const char* ehupm_last_error(void) { return last_error.c_str(); }

ehupm_status ehupm_dataset_load(const char* const* paths, size_t count, const char* renames, ehupm_dataset** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        if (count == 0) throw ArgumentError("at least one fact file is required");
        require(paths, "paths");
        ehupm::FactSet facts;
        for (size_t i = 0; i < count; ++i) {
            require(paths[i], "path");
            facts.merge(ehupm::parse_fact_file(paths[i]));
        }
        facts.rename(parse_renames(renames));
        *out = new ehupm_dataset{ehupm::assemble_dataset(facts)};
    });
}

ehupm_status ehupm_dataset_parse(const char* text, const char* renames, ehupm_dataset** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(text, "text");
        auto facts = ehupm::parse_facts(text);
        facts.rename(parse_renames(renames));
        *out = new ehupm_dataset{ehupm::assemble_dataset(facts)};
    });
}

void ehupm_dataset_free(ehupm_dataset* dataset) { delete dataset; }

ehupm_status ehupm_dataset_get_stats(const ehupm_dataset* dataset, ehupm_dataset_stats* out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        const auto& ds = dataset->dataset;
        const auto dims = ehupm::facet_dims(ds);
        *out = {ds.container_count(), ds.explicit_container_count(), ds.object_count(), ds.transaction_count(),
                ds.item_count(), {dims[0], dims[1], dims[2], dims[3]}, ds.has_category_map() ? 1 : 0};
    });
}

const char* ehupm_dataset_item_name(const ehupm_dataset* dataset, size_t item) {
    if (!dataset || item >= dataset->dataset.item_count()) return nullptr;
    return dataset->dataset.item_name(ehupm::ItemId{static_cast<std::uint32_t>(item)}).c_str();
}

const char* ehupm_dataset_transaction_name(const ehupm_dataset* dataset, size_t transaction) {
    if (!dataset || transaction >= dataset->dataset.transaction_count()) return nullptr;
    return dataset->dataset.transaction(ehupm::TransactionId{static_cast<std::uint32_t>(transaction)}).name.c_str();
}

const char* ehupm_dataset_facet_label(const ehupm_dataset* dataset, ehupm_level level, size_t index) {
    if (!dataset || level < EHUPM_LEVEL_ITEM || level > EHUPM_LEVEL_CONTAINER) return nullptr;
    const auto l = to_level(level);
    if (index >= dataset->dataset.dims().of(l)) return nullptr;
    return dataset->dataset.facet_label(l, index).c_str();
}

const double* ehupm_dataset_transaction_facets(const ehupm_dataset* dataset, size_t transaction) {
    if (!dataset || transaction >= dataset->dataset.transaction_count()) return nullptr;
    return dataset->dataset.transaction(ehupm::TransactionId{static_cast<std::uint32_t>(transaction)}).facets.data();
}

const double* ehupm_dataset_object_facets(const ehupm_dataset* dataset, size_t transaction) {
    if (!dataset || transaction >= dataset->dataset.transaction_count()) return nullptr;
    return dataset->dataset.object_of(ehupm::TransactionId{static_cast<std::uint32_t>(transaction)}).facets.data();
}

void ehupm_mine_config_init(ehupm_mine_config* config) {
    if (!config) return;
    *config = ehupm_mine_config{};
    config->min_support = 1;
    config->min_utility = 0.0;
    config->min_length = 1;
    config->max_length = 1;
    config->mode = EHUPM_MODE_ITEMSET;
    config->threads = 1;
}

ehupm_status ehupm_mine_validate(const ehupm_dataset* dataset, const ehupm_mine_config* config) {
    return guarded([&] {
        require(dataset, "dataset");
        require(config, "config");
        ehupm::validate(to_core(*config), dataset->dataset);
    });
}

ehupm_status ehupm_mine(const ehupm_dataset* dataset, const ehupm_mine_config* config, ehupm_result** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        require(config, "config");
        const auto core = to_core(*config);
        const auto start = std::chrono::steady_clock::now();
        auto mined = ehupm::mine(dataset->dataset, core);
        const auto stop = std::chrono::steady_clock::now();

        auto result = std::make_unique<ehupm_result>();
        for (const auto& rec : mined.patterns) {
            std::vector<std::uint32_t> items, support;
            for (auto id : rec.pattern.items) items.push_back(id.value);
            for (auto tid : rec.support) support.push_back(tid.value);
            result->items.push_back(std::move(items));
            result->support.push_back(std::move(support));
            result->utility.push_back(rec.utility);
            result->text.push_back(ehupm::to_string(dataset->dataset, rec.pattern));
        }
        result->diagnostics = {mined.diagnostics.candidates, mined.diagnostics.undefined_utility,
                               mined.diagnostics.useful_items, std::chrono::duration<double>(stop - start).count()};
        *out = result.release();
    });
}

void ehupm_result_free(ehupm_result* result) { delete result; }

size_t ehupm_result_count(const ehupm_result* result) { return result ? result->items.size() : 0; }

const uint32_t* ehupm_result_items(const ehupm_result* result, size_t i, size_t* size) {
    if (!result || i >= result->items.size()) {
        if (size) *size = 0;
        return nullptr;
    }
    if (size) *size = result->items[i].size();
    return result->items[i].data();
}

const uint32_t* ehupm_result_support(const ehupm_result* result, size_t i, size_t* count) {
    if (!result || i >= result->support.size()) {
        if (count) *count = 0;
        return nullptr;
    }
    if (count) *count = result->support[i].size();
    return result->support[i].data();
}

int ehupm_result_utility(const ehupm_result* result, size_t i, double* value) {
    if (!result || i >= result->utility.size() || !result->utility[i]) return 0;
    if (value) *value = *result->utility[i];
    return 1;
}

const char* ehupm_result_text(const ehupm_result* result, size_t i) {
    if (!result || i >= result->text.size()) return nullptr;
    return result->text[i].c_str();
}

ehupm_status ehupm_result_diagnostics(const ehupm_result* result, ehupm_diagnostics* out) {
    return guarded([&] {
        require(result, "result");
        require(out, "out");
        *out = result->diagnostics;
    });
}

void ehupm_predictor_config_init(ehupm_predictor_config* config) {
    if (!config) return;
    const ehupm::PredictorConfig d;
    *config = ehupm_predictor_config{};
    config->object_facet = d.object_facet;
    config->min_support = d.min_support;
    config->min_abs_gamma = d.min_abs_gamma;
    config->min_length = d.min_length;
    config->max_length = d.max_length;
    config->threads = d.threads;
}

ehupm_status ehupm_predictors_build(const ehupm_dataset* dataset, const ehupm_predictor_config* config,
                                    ehupm_predictors** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        require(config, "config");
        auto set = ehupm::build_predictors(dataset->dataset, to_core(*config));
        *out = new ehupm_predictors{std::move(set), dataset};
    });
}

ehupm_status ehupm_predictors_save(const ehupm_predictors* predictors, const char* path) {
    return guarded([&] {
        require(predictors, "predictors");
        require(path, "path");
        const auto text = ehupm::save_predictors(predictors->set);
        std::ofstream file(path, std::ios::binary);
        if (!file) throw ehupm::IoError(std::string("cannot open '") + path + "' for writing");
        file << text;
        if (!file.flush()) throw ehupm::IoError(std::string("cannot write '") + path + "'");
    });
}

ehupm_status ehupm_predictors_load(const char* path, ehupm_predictors** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(path, "path");
        std::ifstream file(path, std::ios::binary);
        if (!file) throw ehupm::IoError(std::string("cannot open '") + path + "'");
        std::ostringstream buffer;
        buffer << file.rdbuf();
        try {
            *out = new ehupm_predictors{ehupm::load_predictors(buffer.str()), nullptr};
        } catch (const ehupm::ParseError& e) {
            throw ehupm::ParseError(e.message(), e.line(), e.column(), path);
        }
    });
}

ehupm_status ehupm_predictors_bind(ehupm_predictors* predictors, const ehupm_dataset* dataset) {
    return guarded([&] {
        require(predictors, "predictors");
        require(dataset, "dataset");
        predictors->set.bind(dataset->dataset);
        predictors->bound_to = dataset;
    });
}

void ehupm_predictors_free(ehupm_predictors* predictors) { delete predictors; }

size_t ehupm_predictors_count(const ehupm_predictors* predictors) { return predictors ? predictors->set.size() : 0; }

ehupm_status ehupm_predictors_get(const ehupm_predictors* predictors, size_t i, ehupm_predictor_info* out) {
    return guarded([&] {
        require(predictors, "predictors");
        require(out, "out");
        if (i >= predictors->set.size()) throw ArgumentError("predictor index out of range");
        const auto& p = predictors->set.predictors[i];
        *out = {p.items.size(), p.facet, p.support, p.gamma, p.regression.slope, p.regression.intercept,
                p.bound && predictors->bound_to ? 1 : 0};
    });
}

const char* ehupm_predictors_item(const ehupm_predictors* predictors, size_t i, size_t j) {
    if (!predictors || i >= predictors->set.size() || j >= predictors->set.predictors[i].items.size()) return nullptr;
    return predictors->set.predictors[i].items[j].c_str();
}

size_t ehupm_predictors_object_facet(const ehupm_predictors* predictors) {
    return predictors ? predictors->set.object_facet : 0;
}

ehupm_status ehupm_predict(const ehupm_predictors* predictors, const ehupm_dataset* dataset, size_t transaction,
                           int* has_estimate, double* estimate) {
    return guarded([&] {
        require(predictors, "predictors");
        require(dataset, "dataset");
        require(has_estimate, "has_estimate");
        if (predictors->bound_to != dataset)
            throw ArgumentError("predictors are not bound to this dataset; call ehupm_predictors_bind first");
        if (transaction >= dataset->dataset.transaction_count()) throw ArgumentError("transaction index out of range");
        auto e = ehupm::predict(predictors->set, dataset->dataset,
                                ehupm::TransactionId{static_cast<std::uint32_t>(transaction)});
        *has_estimate = e ? 1 : 0;
        if (e && estimate) *estimate = *e;
    });
}

int ehupm_classify(double estimate) { return ehupm::classify(estimate); }

ehupm_status ehupm_predictors_coverage(const ehupm_predictors* predictors, const ehupm_dataset* dataset,
                                       ehupm_coverage* out) {
    return guarded([&] {
        require(predictors, "predictors");
        require(dataset, "dataset");
        require(out, "out");
        if (predictors->bound_to != dataset)
            throw ArgumentError("predictors are not bound to this dataset; call ehupm_predictors_bind first");
        auto c = ehupm::coverage_metrics(dataset->dataset, predictors->set.patterns());
        *out = {c.transactions, c.combinations};
    });
}

ehupm_status ehupm_cross_validate(const ehupm_dataset* dataset, const ehupm_predictor_config* config, size_t k,
                                  uint64_t seed, ehupm_cv** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        require(config, "config");
        *out = new ehupm_cv{ehupm::cross_validate(dataset->dataset, to_core(*config), k, seed)};
    });
}

ehupm_status ehupm_cv_get_summary(const ehupm_cv* cv, ehupm_cv_summary* out) {
    return guarded([&] {
        require(cv, "cv");
        require(out, "out");
        *out = summary_of(cv->report);
    });
}

ehupm_status ehupm_cv_get_fold(const ehupm_cv* cv, size_t i, ehupm_fold* out) {
    return guarded([&] {
        require(cv, "cv");
        require(out, "out");
        if (i >= cv->report.folds.size()) throw ArgumentError("fold index out of range");
        const auto& f = cv->report.folds[i];
        *out = {f.test_transactions, f.attempted, f.correct, f.predictors, f.accuracy, f.missing_rate, f.flagged ? 1 : 0};
    });
}

void ehupm_cv_free(ehupm_cv* cv) { delete cv; }

ehupm_status ehupm_run_sweep(const ehupm_dataset* dataset, const ehupm_predictor_config* base,
                             const size_t* min_supports, size_t support_count, const double* thresholds,
                             size_t threshold_count, size_t k, uint64_t seed, ehupm_sweep** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        require(base, "base");
        if (support_count > 0) require(min_supports, "min_supports");
        if (threshold_count > 0) require(thresholds, "thresholds");
        auto cells = ehupm::sweep(dataset->dataset, to_core(*base), std::span(min_supports, support_count),
                                  std::span(thresholds, threshold_count), k, seed);
        *out = new ehupm_sweep{std::move(cells)};
    });
}

size_t ehupm_sweep_count(const ehupm_sweep* sweep) { return sweep ? sweep->cells.size() : 0; }

ehupm_status ehupm_sweep_get(const ehupm_sweep* sweep, size_t i, ehupm_sweep_cell* out) {
    return guarded([&] {
        require(sweep, "sweep");
        require(out, "out");
        if (i >= sweep->cells.size()) throw ArgumentError("sweep cell index out of range");
        const auto& c = sweep->cells[i];
        *out = {c.min_support, c.threshold, c.predictors, summary_of(c.cv), {c.coverage.transactions, c.coverage.combinations}};
    });
}

void ehupm_sweep_free(ehupm_sweep* sweep) { delete sweep; }

} // extern "C"
