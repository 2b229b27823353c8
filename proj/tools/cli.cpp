#include "cli.hpp"

#include "ehupm/ehupm.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

namespace ehupm::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Failure {
    ehupm_status status;
    std::string message;
};

void check(ehupm_status status) {
    if (status != EHUPM_OK) throw Failure{status, ehupm_last_error()};
}

[[noreturn]] void usage(std::string message) { throw Failure{EHUPM_ERR_VALIDATION, std::move(message)}; }

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<ehupm_dataset, Deleter<ehupm_dataset, ehupm_dataset_free>>;
using ResultPtr = std::unique_ptr<ehupm_result, Deleter<ehupm_result, ehupm_result_free>>;
using PredictorsPtr = std::unique_ptr<ehupm_predictors, Deleter<ehupm_predictors, ehupm_predictors_free>>;
using CvPtr = std::unique_ptr<ehupm_cv, Deleter<ehupm_cv, ehupm_cv_free>>;
using SweepPtr = std::unique_ptr<ehupm_sweep, Deleter<ehupm_sweep, ehupm_sweep_free>>;

// ---- option bundles ------------------------------------------------------

struct Common {
    std::vector<std::string> files;
    std::vector<std::string> renames;
    std::string format = "table";
    std::string out;
    std::size_t threads = 0;
};

struct MineOptions {
    std::size_t min_occ = 1;
    double min_util = 0.0;
    std::string size = "1..3";
    std::string mode = "itemset";
    std::string filter;
    std::string utility;
    std::string intra;
    std::vector<std::string> masks;
};

struct PredictOptions {
    std::size_t min_occ = 10;
    double pearson = 0.5;
    std::string targets;
    std::size_t object_facet = 0;
    std::string size = "1..3";
    std::string filter;
    std::string model;
    std::string save_model;
    std::size_t k = 5;
    std::uint64_t seed = 1;
    std::string occ_list = "10";
    std::string pearson_list = "0.5";
};

struct BenchOptions {
    std::size_t repeat = 3;
    std::string thread_counts = "1";
};

// Result of one command before rendering.
struct Output {
    Json doc;
    std::vector<std::string> columns;
};

// ---- small parsers -------------------------------------------------------

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        part = trim(part);
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::size_t to_size(const std::string& text, const char* what) {
    std::size_t pos = 0;
    try {
        if (!text.empty() && text[0] != '-') {
            auto v = std::stoull(text, &pos);
            if (pos == text.size()) return static_cast<std::size_t>(v);
        }
    } catch (const std::exception&) {
    }
    usage(std::string("bad ") + what + ": '" + text + "'");
}

double to_double(const std::string& text, const char* what) {
    std::size_t pos = 0;
    try {
        double v = std::stod(text, &pos);
        if (pos == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    usage(std::string("bad ") + what + ": '" + text + "'");
}

std::pair<std::size_t, std::size_t> size_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        auto v = to_size(trim(text), "size");
        return {v, v};
    }
    return {to_size(trim(text.substr(0, dots)), "size"), to_size(trim(text.substr(dots + 2)), "size")};
}

std::vector<std::size_t> size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (const auto& p : split(text, ',')) out.push_back(to_size(p, what));
    return out;
}

// "a..b:step" or "a,b,c".
std::vector<double> threshold_list(const std::string& text) {
    std::vector<double> out;
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        for (const auto& p : split(text, ',')) out.push_back(to_double(p, "threshold"));
        return out;
    }
    auto colon = text.find(':', dots);
    if (colon == std::string::npos) usage("threshold range must look like 0.5..1.0:0.1");
    const double lo = to_double(trim(text.substr(0, dots)), "threshold");
    const double hi = to_double(trim(text.substr(dots + 2, colon - dots - 2)), "threshold");
    const double step = to_double(trim(text.substr(colon + 1)), "threshold step");
    if (!(step > 0.0) || hi < lo) usage("threshold range needs lo <= hi and a positive step");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    return out;
}

ehupm_mode mode_of(const std::string& text) {
    if (text == "itemset") return EHUPM_MODE_ITEMSET;
    if (text == "sequence") return EHUPM_MODE_SEQUENCE;
    if (text == "contiguous") return EHUPM_MODE_CONTIGUOUS_SEQUENCE;
    usage("mode must be itemset, sequence or contiguous");
}

// ---- shared building blocks ---------------------------------------------

DatasetPtr load(const Common& common) {
    std::vector<const char*> paths;
    for (const auto& f : common.files) paths.push_back(f.c_str());
    std::string renames;
    for (const auto& r : common.renames) renames += (renames.empty() ? "" : ",") + r;
    ehupm_dataset* ds = nullptr;
    check(ehupm_dataset_load(paths.data(), paths.size(), renames.empty() ? nullptr : renames.c_str(), &ds));
    return DatasetPtr(ds);
}

Json dataset_json(const ehupm_dataset* ds) {
    ehupm_dataset_stats s{};
    check(ehupm_dataset_get_stats(ds, &s));
    Json j;
    j["containers"] = s.explicit_containers;
    j["objects"] = s.objects;
    j["transactions"] = s.transactions;
    j["items"] = s.items;
    j["facets"] = {{"item", s.dims[0]}, {"transaction", s.dims[1]}, {"object", s.dims[2]}, {"container", s.dims[3]}};
    return j;
}

struct MineRequest {
    ehupm_mine_config config{};
    std::vector<const char*> masks;
};

MineRequest mine_request(const MineOptions& o, std::size_t threads) {
    MineRequest r;
    ehupm_mine_config_init(&r.config);
    auto [lo, hi] = size_range(o.size);
    r.config.min_support = o.min_occ;
    r.config.min_utility = o.min_util;
    r.config.min_length = lo;
    r.config.max_length = hi;
    r.config.mode = mode_of(o.mode);
    r.config.utility = o.utility.empty() ? nullptr : o.utility.c_str();
    r.config.intra = o.intra.empty() ? nullptr : o.intra.c_str();
    r.config.filter = o.filter.empty() ? nullptr : o.filter.c_str();
    for (const auto& m : o.masks) r.masks.push_back(m.c_str());
    r.config.masks = r.masks.data();
    r.config.mask_count = r.masks.size();
    r.config.threads = threads;
    if (!o.intra.empty() && o.utility.empty()) usage("--intra needs --utility");
    return r;
}

Json mine_config_json(const MineOptions& o) {
    Json j;
    j["min_occ"] = o.min_occ;
    j["min_util"] = o.min_util;
    j["size"] = o.size;
    j["mode"] = o.mode;
    j["filter"] = o.filter.empty() ? "all" : o.filter;
    j["utility"] = o.utility.empty() ? Json(nullptr) : Json(o.utility);
    j["intra"] = o.intra.empty() ? "sum" : o.intra;
    j["masks"] = o.masks;
    return j;
}

struct PredictRequest {
    ehupm_predictor_config config{};
    std::vector<std::size_t> targets;
};

PredictRequest predict_request(const PredictOptions& o, std::size_t threads) {
    PredictRequest r;
    ehupm_predictor_config_init(&r.config);
    r.targets = size_list(o.targets, "target facet");
    auto [lo, hi] = size_range(o.size);
    r.config.target_facets = r.targets.data();
    r.config.target_count = r.targets.size();
    r.config.object_facet = o.object_facet;
    r.config.min_support = o.min_occ;
    r.config.min_abs_gamma = o.pearson;
    r.config.min_length = lo;
    r.config.max_length = hi;
    r.config.filter = o.filter.empty() ? nullptr : o.filter.c_str();
    r.config.threads = threads;
    return r;
}

Json predict_config_json(const PredictOptions& o) {
    Json j;
    j["min_occ"] = o.min_occ;
    j["pearson"] = o.pearson;
    j["targets"] = o.targets.empty() ? "all" : o.targets;
    j["object_facet"] = o.object_facet;
    j["size"] = o.size;
    j["filter"] = o.filter.empty() ? "all" : o.filter;
    return j;
}

PredictorsPtr obtain_predictors(const ehupm_dataset* ds, const PredictOptions& o, std::size_t threads) {
    ehupm_predictors* p = nullptr;
    if (!o.model.empty()) {
        check(ehupm_predictors_load(o.model.c_str(), &p));
        PredictorsPtr owned(p);
        check(ehupm_predictors_bind(owned.get(), ds));
        return owned;
    }
    auto req = predict_request(o, threads);
    check(ehupm_predictors_build(ds, &req.config, &p));
    PredictorsPtr owned(p);
    if (!o.save_model.empty()) check(ehupm_predictors_save(owned.get(), o.save_model.c_str()));
    return owned;
}

Json cv_summary_json(const ehupm_cv_summary& s) {
    return {{"folds", s.folds},
            {"mean_accuracy", s.mean_accuracy},
            {"accuracy_variance", s.accuracy_variance},
            {"missing_rate", s.missing_rate}};
}

Output start(const char* command, const ehupm_dataset* ds, Json config) {
    Output o;
    o.doc["command"] = command;
    o.doc["config"] = std::move(config);
    o.doc["dataset"] = dataset_json(ds);
    o.doc["results"] = Json::array();
    return o;
}

// ---- commands ------------------------------------------------------------

Output cmd_stats(const Common& c) {
    auto ds = load(c);
    Output o = start("stats", ds.get(), Json::object());
    o.columns = {"level", "index", "label"};
    ehupm_dataset_stats s{};
    check(ehupm_dataset_get_stats(ds.get(), &s));
    const char* names[] = {"item", "transaction", "object", "container"};
    for (int level = 0; level < 4; ++level)
        for (std::size_t i = 0; i < s.dims[level]; ++i)
            o.doc["results"].push_back(
                {{"level", names[level]},
                 {"index", i},
                 {"label", ehupm_dataset_facet_label(ds.get(), static_cast<ehupm_level>(level), i)}});
    o.doc["diagnostics"] = {{"implicit_container", s.containers != s.explicit_containers},
                            {"category_map", s.has_category_map != 0}};
    return o;
}

Output cmd_mine(const Common& c, const MineOptions& m) {
    auto ds = load(c);
    auto req = mine_request(m, c.threads);
    Output o = start("mine", ds.get(), mine_config_json(m));
    o.columns = {"pattern", "size", "support", "utility", "transactions"};
    ehupm_result* raw = nullptr;
    check(ehupm_mine(ds.get(), &req.config, &raw));
    ResultPtr result(raw);
    for (std::size_t i = 0; i < ehupm_result_count(result.get()); ++i) {
        std::size_t len = 0, count = 0;
        ehupm_result_items(result.get(), i, &len);
        const auto* tids = ehupm_result_support(result.get(), i, &count);
        Json names = Json::array();
        for (std::size_t t = 0; t < count; ++t) names.push_back(ehupm_dataset_transaction_name(ds.get(), tids[t]));
        double u = 0.0;
        Json row;
        row["pattern"] = ehupm_result_text(result.get(), i);
        row["size"] = len;
        row["support"] = count;
        row["utility"] = ehupm_result_utility(result.get(), i, &u) ? Json(u) : Json(nullptr);
        row["transactions"] = std::move(names);
        o.doc["results"].push_back(std::move(row));
    }
    ehupm_diagnostics d{};
    check(ehupm_result_diagnostics(result.get(), &d));
    o.doc["diagnostics"] = {{"patterns", ehupm_result_count(result.get())},
                            {"candidates", d.candidates},
                            {"undefined_utility", d.undefined_utility},
                            {"useful_items", d.useful_items},
                            {"seconds", d.seconds}};
    return o;
}

Output cmd_predict(const Common& c, const PredictOptions& p) {
    auto ds = load(c);
    Output o = start("predict", ds.get(), predict_config_json(p));
    o.columns = {"transaction", "estimate", "class", "actual"};
    auto predictors = obtain_predictors(ds.get(), p, c.threads);
    const std::size_t facet = ehupm_predictors_object_facet(predictors.get());
    ehupm_dataset_stats s{};
    check(ehupm_dataset_get_stats(ds.get(), &s));
    std::size_t attempted = 0, correct = 0;
    for (std::size_t t = 0; t < s.transactions; ++t) {
        int has = 0;
        double estimate = 0.0;
        check(ehupm_predict(predictors.get(), ds.get(), t, &has, &estimate));
        const double actual = ehupm_dataset_object_facets(ds.get(), t)[facet];
        Json row;
        row["transaction"] = ehupm_dataset_transaction_name(ds.get(), t);
        row["estimate"] = has ? Json(estimate) : Json(nullptr);
        row["class"] = has ? Json(ehupm_classify(estimate)) : Json(nullptr);
        row["actual"] = actual;
        if (has) {
            ++attempted;
            if (static_cast<double>(ehupm_classify(estimate)) == actual) ++correct;
        }
        o.doc["results"].push_back(std::move(row));
    }
    const double n = static_cast<double>(s.transactions);
    o.doc["summary"] = {{"predictors", ehupm_predictors_count(predictors.get())},
                        {"attempted", attempted},
                        {"accuracy", attempted ? static_cast<double>(correct) / static_cast<double>(attempted) : 0.0},
                        {"missing_rate", n > 0 ? (n - static_cast<double>(attempted)) / n : 0.0}};
    return o;
}

Output cmd_cv(const Common& c, const PredictOptions& p) {
    auto ds = load(c);
    Json config = predict_config_json(p);
    config["k"] = p.k;
    config["seed"] = p.seed;
    Output o = start("cv", ds.get(), std::move(config));
    o.columns = {"fold", "test_transactions", "attempted", "correct", "predictors", "accuracy", "missing_rate", "flagged"};
    auto req = predict_request(p, c.threads);
    ehupm_cv* raw = nullptr;
    check(ehupm_cross_validate(ds.get(), &req.config, p.k, p.seed, &raw));
    CvPtr cv(raw);
    ehupm_cv_summary s{};
    check(ehupm_cv_get_summary(cv.get(), &s));
    for (std::size_t f = 0; f < s.folds; ++f) {
        ehupm_fold fold{};
        check(ehupm_cv_get_fold(cv.get(), f, &fold));
        o.doc["results"].push_back({{"fold", f},
                                    {"test_transactions", fold.test_transactions},
                                    {"attempted", fold.attempted},
                                    {"correct", fold.correct},
                                    {"predictors", fold.predictors},
                                    {"accuracy", fold.accuracy},
                                    {"missing_rate", fold.missing_rate},
                                    {"flagged", fold.flagged != 0}});
    }
    o.doc["summary"] = cv_summary_json(s);
    return o;
}

Output cmd_coverage(const Common& c, const PredictOptions& p) {
    auto ds = load(c);
    Output o = start("coverage", ds.get(), predict_config_json(p));
    o.columns = {"predictors", "patterns_source", "transaction_coverage", "combination_coverage"};
    auto predictors = obtain_predictors(ds.get(), p, c.threads);
    ehupm_coverage cov{};
    check(ehupm_predictors_coverage(predictors.get(), ds.get(), &cov));
    o.doc["results"].push_back({{"predictors", ehupm_predictors_count(predictors.get())},
                                {"patterns_source", p.model.empty() ? "mined" : "model"},
                                {"transaction_coverage", cov.transactions},
                                {"combination_coverage", cov.combinations}});
    return o;
}

Output cmd_sweep(const Common& c, const PredictOptions& p) {
    auto ds = load(c);
    const auto occs = size_list(p.occ_list, "occurrence threshold");
    const auto thresholds = threshold_list(p.pearson_list);
    Json config = predict_config_json(p);
    config.erase("min_occ");
    config.erase("pearson");
    config["min_occ"] = occs;
    config["pearson"] = thresholds;
    config["k"] = p.k;
    config["seed"] = p.seed;
    Output o = start("sweep", ds.get(), std::move(config));
    o.columns = {"min_occ", "threshold", "metric", "value"};
    auto req = predict_request(p, c.threads);
    ehupm_sweep* raw = nullptr;
    check(ehupm_run_sweep(ds.get(), &req.config, occs.data(), occs.size(), thresholds.data(), thresholds.size(), p.k,
                          p.seed, &raw));
    SweepPtr sweep(raw);
    for (std::size_t i = 0; i < ehupm_sweep_count(sweep.get()); ++i) {
        ehupm_sweep_cell cell{};
        check(ehupm_sweep_get(sweep.get(), i, &cell));
        const std::pair<const char*, Json> metrics[] = {
            {"accuracy", cell.cv.mean_accuracy},
            {"accuracy_variance", cell.cv.accuracy_variance},
            {"missing_rate", cell.cv.missing_rate},
            {"transaction_coverage", cell.coverage.transactions},
            {"combination_coverage", cell.coverage.combinations},
            {"predictors", cell.predictors},
        };
        for (const auto& [name, value] : metrics)
            o.doc["results"].push_back(
                {{"min_occ", cell.min_support}, {"threshold", cell.threshold}, {"metric", name}, {"value", value}});
    }
    return o;
}

Output cmd_bench(const Common& c, const MineOptions& m, const BenchOptions& b) {
    auto ds = load(c);
    Json config = mine_config_json(m);
    config["repeat"] = b.repeat;
    Output o = start("bench", ds.get(), std::move(config));
    o.columns = {"threads", "patterns", "best_seconds", "mean_seconds"};
    if (b.repeat == 0) usage("--repeat must be >= 1");
    std::optional<std::size_t> reference;
    bool identical = true;
    for (std::size_t threads : size_list(b.thread_counts, "thread count")) {
        if (threads == 0) usage("thread counts must be >= 1");
        auto req = mine_request(m, threads);
        double best = 0.0, total = 0.0;
        std::size_t patterns = 0;
        for (std::size_t r = 0; r < b.repeat; ++r) {
            ehupm_result* raw = nullptr;
            const auto t0 = std::chrono::steady_clock::now();
            check(ehupm_mine(ds.get(), &req.config, &raw));
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ResultPtr result(raw);
            patterns = ehupm_result_count(result.get());
            best = r == 0 ? secs : std::min(best, secs);
            total += secs;
        }
        if (reference && *reference != patterns) identical = false;
        reference = patterns;
        o.doc["results"].push_back({{"threads", threads},
                                    {"patterns", patterns},
                                    {"best_seconds", best},
                                    {"mean_seconds", total / static_cast<double>(b.repeat)}});
    }
    o.doc["diagnostics"] = {{"identical_pattern_counts", identical}};
    return o;
}

// ---- rendering -----------------------------------------------------------

std::string cell_text(const Json& v, bool precise) {
    if (v.is_null()) return precise ? "" : "-";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
        if (precise) return v.dump();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
        return buf;
    }
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : " ") + cell_text(e, precise);
        return s;
    }
    return v.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string render_csv(const Output& o) {
    std::string s;
    for (std::size_t i = 0; i < o.columns.size(); ++i) s += (i ? "," : "") + o.columns[i];
    s += "\n";
    for (const auto& row : o.doc["results"]) {
        for (std::size_t i = 0; i < o.columns.size(); ++i)
            s += (i ? "," : "") + csv_field(cell_text(row[o.columns[i]], true));
        s += "\n";
    }
    return s;
}

std::string render_block(const char* title, const Json& j) {
    std::string s = std::string(title) + ":";
    for (const auto& [k, v] : j.items()) s += " " + k + "=" + (v.is_object() ? v.dump() : cell_text(v, false));
    return s + "\n";
}

std::string render_table(const Output& o) {
    std::string s = render_block("dataset", o.doc["dataset"]);
    std::vector<std::vector<std::string>> cells;
    cells.push_back(o.columns);
    for (const auto& row : o.doc["results"]) {
        std::vector<std::string> line;
        for (const auto& col : o.columns) line.push_back(cell_text(row[col], false));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(o.columns.size(), 0);
    for (const auto& line : cells)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    for (const auto& line : cells) {
        std::string text;
        for (std::size_t i = 0; i < line.size(); ++i) {
            text += line[i];
            if (i + 1 < line.size()) text += std::string(width[i] - line[i].size() + 2, ' ');
        }
        s += text + "\n";
    }
    if (o.doc.contains("summary")) s += render_block("summary", o.doc["summary"]);
    if (o.doc.contains("diagnostics")) s += render_block("diagnostics", o.doc["diagnostics"]);
    return s;
}

void emit(const Output& o, const Common& c, std::ostream& out) {
    std::string text;
    if (c.format == "json") text = o.doc.dump(2) + "\n";
    else if (c.format == "csv") text = render_csv(o);
    else text = render_table(o);
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file || !(file << text) || !file.flush()) throw Failure{EHUPM_ERR_IO, "cannot write '" + c.out + "'"};
}

void add_files(CLI::App* sub, Common& c) {
    sub->add_option("facts", c.files, "Fact files, merged in order")->required()->check(CLI::ExistingFile);
}

void add_mining(CLI::App* sub, MineOptions& m) {
    sub->add_option("--min-occ", m.min_occ, "Occurrence threshold th_f (>= 1)")->capture_default_str();
    sub->add_option("--min-util", m.min_util, "Utility threshold th_u; patterns need u > th_u")->capture_default_str();
    sub->add_option("--size", m.size, "Pattern size range a..b")->capture_default_str();
    sub->add_option("--mode", m.mode, "itemset | sequence | contiguous")
        ->check(CLI::IsMember({"itemset", "sequence", "contiguous"}))
        ->capture_default_str();
    sub->add_option("--filter", m.filter, "Item filter: all | nonzero(tx[.i]) | disagree(cond, cond)");
    sub->add_option("--utility", m.utility,
                    "Utility function, e.g. hfirst:filter(obj.0):max, vfirst:max:filter(obj.0), "
                    "hfirst:disagree(tx.2>0, cont.0=0), mixed:pearson(tx.1, obj.0)");
    sub->add_option("--intra", m.intra, "Intra-pattern aggregator: sum | max | min | avg");
    sub->add_option("--mask", m.masks, "Pattern mask (repeatable): size:a..b | cover:c1,c2@k");
}

void add_prediction(CLI::App* sub, PredictOptions& p, bool lists) {
    if (lists) {
        sub->add_option("--min-occ", p.occ_list, "Occurrence thresholds, e.g. 5,10,15")->capture_default_str();
        sub->add_option("--pearson", p.pearson_list, "|Pearson| thresholds: a..b:step or a,b,c")->capture_default_str();
    } else {
        sub->add_option("--min-occ", p.min_occ, "Occurrence threshold for predictor patterns")->capture_default_str();
        sub->add_option("--pearson", p.pearson, "Minimum |Pearson| between facet and object facet")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
    }
    sub->add_option("--targets", p.targets, "Transaction facets to correlate, e.g. 0,3,7 (default all)");
    sub->add_option("--object-facet", p.object_facet, "Object facet to predict")->capture_default_str();
    sub->add_option("--size", p.size, "Pattern size range a..b")->capture_default_str();
    sub->add_option("--filter", p.filter, "Item filter for predictor patterns");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extended high-utility pattern mining over multi-layer transaction databases", "ehupm"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(ehupm_version()));

    Common common;
    MineOptions mine;
    PredictOptions predict;
    BenchOptions bench;

    app.add_option("--rename", common.renames, "Predicate rename from=to (repeatable), applied before assembly");
    app.add_option("--format", common.format, "Output format: table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", common.out, "Write output to this file instead of stdout");
    app.add_option("--threads", common.threads, "Worker threads (default: hardware concurrency)")
        ->envname("EHUPM_THREADS")
        ->check(CLI::PositiveNumber);

    auto* stats = app.add_subcommand("stats", "Dataset counts, facet dimensions and labels");
    add_files(stats, common);

    auto* mine_cmd = app.add_subcommand("mine", "Mine patterns meeting frequency, utility and mask constraints");
    add_files(mine_cmd, common);
    add_mining(mine_cmd, mine);

    auto* predict_cmd = app.add_subcommand("predict", "Estimate the object facet of every transaction");
    add_files(predict_cmd, common);
    add_prediction(predict_cmd, predict, false);
    predict_cmd->add_option("--model", predict.model, "Load predictors from this file instead of mining");
    predict_cmd->add_option("--save-model", predict.save_model, "Save the mined predictors to this file");

    auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation of the predictor ensemble over objects");
    add_files(cv_cmd, common);
    add_prediction(cv_cmd, predict, false);
    cv_cmd->add_option("--k", predict.k, "Number of folds (>= 2)")->capture_default_str();
    cv_cmd->add_option("--seed", predict.seed, "Fold assignment seed")->capture_default_str();

    auto* coverage_cmd = app.add_subcommand("coverage", "Transaction and combination coverage of predictor patterns");
    add_files(coverage_cmd, common);
    add_prediction(coverage_cmd, predict, false);
    coverage_cmd->add_option("--model", predict.model, "Load predictors from this file instead of mining");

    auto* sweep_cmd = app.add_subcommand("sweep", "Cross-validation and coverage over a threshold grid (long format)");
    add_files(sweep_cmd, common);
    add_prediction(sweep_cmd, predict, true);
    sweep_cmd->add_option("--k", predict.k, "Number of folds (>= 2)")->capture_default_str();
    sweep_cmd->add_option("--seed", predict.seed, "Fold assignment seed")->capture_default_str();

    auto* bench_cmd = app.add_subcommand("bench", "Time mining runs across thread counts");
    add_files(bench_cmd, common);
    add_mining(bench_cmd, mine);
    bench_cmd->add_option("--repeat", bench.repeat, "Runs per thread count")->capture_default_str();
    bench_cmd->add_option("--thread-counts", bench.thread_counts, "Thread counts to time, e.g. 1,2,4")
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        Output o;
        if (stats->parsed()) o = cmd_stats(common);
        else if (mine_cmd->parsed()) o = cmd_mine(common, mine);
        else if (predict_cmd->parsed()) o = cmd_predict(common, predict);
        else if (cv_cmd->parsed()) o = cmd_cv(common, predict);
        else if (coverage_cmd->parsed()) o = cmd_coverage(common, predict);
        else if (sweep_cmd->parsed()) o = cmd_sweep(common, predict);
        else o = cmd_bench(common, mine, bench);
        emit(o, common, out);
        return 0;
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        switch (f.status) {
        case EHUPM_ERR_PARSE:
        case EHUPM_ERR_VALIDATION:
        case EHUPM_ERR_ARGUMENT: return 1;
        default: return 2;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ehupm::cli
