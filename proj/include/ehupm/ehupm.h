/* C interface to the ehupm mining engine.
 *
 * All functions returning ehupm_status leave a message retrievable through
 * ehupm_last_error() on failure. Handles are opaque and owned by the caller;
 * release them with the matching *_free function. Strings returned by
 * accessors stay valid until the owning handle is freed.
 */
#ifndef EHUPM_H
#define EHUPM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EHUPM_BUILDING)
#    define EHUPM_API __declspec(dllexport)
#  else
#    define EHUPM_API __declspec(dllimport)
#  endif
#else
#  define EHUPM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ehupm_status {
    EHUPM_OK = 0,
    EHUPM_ERR_PARSE = 1,      /* malformed fact file or predictor file */
    EHUPM_ERR_VALIDATION = 2, /* well-formed input that violates the schema or a precondition */
    EHUPM_ERR_ARGUMENT = 3,   /* null pointer, index out of range, bad enum value */
    EHUPM_ERR_IO = 4,
    EHUPM_ERR_RUNTIME = 5
} ehupm_status;

typedef enum ehupm_level {
    EHUPM_LEVEL_ITEM = 0,
    EHUPM_LEVEL_TRANSACTION = 1,
    EHUPM_LEVEL_OBJECT = 2,
    EHUPM_LEVEL_CONTAINER = 3
} ehupm_level;

typedef enum ehupm_mode {
    EHUPM_MODE_ITEMSET = 0,
    EHUPM_MODE_SEQUENCE = 1,
    EHUPM_MODE_CONTIGUOUS_SEQUENCE = 2
} ehupm_mode;

EHUPM_API const char* ehupm_version(void);
/* Message of the last failure on the calling thread; "" when none. */
EHUPM_API const char* ehupm_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

typedef struct ehupm_dataset ehupm_dataset;

typedef struct ehupm_dataset_stats {
    size_t containers; /* including the implicit one created for object/1 facts */
    size_t explicit_containers;
    size_t objects;
    size_t transactions;
    size_t items;
    size_t dims[4]; /* l, m, n, o */
    int has_category_map;
} ehupm_dataset_stats;

/* Loads and merges fact files. `renames` is NULL or a comma separated list of
 * from=to predicate renames applied before assembly. */
EHUPM_API ehupm_status ehupm_dataset_load(const char* const* paths, size_t count, const char* renames,
                                          ehupm_dataset** out);
EHUPM_API ehupm_status ehupm_dataset_parse(const char* text, const char* renames, ehupm_dataset** out);
EHUPM_API void ehupm_dataset_free(ehupm_dataset* dataset);

EHUPM_API ehupm_status ehupm_dataset_get_stats(const ehupm_dataset* dataset, ehupm_dataset_stats* out);
/* NULL when out of range. */
EHUPM_API const char* ehupm_dataset_item_name(const ehupm_dataset* dataset, size_t item);
EHUPM_API const char* ehupm_dataset_transaction_name(const ehupm_dataset* dataset, size_t transaction);
/* "" when no label was declared; NULL when out of range. */
EHUPM_API const char* ehupm_dataset_facet_label(const ehupm_dataset* dataset, ehupm_level level, size_t index);
/* Transaction facet values (m of them); NULL when out of range. */
EHUPM_API const double* ehupm_dataset_transaction_facets(const ehupm_dataset* dataset, size_t transaction);
/* Facet values of the object owning `transaction` (n of them). */
EHUPM_API const double* ehupm_dataset_object_facets(const ehupm_dataset* dataset, size_t transaction);

/* ---- mining ------------------------------------------------------------ */

typedef struct ehupm_mine_config {
    size_t min_support;
    double min_utility;     /* a pattern needs u(P) > min_utility */
    size_t min_length;
    size_t max_length;
    ehupm_mode mode;
    const char* utility;    /* NULL: frequency only. e.g. "hfirst:filter(obj.0):max" */
    const char* intra;      /* NULL or sum | max | min | avg */
    const char* filter;     /* NULL or all | nonzero(tx.0) | disagree(tx.2>0, cont.0=0) */
    const char* const* masks; /* e.g. "size:2..4", "cover:noun,verb@3" */
    size_t mask_count;
    size_t threads;         /* 0: hardware concurrency */
} ehupm_mine_config;

EHUPM_API void ehupm_mine_config_init(ehupm_mine_config* config);

typedef struct ehupm_result ehupm_result;

typedef struct ehupm_diagnostics {
    size_t candidates;
    size_t undefined_utility;
    size_t useful_items;
    double seconds;
} ehupm_diagnostics;

EHUPM_API ehupm_status ehupm_mine(const ehupm_dataset* dataset, const ehupm_mine_config* config, ehupm_result** out);
/* Checks a configuration against a dataset without mining. */
EHUPM_API ehupm_status ehupm_mine_validate(const ehupm_dataset* dataset, const ehupm_mine_config* config);
EHUPM_API void ehupm_result_free(ehupm_result* result);

EHUPM_API size_t ehupm_result_count(const ehupm_result* result);
/* Item ids of pattern i, in pattern order; *size receives the length. */
EHUPM_API const uint32_t* ehupm_result_items(const ehupm_result* result, size_t i, size_t* size);
/* Ids of the supporting transactions, ascending. */
EHUPM_API const uint32_t* ehupm_result_support(const ehupm_result* result, size_t i, size_t* count);
/* Returns 1 and writes *value when a utility was evaluated for pattern i. */
EHUPM_API int ehupm_result_utility(const ehupm_result* result, size_t i, double* value);
/* "{a, b}" for itemsets, "<a, b>" for sequences. */
EHUPM_API const char* ehupm_result_text(const ehupm_result* result, size_t i);
EHUPM_API ehupm_status ehupm_result_diagnostics(const ehupm_result* result, ehupm_diagnostics* out);

/* ---- prediction -------------------------------------------------------- */

typedef struct ehupm_predictor_config {
    const size_t* target_facets; /* NULL or empty: every transaction facet */
    size_t target_count;
    size_t object_facet;
    size_t min_support;
    double min_abs_gamma;
    size_t min_length;
    size_t max_length;
    const char* filter;
    size_t threads;
} ehupm_predictor_config;

EHUPM_API void ehupm_predictor_config_init(ehupm_predictor_config* config);

typedef struct ehupm_predictors ehupm_predictors;

typedef struct ehupm_predictor_info {
    size_t item_count;
    size_t facet;
    size_t support;
    double gamma;
    double slope;
    double intercept;
    int bound;
} ehupm_predictor_info;

EHUPM_API ehupm_status ehupm_predictors_build(const ehupm_dataset* dataset, const ehupm_predictor_config* config,
                                              ehupm_predictors** out);
EHUPM_API ehupm_status ehupm_predictors_save(const ehupm_predictors* predictors, const char* path);
/* The loaded set is unbound until ehupm_predictors_bind is called. */
EHUPM_API ehupm_status ehupm_predictors_load(const char* path, ehupm_predictors** out);
EHUPM_API ehupm_status ehupm_predictors_bind(ehupm_predictors* predictors, const ehupm_dataset* dataset);
EHUPM_API void ehupm_predictors_free(ehupm_predictors* predictors);

EHUPM_API size_t ehupm_predictors_count(const ehupm_predictors* predictors);
EHUPM_API ehupm_status ehupm_predictors_get(const ehupm_predictors* predictors, size_t i, ehupm_predictor_info* out);
EHUPM_API const char* ehupm_predictors_item(const ehupm_predictors* predictors, size_t i, size_t j);
EHUPM_API size_t ehupm_predictors_object_facet(const ehupm_predictors* predictors);

/* *has_estimate is 0 when no predictor matches the transaction. The set must
 * be bound to `dataset`. */
EHUPM_API ehupm_status ehupm_predict(const ehupm_predictors* predictors, const ehupm_dataset* dataset,
                                     size_t transaction, int* has_estimate, double* estimate);
EHUPM_API int ehupm_classify(double estimate);

typedef struct ehupm_coverage {
    double transactions;
    double combinations;
} ehupm_coverage;

EHUPM_API ehupm_status ehupm_predictors_coverage(const ehupm_predictors* predictors, const ehupm_dataset* dataset,
                                                 ehupm_coverage* out);

/* ---- evaluation -------------------------------------------------------- */

typedef struct ehupm_fold {
    size_t test_transactions;
    size_t attempted;
    size_t correct;
    size_t predictors;
    double accuracy;
    double missing_rate;
    int flagged; /* no prediction attempted; accuracy counted as 0 */
} ehupm_fold;

typedef struct ehupm_cv_summary {
    size_t folds;
    double mean_accuracy;
    double accuracy_variance;
    double missing_rate;
} ehupm_cv_summary;

typedef struct ehupm_cv ehupm_cv;

EHUPM_API ehupm_status ehupm_cross_validate(const ehupm_dataset* dataset, const ehupm_predictor_config* config,
                                            size_t k, uint64_t seed, ehupm_cv** out);
EHUPM_API ehupm_status ehupm_cv_get_summary(const ehupm_cv* cv, ehupm_cv_summary* out);
EHUPM_API ehupm_status ehupm_cv_get_fold(const ehupm_cv* cv, size_t i, ehupm_fold* out);
EHUPM_API void ehupm_cv_free(ehupm_cv* cv);

typedef struct ehupm_sweep_cell {
    size_t min_support;
    double threshold;
    size_t predictors;
    ehupm_cv_summary cv;
    ehupm_coverage coverage;
} ehupm_sweep_cell;

typedef struct ehupm_sweep ehupm_sweep;

EHUPM_API ehupm_status ehupm_run_sweep(const ehupm_dataset* dataset, const ehupm_predictor_config* base,
                                       const size_t* min_supports, size_t support_count, const double* thresholds,
                                       size_t threshold_count, size_t k, uint64_t seed, ehupm_sweep** out);
EHUPM_API size_t ehupm_sweep_count(const ehupm_sweep* sweep);
EHUPM_API ehupm_status ehupm_sweep_get(const ehupm_sweep* sweep, size_t i, ehupm_sweep_cell* out);
EHUPM_API void ehupm_sweep_free(ehupm_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif
