/* C interface to the bnsmc simulation library.
 *
 * The library simulates the IG-OU stochastic volatility model under its
 * minimal-martingale change of measure and estimates price functionals by
 * Monte Carlo. All state lives behind the opaque bnsmc_model handle; every
 * call returns a status code, with a thread-local detail message available
 * from bnsmc_last_error(). Runs are deterministic in (seed, steps, paths)
 * regardless of the worker count.
 */

#ifndef BNSMC_H
#define BNSMC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BNSMC_API __declspec(dllexport)
#else
#define BNSMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bnsmc_status {
    BNSMC_OK = 0,
    BNSMC_ERROR_BAD_ARGUMENT = 1,
    BNSMC_ERROR_CONDITION1_VIOLATED = 2,
    BNSMC_ERROR_CONDITION2_VIOLATED = 3,
    BNSMC_ERROR_NEGATIVE_RATE = 4,
    BNSMC_ERROR_NONPOSITIVE_ONE_MINUS_THETA = 5,
    BNSMC_ERROR_AR_STALL = 6,
    BNSMC_ERROR_QUADRATURE_FAILURE = 7,
    BNSMC_ERROR_INTERNAL = 8
} bnsmc_status;

typedef enum bnsmc_algorithm {
    BNSMC_ALGO_WEIGHTED = 1, /* joint (S, Z) paths under the physical measure */
    BNSMC_ALGO_DIRECT = 2    /* S paths under the changed measure */
} bnsmc_algorithm;

typedef enum bnsmc_estimand {
    BNSMC_ESTIMAND_TERMINAL_MEAN = 0,
    BNSMC_ESTIMAND_ASIAN_MEAN = 1,
    BNSMC_ESTIMAND_EURO_CALL = 2,
    BNSMC_ESTIMAND_ASIAN_CALL = 3
} bnsmc_estimand;

typedef struct bnsmc_params {
    double s0;         /* spot price, > 0 */
    double sigma0_sq;  /* initial squared volatility, > 0 */
    double lambda;     /* mean-reversion rate, > 0 */
    double a;          /* IG parameter, > 0 */
    double b;          /* IG parameter, > 0 */
    double rho;        /* jump leverage, <= 0 */
    double alpha;      /* asset drift */
    double horizon;    /* maturity in years, > 0 */
} bnsmc_params;

typedef struct bnsmc_assumption_report {
    double condition1_lhs;   /* b^2 / 2 */
    double condition1_rhs;   /* 2 max((1 - e^{-lambda T}) / lambda, |rho|) */
    double condition1_margin;
    double condition2_ratio; /* alpha / (e^{-lambda T} sigma0^2 + C2) */
    double condition2_bound; /* -1 */
    double condition2_margin;
    int condition1_ok;
    int condition2_ok;
} bnsmc_assumption_report;

typedef struct bnsmc_model_constants {
    double c1_rho; /* first exponential moment of the jump measure */
    double c2_rho; /* second exponential moment */
    double beta;   /* b^2 / 2 */
    double mu;     /* alpha - c1_rho */
} bnsmc_model_constants;

typedef struct bnsmc_run_config {
    int algorithm;      /* bnsmc_algorithm */
    uint64_t steps;     /* M >= 1 */
    uint64_t paths;     /* L >= 2 */
    uint64_t seed;
    int workers;        /* 0 = auto */
} bnsmc_run_config;

typedef struct bnsmc_request {
    int estimand;  /* bnsmc_estimand */
    double strike; /* required > 0 for option estimands, ignored otherwise */
} bnsmc_request;

typedef struct bnsmc_estimate {
    int estimand;
    int algorithm;
    double point;
    double std_error;
    double error_percent; /* (s0 - point) / s0 * 100; NaN for option prices */
    double strike;        /* NaN for mean estimands */
    double wall_time_sec;
    double alpha;
    uint64_t steps;
    uint64_t paths;
    uint64_t seed;
} bnsmc_estimate;

typedef struct bnsmc_run_stats {
    uint64_t jumps1;        /* correction jumps with density f~_1 */
    uint64_t jumps3;        /* correction jumps with density f~_3 */
    uint64_t ar_proposals;  /* proposals consumed by acceptance/rejection */
    double mean_terminal_weight; /* sample mean of Z_T; 1 for the direct scheme */
    double wall_time_sec;
} bnsmc_run_stats;

typedef struct bnsmc_oracle_result {
    char name[48];
    double reference; /* closed-form value */
    double value;     /* independent quadrature value */
    double rel_err;
    double tolerance;
    int pass;
} bnsmc_oracle_result;

typedef struct bnsmc_model bnsmc_model; /* opaque */

BNSMC_API const char* bnsmc_version(void);
BNSMC_API const char* bnsmc_status_name(bnsmc_status status);

/* Detail message for the most recent failure on this thread ("" if none). */
BNSMC_API const char* bnsmc_last_error(void);

/* Evaluates both validity conditions without creating a model. */
BNSMC_API bnsmc_status bnsmc_assumption_check(const bnsmc_params* params,
                                              bnsmc_assumption_report* report);

/* Validates the parameters; on success *model owns the handle. */
BNSMC_API bnsmc_status bnsmc_model_create(const bnsmc_params* params, bnsmc_model** model);
BNSMC_API void bnsmc_model_free(bnsmc_model* model);

BNSMC_API bnsmc_status bnsmc_model_constants_get(const bnsmc_model* model,
                                                 bnsmc_model_constants* constants);

/* Acceptance probability of the jump-size rejection sampler (m = 1 or 3). */
BNSMC_API bnsmc_status bnsmc_acceptance_probability(const bnsmc_model* model, int m, double delta,
                                                    double* probability);

/* Runs one Monte Carlo simulation and fills one estimate per request.
 * results must have room for n_requests entries; stats may be NULL. */
BNSMC_API bnsmc_status bnsmc_run(const bnsmc_model* model, const bnsmc_run_config* config,
                                 const bnsmc_request* requests, size_t n_requests,
                                 bnsmc_estimate* results, bnsmc_run_stats* stats);

/* Closed-form vs quadrature agreement battery. Call with results = NULL to
 * query the number of checks for this model. Returns BNSMC_OK even when
 * individual checks fail; inspect the pass flags. */
BNSMC_API bnsmc_status bnsmc_oracle_checks(const bnsmc_model* model, double delta,
                                           bnsmc_oracle_result* results, size_t capacity,
                                           size_t* count);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BNSMC_H */
