#include "bnsmc.h"

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bnsmc/model.hpp"
#include "bnsmc/oracle.hpp"
#include "bnsmc/runner.hpp"

struct bnsmc_model {
    bnsmc::Model model;
};

namespace {

thread_local std::string g_last_error;

bnsmc_status status_from(const bnsmc::Error& e) {
    using bnsmc::ErrorCode;
    switch (e.code()) {
        case ErrorCode::BadArgument: return BNSMC_ERROR_BAD_ARGUMENT;
        case ErrorCode::Condition1Violated: return BNSMC_ERROR_CONDITION1_VIOLATED;
        case ErrorCode::Condition2Violated: return BNSMC_ERROR_CONDITION2_VIOLATED;
        case ErrorCode::NegativeRate: return BNSMC_ERROR_NEGATIVE_RATE;
        case ErrorCode::NonpositiveOneMinusTheta: return BNSMC_ERROR_NONPOSITIVE_ONE_MINUS_THETA;
        case ErrorCode::ArStall: return BNSMC_ERROR_AR_STALL;
        case ErrorCode::QuadratureFailure: return BNSMC_ERROR_QUADRATURE_FAILURE;
        case ErrorCode::Internal: return BNSMC_ERROR_INTERNAL;
    }
    return BNSMC_ERROR_INTERNAL;
}

template <class Fn>
bnsmc_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BNSMC_OK;
    } catch (const bnsmc::Error& e) {
        g_last_error = e.what();
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BNSMC_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return BNSMC_ERROR_INTERNAL;
    }
}

bnsmc_status fail(bnsmc_status status, const char* message) {
    g_last_error = message;
    return status;
}

bnsmc::ModelParams to_params(const bnsmc_params& p) {
    bnsmc::ModelParams out;
    out.s0 = p.s0;
    out.sigma0_sq = p.sigma0_sq;
    out.lambda = p.lambda;
    out.a = p.a;
    out.b = p.b;
    out.rho = p.rho;
    out.alpha = p.alpha;
    out.horizon = p.horizon;
    return out;
}

}  // namespace

extern "C" {

const char* bnsmc_version(void) { return "1.0.0"; }

const char* bnsmc_status_name(bnsmc_status status) {
    switch (status) {
        case BNSMC_OK: return "OK";
        case BNSMC_ERROR_BAD_ARGUMENT: return "BAD_ARGUMENT";
        case BNSMC_ERROR_CONDITION1_VIOLATED: return "CONDITION1_VIOLATED";
        case BNSMC_ERROR_CONDITION2_VIOLATED: return "CONDITION2_VIOLATED";
        case BNSMC_ERROR_NEGATIVE_RATE: return "NEGATIVE_RATE";
        case BNSMC_ERROR_NONPOSITIVE_ONE_MINUS_THETA: return "NONPOSITIVE_1_MINUS_THETA";
        case BNSMC_ERROR_AR_STALL: return "AR_STALL";
        case BNSMC_ERROR_QUADRATURE_FAILURE: return "QUADRATURE_FAILURE";
        case BNSMC_ERROR_INTERNAL: return "INTERNAL";
    }
    return "UNKNOWN";
}

const char* bnsmc_last_error(void) { return g_last_error.c_str(); }

bnsmc_status bnsmc_assumption_check(const bnsmc_params* params, bnsmc_assumption_report* report) {
    if (!params || !report) return fail(BNSMC_ERROR_BAD_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const bnsmc::AssumptionReport r = bnsmc::check_assumption(to_params(*params));
        report->condition1_lhs = r.condition1_lhs;
        report->condition1_rhs = r.condition1_rhs;
        report->condition1_margin = r.margin1();
        report->condition2_ratio = r.condition2_ratio;
        report->condition2_bound = r.condition2_bound;
        report->condition2_margin = r.margin2();
        report->condition1_ok = r.condition1_ok ? 1 : 0;
        report->condition2_ok = r.condition2_ok ? 1 : 0;
    });
}

bnsmc_status bnsmc_model_create(const bnsmc_params* params, bnsmc_model** model) {
    if (!params || !model) return fail(BNSMC_ERROR_BAD_ARGUMENT, "null pointer argument");
    *model = nullptr;
    return guarded([&] {
        *model = new bnsmc_model{bnsmc::Model::validate(to_params(*params))};
    });
}

void bnsmc_model_free(bnsmc_model* model) { delete model; }

bnsmc_status bnsmc_model_constants_get(const bnsmc_model* model, bnsmc_model_constants* constants) {
    if (!model || !constants) return fail(BNSMC_ERROR_BAD_ARGUMENT, "null pointer argument");
    constants->c1_rho = model->model.levy_moment_1();
    constants->c2_rho = model->model.levy_moment_2();
    constants->beta = model->model.beta();
    constants->mu = model->model.mu();
    return BNSMC_OK;
}

bnsmc_status bnsmc_acceptance_probability(const bnsmc_model* model, int m, double delta,
                                          double* probability) {
    if (!model || !probability) return fail(BNSMC_ERROR_BAD_ARGUMENT, "null pointer argument");
    return guarded([&] { *probability = bnsmc::acceptance_probability(m, model->model, delta); });
}

bnsmc_status bnsmc_run(const bnsmc_model* model, const bnsmc_run_config* config,
                       const bnsmc_request* requests, size_t n_requests, bnsmc_estimate* results,
                       bnsmc_run_stats* stats) {
    if (!model || !config || !requests || !results) {
        return fail(BNSMC_ERROR_BAD_ARGUMENT, "null pointer argument");
    }
    if (n_requests == 0) return fail(BNSMC_ERROR_BAD_ARGUMENT, "no estimands requested");
    return guarded([&] {
        bnsmc::RunConfig run;
        switch (config->algorithm) {
            case BNSMC_ALGO_WEIGHTED: run.method = bnsmc::Method::Algo1; break;
            case BNSMC_ALGO_DIRECT: run.method = bnsmc::Method::Algo2; break;
            default: throw bnsmc::Error(bnsmc::ErrorCode::BadArgument, "algorithm must be 1 or 2");
        }
        run.steps = config->steps;
        run.paths = config->paths;
        run.seed = config->seed;
        run.workers = config->workers;

        std::vector<bnsmc::RunRequest> reqs(n_requests);
        for (size_t i = 0; i < n_requests; ++i) {
            switch (requests[i].estimand) {
                case BNSMC_ESTIMAND_TERMINAL_MEAN: reqs[i].estimand = bnsmc::Estimand::TerminalMean; break;
                case BNSMC_ESTIMAND_ASIAN_MEAN: reqs[i].estimand = bnsmc::Estimand::AsianMean; break;
                case BNSMC_ESTIMAND_EURO_CALL: reqs[i].estimand = bnsmc::Estimand::EuroCall; break;
                case BNSMC_ESTIMAND_ASIAN_CALL: reqs[i].estimand = bnsmc::Estimand::AsianCall; break;
                default: throw bnsmc::Error(bnsmc::ErrorCode::BadArgument, "unknown estimand");
            }
            reqs[i].strike = requests[i].strike;
        }

        const bnsmc::RunResult result = bnsmc::run_simulation(model->model, run, reqs);
        for (size_t i = 0; i < n_requests; ++i) {
            const bnsmc::EstimateReport& rep = result.reports[i];
            results[i].estimand = requests[i].estimand;
            results[i].algorithm = config->algorithm;
            results[i].point = rep.point;
            results[i].std_error = rep.std_error;
            results[i].error_percent = rep.error_percent;
            results[i].strike = rep.strike;
            results[i].wall_time_sec = rep.wall_time_sec;
            results[i].alpha = rep.meta.alpha;
            results[i].steps = rep.meta.steps;
            results[i].paths = rep.meta.paths;
            results[i].seed = rep.meta.seed;
        }
        if (stats) {
            stats->jumps1 = result.diagnostics.jumps1;
            stats->jumps3 = result.diagnostics.jumps3;
            stats->ar_proposals = result.diagnostics.ar_proposals;
            stats->mean_terminal_weight = result.diagnostics.mean_terminal_weight;
            stats->wall_time_sec = result.wall_time_sec;
        }
    });
}

bnsmc_status bnsmc_oracle_checks(const bnsmc_model* model, double delta,
                                 bnsmc_oracle_result* results, size_t capacity, size_t* count) {
    if (!model || !count) return fail(BNSMC_ERROR_BAD_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const std::vector<bnsmc::oracle::OracleCheck> checks =
            bnsmc::oracle::run_oracle_checks(model->model, delta);
        *count = checks.size();
        if (!results) return;
        if (capacity < checks.size()) {
            throw bnsmc::Error(bnsmc::ErrorCode::BadArgument, "result buffer too small");
        }
        for (size_t i = 0; i < checks.size(); ++i) {
            std::snprintf(results[i].name, sizeof(results[i].name), "%s", checks[i].name.c_str());
            results[i].reference = checks[i].reference;
            results[i].value = checks[i].value;
            results[i].rel_err = checks[i].rel_err;
            results[i].tolerance = checks[i].tolerance;
            results[i].pass = checks[i].pass ? 1 : 0;
        }
    });
}

}  // extern "C"
