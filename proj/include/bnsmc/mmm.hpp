#pragma once

// sigma^2 transition under the changed measure: the physical-measure step
// plus two compound Poisson corrections whose jump sizes follow f~_1 and
// f~_3, sampled by acceptance/rejection from the shared Gamma(1/2, 1/beta)
// proposal.

#include <cstdint>

#include "bnsmc/igou.hpp"
#include "bnsmc/model.hpp"
#include "bnsmc/rng.hpp"

namespace bnsmc {

struct JumpAdjustment {
    std::uint64_t n1 = 0;
    std::uint64_t n3 = 0;
    double sum1 = 0.0;
    double sum3 = 0.0;
    std::uint64_t proposals_used = 0;  // efficiency diagnostics

    double total() const { return sum1 + sum3; }
};

// One accepted draw from f~_m (m = 1 or 3). Unreachable for rho = 0 in the
// engines, since both Poisson rates vanish; calling it anyway is an error.
// Throws Error(ArStall) if 10^7 proposals are rejected, which indicates a
// broken envelope rather than bad luck.
double sample_jump_adjustment(int m, const StepConstants& sc, RngStream& stream,
                              std::uint64_t* proposals_used = nullptr);

struct SigmaStepPstar {
    JumpAdjustment jumps;
    SigmaStepP p_step;

    double value() const { return p_step.value() + jumps.total(); }
};

// k_prev is the measure-change loading alpha / (sigma^2_prev + C2), frozen at
// the left endpoint of the step. Throws Error(NegativeRate) for k_prev < 0.
SigmaStepPstar step_sigma2_pstar_parts(double sigma_sq_prev, double k_prev, const StepConstants& sc,
                                       RngStream& stream);

inline double step_sigma2_pstar(double sigma_sq_prev, double k_prev, const StepConstants& sc,
                                RngStream& stream) {
    return step_sigma2_pstar_parts(sigma_sq_prev, k_prev, sc, stream).value();
}

}  // namespace bnsmc
