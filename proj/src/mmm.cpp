#include "bnsmc/mmm.hpp"

namespace bnsmc {

namespace {
constexpr std::uint64_t kArStallLimit = 10'000'000;
}

double sample_jump_adjustment(int m, const StepConstants& sc, RngStream& stream,
                              std::uint64_t* proposals_used) {
    if (m != 1 && m != 3) throw Error(ErrorCode::BadArgument, "sample_jump_adjustment: m must be 1 or 3");
    if (!(sc.rho() < 0.0)) {
        throw Error(ErrorCode::BadArgument, "sample_jump_adjustment: requires rho < 0");
    }
    const double gamma_scale = 1.0 / sc.beta();
    for (std::uint64_t trial = 1; trial <= kArStallLimit; ++trial) {
        const double y = sample_gamma_half(stream, gamma_scale);
        const double u = stream.next_uniform();
        if (y > 0.0 && u <= sc.jump_density_ratio(m, y)) {
            if (proposals_used) *proposals_used += trial;
            return y;
        }
    }
    throw Error(ErrorCode::ArStall, "sample_jump_adjustment: 1e7 proposals rejected; envelope is broken");
}

SigmaStepPstar step_sigma2_pstar_parts(double sigma_sq_prev, double k_prev, const StepConstants& sc,
                                       RngStream& stream) {
    if (!(k_prev >= 0.0)) {
        throw Error(ErrorCode::NegativeRate,
                    "step_sigma2_pstar: corrected jump intensity is negative (alpha < 0 is not "
                    "supported by the direct scheme)");
    }
    SigmaStepPstar step;
    step.jumps.n1 = sample_poisson(stream, k_prev * sc.rate1_per_k());
    for (std::uint64_t i = 0; i < step.jumps.n1; ++i) {
        step.jumps.sum1 += sample_jump_adjustment(1, sc, stream, &step.jumps.proposals_used);
    }
    step.jumps.n3 = sample_poisson(stream, k_prev * sc.rate3_per_k());
    for (std::uint64_t i = 0; i < step.jumps.n3; ++i) {
        step.jumps.sum3 += sample_jump_adjustment(3, sc, stream, &step.jumps.proposals_used);
    }
    step.p_step = step_sigma2_p_parts(sigma_sq_prev, sc, stream);
    return step;
}

}  // namespace bnsmc
