#include "bnsmc/igou.hpp"

namespace bnsmc {

SigmaStepP step_sigma2_p_parts(double sigma_sq_prev, const StepConstants& sc, RngStream& stream) {
    if (!(sigma_sq_prev > 0.0)) {
        throw Error(ErrorCode::BadArgument, "step_sigma2_p: sigma_sq_prev must be > 0");
    }
    SigmaStepP step;
    step.decayed = sc.w() * sigma_sq_prev;
    step.ig_increment = sample_inverse_gaussian(stream, sc.ig_mean(), sc.ig_shape());
    step.jump_count = sample_poisson_with_p0(stream, sc.bdl_poisson_rate(), sc.bdl_poisson_p0());
    for (std::uint64_t n = 0; n < step.jump_count; ++n) {
        const double u = stream.next_uniform();
        const double beta_scaled = sc.beta() * sc.compound_scale(u);
        step.compound_increment += sample_gamma_half(stream, 1.0 / beta_scaled);
    }
    return step;
}

}  // namespace bnsmc
