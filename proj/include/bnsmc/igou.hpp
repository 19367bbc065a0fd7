#pragma once

// Exact one-step transition of sigma^2 under the physical measure:
//   sigma^2_{k+1} = w sigma^2_k + X1 + X2,
// X1 inverse Gaussian, X2 a compound Poisson sum of Gamma(1/2) variables with
// randomized scale. The returned law is the exact conditional law, so delta
// can be as coarse as the grid requires.

#include <cstdint>

#include "bnsmc/model.hpp"
#include "bnsmc/rng.hpp"

namespace bnsmc {

struct SigmaStepP {
    double decayed = 0.0;             // w * sigma^2_prev
    double ig_increment = 0.0;        // X1
    double compound_increment = 0.0;  // X2 = sum of J_n
    std::uint64_t jump_count = 0;     // N

    double value() const { return decayed + ig_increment + compound_increment; }
};

SigmaStepP step_sigma2_p_parts(double sigma_sq_prev, const StepConstants& sc, RngStream& stream);

inline double step_sigma2_p(double sigma_sq_prev, const StepConstants& sc, RngStream& stream) {
    return step_sigma2_p_parts(sigma_sq_prev, sc, stream).value();
}

}  // namespace bnsmc
