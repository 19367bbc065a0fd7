#pragma once

// Full-path simulation engines.
//
// Algorithm 1 evolves (S, Z, sigma^2) under the physical measure: the density
// process Z reweights terminal functionals into changed-measure expectations.
// All jumps inside a step are merged into a single jump of the subordinator,
// which is accurate for small alpha only.
//
// Algorithm 2 evolves (S, sigma^2) under the changed measure directly, with
// the corrected sigma^2 step and the matching drift.
//
// Both engines stream their state through an observer callback so estimators
// can fold running averages without materializing paths; the recording
// variants below return full grids. State evolves in logs and is
// exponentiated on output.

#include <cstdint>
#include <vector>

#include "bnsmc/mmm.hpp"

namespace bnsmc {

struct PathP {
    std::vector<double> s;
    std::vector<double> z;
    std::vector<double> sigma_sq;
};

struct PathPstar {
    std::vector<double> s;
    std::vector<double> sigma_sq;
};

struct EngineDiagnostics {
    std::uint64_t jumps1 = 0;
    std::uint64_t jumps3 = 0;
    std::uint64_t ar_proposals = 0;
};

// Observer signature: obs(k, s_k, z_k, sigma_sq_k), called for k = 0..steps.
template <class Observer>
void run_algo1(const StepConstants& sc, const GridSpec& grid, double s0, double sigma0_sq,
               RngStream& stream, Observer&& obs) {
    const double delta = grid.delta;
    double log_s = std::log(s0);
    double log_z = 0.0;
    double sig2 = sigma0_sq;
    obs(std::uint64_t{0}, s0, 1.0, sig2);
    for (std::uint64_t k = 0; k < grid.steps; ++k) {
        const double sig = std::sqrt(sig2);
        const double sig2_next = step_sigma2_p(sig2, sc, stream);
        const double wn = sample_normal(stream, delta);
        const double dsig2 = sig2_next - sig2;
        log_s += sig * wn + sc.rho() * dsig2 + (sc.mu() - 0.5 * sig2 + sc.rho() * sc.lambda() * sig2) * delta;
        const double kf = sc.alpha() / (sig2 + sc.c2_rho());
        const double dh = dsig2 + sc.lambda() * sig2 * delta;  // subordinator increment proxy
        const double theta = kf * std::expm1(sc.rho() * dh);
        if (!(theta < 1.0)) {
            throw Error(ErrorCode::NonpositiveOneMinusTheta,
                        "algo1: 1 - theta <= 0 at step " + std::to_string(k) +
                            "; alpha is outside the regime this scheme supports (use algo2)");
        }
        log_z += -kf * sig * wn + std::log1p(-theta) + (-0.5 * kf * kf * sig2 + kf * sc.c1_rho()) * delta;
        sig2 = sig2_next;
        obs(k + 1, std::exp(log_s), std::exp(log_z), sig2);
    }
}

// Observer signature: obs(k, s_k, sigma_sq_k), called for k = 0..steps.
template <class Observer>
void run_algo2(const StepConstants& sc, const GridSpec& grid, double s0, double sigma0_sq,
               RngStream& stream, Observer&& obs, EngineDiagnostics* diag = nullptr) {
    const double delta = grid.delta;
    double log_s = std::log(s0);
    double sig2 = sigma0_sq;
    obs(std::uint64_t{0}, s0, sig2);
    for (std::uint64_t k = 0; k < grid.steps; ++k) {
        const double sig = std::sqrt(sig2);
        const double kf = sc.alpha() / (sig2 + sc.c2_rho());
        const double wn = sample_normal(stream, delta);
        double sig2_next;
        try {
            const SigmaStepPstar step = step_sigma2_pstar_parts(sig2, kf, sc, stream);
            sig2_next = step.value();
            if (diag) {
                diag->jumps1 += step.jumps.n1;
                diag->jumps3 += step.jumps.n3;
                diag->ar_proposals += step.jumps.proposals_used;
            }
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (step " + std::to_string(k) + ")");
        }
        log_s += (-0.5 * sig2 + sc.rho() * sc.lambda() * sig2 - sc.c1_rho() + kf * sc.c2_rho()) * delta +
                 sig * wn + sc.rho() * (sig2_next - sig2);
        sig2 = sig2_next;
        obs(k + 1, std::exp(log_s), sig2);
    }
}

PathP simulate_path_algo1(const Model& model, const GridSpec& grid, RngStream& stream);
PathPstar simulate_path_algo2(const Model& model, const GridSpec& grid, RngStream& stream);

}  // namespace bnsmc
