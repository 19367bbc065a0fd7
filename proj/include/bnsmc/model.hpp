#pragma once

// IG-OU model parameters, validity conditions, and the closed-form constants
// attached to the jump measure
//     nu(dx) = lambda a / (2 sqrt(2 pi)) x^{-3/2} (1 + b^2 x) e^{-b^2 x / 2} dx.
// Everything here is deterministic; the samplers live elsewhere.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "bnsmc/errors.hpp"
#include "bnsmc/quadrature.hpp"

namespace bnsmc {

struct ModelParams {
    double s0 = 0.0;         // spot price, > 0
    double sigma0_sq = 0.0;  // initial squared volatility, > 0
    double lambda = 0.0;     // mean-reversion / time-scale, > 0
    double a = 0.0;          // IG parameter, > 0
    double b = 0.0;          // IG parameter, > 0
    double rho = 0.0;        // leverage loading on jumps, <= 0
    double alpha = 0.0;      // drift of the asset price
    double horizon = 0.0;    // maturity T in years, > 0
};

// Validity of the parameter set: both inequalities must hold for the
// weighted-path scheme to produce a true martingale reweighting.
struct AssumptionReport {
    double condition1_lhs = 0.0;    // b^2 / 2
    double condition1_rhs = 0.0;    // 2 max((1 - e^{-lambda T}) / lambda, |rho|)
    double condition2_ratio = 0.0;  // alpha / (e^{-lambda T} sigma0^2 + C2)
    double condition2_bound = -1.0;
    bool condition1_ok = false;
    bool condition2_ok = false;

    bool ok() const { return condition1_ok && condition2_ok; }
    double margin1() const { return condition1_lhs - condition1_rhs; }
    double margin2() const { return condition2_ratio - condition2_bound; }
};

AssumptionReport check_assumption(const ModelParams& params);

// Validated parameter set plus the cached jump-measure moments.
class Model {
public:
    // Throws Error with BadArgument / Condition1Violated / Condition2Violated.
    static Model validate(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    double beta() const { return beta_; }                  // b^2 / 2
    double levy_moment_1() const { return c1_rho_; }       // int (e^{rho x} - 1) nu(dx)
    double levy_moment_2() const { return c2_rho_; }       // int (e^{rho x} - 1)^2 nu(dx)
    double mu() const { return mu_; }                      // alpha - C1

    // Jump measure density; x must be > 0.
    double levy_density(double x) const;

    // Scalar loading of the measure change, alpha / (sigma^2 + C2).
    double k_factor(double sigma_sq) const;

private:
    Model(const ModelParams& params);

    ModelParams params_;
    double beta_ = 0.0;
    double c1_rho_ = 0.0;
    double c2_rho_ = 0.0;
    double mu_ = 0.0;
};

// Uniform time grid: t_k = k * delta with delta = horizon / steps.
struct GridSpec {
    std::uint64_t steps = 0;
    double delta = 0.0;
    double horizon = 0.0;

    static GridSpec uniform(double horizon, std::uint64_t steps);
    double time(std::uint64_t k) const { return static_cast<double>(k) * delta; }
};

// Everything that depends only on (model, delta), cached once per run and
// shared read-only across worker threads.
class StepConstants {
public:
    StepConstants(const Model& model, double delta);

    double delta() const { return delta_; }
    double w() const { return w_; }                      // e^{-lambda delta}
    double sqrt_w() const { return sqrt_w_; }
    double lambda() const { return lambda_; }
    double rho() const { return rho_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double mu() const { return mu_; }
    double c1_rho() const { return c1_rho_; }
    double c2_rho() const { return c2_rho_; }

    // one-step law of sigma^2 under the physical measure
    double ig_mean() const { return ig_mean_; }            // a (1 - sqrt w) / b
    double ig_shape() const { return ig_shape_; }          // a^2 (1 - sqrt w)^2
    double bdl_poisson_rate() const { return bdl_rate_; }  // a b (1 - sqrt w)
    double bdl_poisson_p0() const { return bdl_p0_; }      // e^{-rate}, cached for the sampler
    // scale factor of the compound term: V = (1 + 2 (1/sqrt w - 1) U)^2
    double compound_scale(double u) const {
        const double base = 1.0 + 2.0 * em1_ * u;
        return base * base;
    }
    double compound_scale_max() const { return compound_scale(1.0); }

    // corrected-measure jump machinery
    double ar_mass(int m) const;                     // C_m = int f_m
    double rate1_per_k() const { return rate1_per_k_; }  // a beta / sqrt(2 pi) * C_1
    double rate3_per_k() const { return rate3_per_k_; }  // a / (2 sqrt(2 pi)) * C_3
    double acceptance_probability(int m) const;

    // f~_m, its envelope g_m, and the shared proposal density g~.
    double f_tilde(int m, double y) const;
    double g_envelope(int m, double y) const;
    double g_tilde(double y) const;

    // Acceptance ratio f~_m(y) / g_m(y) in [0, 1]; the normalization C_m
    // cancels, so only the short z-integral is evaluated. A 12-node rule with
    // a 6-node error check covers the analytic integrand; if the pair ever
    // disagrees beyond the tolerance the generic adaptive routine takes over.
    double jump_density_ratio(int m, double y) const;

private:
    double z_integral(int m, double y) const;  // int_1^{1/w} (1 - e^{rho y z}) z^{-m/2} e^{-beta y (z-1)} dz

    double delta_, w_, sqrt_w_, em1_;  // em1 = 1/sqrt(w) - 1 = e^{lambda delta / 2} - 1
    double lambda_, rho_, alpha_, a_, beta_, mu_, c1_rho_, c2_rho_;
    double ig_mean_, ig_shape_, bdl_rate_, bdl_p0_;
    double c1_mass_, c3_mass_;
    double rate1_per_k_, rate3_per_k_;
    double accept1_, accept3_;

    // 12/6-node Gauss-Legendre pair mapped onto [1, 1/w], with the z^{-m/2}
    // factors folded into the cached weights.
    std::array<double, 12> zi_{};
    std::array<double, 12> wz1_{};  // weight * z^{-1/2}
    std::array<double, 12> wz3_{};  // weight * z^{-3/2}
    std::array<double, 6> zi6_{};
    std::array<double, 6> wz1_6_{};
    std::array<double, 6> wz3_6_{};
};

// --- module operations -------------------------------------------------

double levy_moment_1(const Model& model);
double levy_moment_2(const Model& model);
double k_factor(double sigma_sq, const Model& model);
double ar_mass(int m, const Model& model, double delta);
double f_tilde(int m, double y, const Model& model, double delta);
double g_envelope(int m, double y, const Model& model, double delta);
double g_tilde(double y, const Model& model);
double acceptance_probability(int m, const Model& model, double delta);

// --- inline hot path ----------------------------------------------------

inline double StepConstants::z_integral(int m, double y) const {
    // smooth integrand on a short interval; the pair difference is the
    // error estimate for the 12-node value
    const auto eval = [&](const double* z, const double* wz, std::size_t n) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double one_minus = -std::expm1(rho_ * y * z[i]);
            acc += wz[i] * one_minus * std::exp(-beta_ * y * (z[i] - 1.0));
        }
        return acc;
    };
    const double fine = eval(zi_.data(), m == 1 ? wz1_.data() : wz3_.data(), zi_.size());
    const double coarse = eval(zi6_.data(), m == 1 ? wz1_6_.data() : wz3_6_.data(), zi6_.size());
    if (std::abs(fine - coarse) <= 1e-12) return fine;
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    const double mexp = -0.5 * static_cast<double>(m);
    return integrate(
        [&](double z) {
            return -std::expm1(rho_ * y * z) * std::pow(z, mexp) * std::exp(-beta_ * y * (z - 1.0));
        },
        1.0, 1.0 / w_, spec);
}

inline double StepConstants::jump_density_ratio(int m, double y) const {
    if (m != 1 && m != 3) throw Error(ErrorCode::BadArgument, "jump_density_ratio: m must be 1 or 3");
    if (!(y > 0.0)) throw Error(ErrorCode::BadArgument, "jump_density_ratio: y must be > 0");
    if (m == 3) {
        // y -> 0: (1 - e^{rho y z}) ~ |rho| y z makes the ratio tend to 1
        if (y < 1e-12) return 1.0;
        return z_integral(3, y) / (2.0 * (-rho_) * em1_ * y);
    }
    return z_integral(1, y) / (2.0 * em1_);
}

}  // namespace bnsmc
