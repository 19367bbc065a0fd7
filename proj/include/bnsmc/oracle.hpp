#pragma once

// Brute-force truth source: everything the closed forms claim is recomputed
// here by adaptive quadrature on the raw definitions, so the two routes stay
// independent. Integrals over (0, inf) substitute x = s^2 to absorb the
// x^{-1/2}-type endpoint behaviour and truncate where the e^{-beta x} tail is
// certifiably below 1e-16 of the scale (beta x > 90).

#include <string>
#include <vector>

#include "bnsmc/model.hpp"
#include "bnsmc/quadrature.hpp"

namespace bnsmc {
namespace oracle {

// integral of integrand(x) nu(dx) over (0, inf); the integrand must vanish at
// least linearly at 0 for the integral to exist (the adaptive scheme reports
// QuadratureFailure otherwise).
template <class F>
double quad_levy_integral(F&& integrand, const Model& model, const QuadratureSpec& spec = {}) {
    const double beta = model.beta();
    const double s_max = std::sqrt(90.0 / beta);
    return integrate(
        [&](double s) {
            const double x = s * s;
            return integrand(x) * model.levy_density(x) * 2.0 * s;
        },
        0.0, s_max, spec);
}

// f_m(y) from its defining z-integral, evaluated without the factorization
// used by the sampler hot path.
double f_m_numeric(int m, double y, const Model& model, double delta, const QuadratureSpec& spec = {});

// 2-D quadrature of C_m = int_0^inf f_m(y) dy.
double ar_mass_quadrature(int m, const Model& model, double delta, const QuadratureSpec& spec = {});

// int_0^inf g_m(y) dy; acceptance_probability(m) times this must equal 1.
double g_envelope_integral(int m, const Model& model, double delta, const QuadratureSpec& spec = {});

// E[e^{-v sigma^2_{t+delta}} | sigma^2_t] under the physical measure:
//   e^{-v w s2} exp{ -(1/lambda) int_{vw}^{v} (1/u) int (1 - e^{-ux}) nu(dx) du }.
double laplace_sigma2_p(double v, double sigma_sq_prev, double delta, const Model& model,
                        const QuadratureSpec& spec = {});

// Same under the changed measure with loading k: the physical transform times
// the two compound-correction factors.
double laplace_sigma2_pstar(double v, double sigma_sq_prev, double k, double delta,
                            const Model& model, const QuadratureSpec& spec = {});

// CDF of f~_m with the normalizing mass itself computed by quadrature.
class FTildeCdf {
public:
    FTildeCdf(int m, const Model& model, double delta, const QuadratureSpec& spec = {});

    double operator()(double y) const;  // P(Y <= y)
    double total_mass() const { return mass_; }

private:
    int m_;
    const Model& model_;
    double delta_;
    QuadratureSpec spec_;
    double mass_;
};

struct OracleCheck {
    std::string name;
    double reference = 0.0;  // closed-form / claimed value
    double value = 0.0;      // independently computed value
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

OracleCheck agreement_check(const std::string& name, double reference, double value, double tolerance);

// The full battery used by the oracle-check command: moment constants, jump
// masses, acceptance identities, f~ normalizations, envelope domination.
std::vector<OracleCheck> run_oracle_checks(const Model& model, double delta,
                                           const QuadratureSpec& spec = {});

}  // namespace oracle
}  // namespace bnsmc
