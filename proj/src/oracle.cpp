#include "bnsmc/oracle.hpp"

#include <cmath>

namespace bnsmc {
namespace oracle {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

QuadratureSpec tighter(const QuadratureSpec& spec, double factor) {
    QuadratureSpec inner = spec;
    inner.abs_tol = spec.abs_tol / factor;
    inner.rel_tol = spec.rel_tol / factor;
    return inner;
}

}  // namespace

double f_m_numeric(int m, double y, const Model& model, double delta, const QuadratureSpec& spec) {
    if (m != 1 && m != 3) throw Error(ErrorCode::BadArgument, "f_m_numeric: m must be 1 or 3");
    if (!(y > 0.0)) throw Error(ErrorCode::BadArgument, "f_m_numeric: y must be > 0");
    const double rho = model.params().rho;
    const double beta = model.beta();
    const double inv_w = std::exp(model.params().lambda * delta);
    const double mexp = -0.5 * static_cast<double>(m);
    return integrate(
        [&](double z) {
            return -std::expm1(rho * y * z) * std::pow(y * z, mexp) * std::exp(-beta * y * z);
        },
        1.0, inv_w, spec);
}

double ar_mass_quadrature(int m, const Model& model, double delta, const QuadratureSpec& spec) {
    const double beta = model.beta();
    const double s_max = std::sqrt(90.0 / beta);
    const QuadratureSpec inner = tighter(spec, 10.0);
    return integrate(
        [&](double s) {
            return f_m_numeric(m, s * s, model, delta, inner) * 2.0 * s;
        },
        0.0, s_max, spec);
}

double g_envelope_integral(int m, const Model& model, double delta, const QuadratureSpec& spec) {
    const StepConstants sc(model, delta);
    const double beta = model.beta();
    const double s_max = std::sqrt(90.0 / beta);
    return integrate(
        [&](double s) {
            return sc.g_envelope(m, s * s) * 2.0 * s;
        },
        0.0, s_max, spec);
}

double laplace_sigma2_p(double v, double sigma_sq_prev, double delta, const Model& model,
                        const QuadratureSpec& spec) {
    if (!(v > 0.0)) throw Error(ErrorCode::BadArgument, "laplace_sigma2_p: v must be > 0");
    const double lambda = model.params().lambda;
    const double w = std::exp(-lambda * delta);
    const QuadratureSpec inner = tighter(spec, 10.0);
    const double outer = integrate(
        [&](double u) {
            const double inner_val =
                quad_levy_integral([&](double x) { return -std::expm1(-u * x); }, model, inner);
            return inner_val / u;
        },
        v * w, v, spec);
    return std::exp(-v * w * sigma_sq_prev) * std::exp(-outer / lambda);
}

double laplace_sigma2_pstar(double v, double sigma_sq_prev, double k, double delta,
                            const Model& model, const QuadratureSpec& spec) {
    if (!(k >= 0.0)) throw Error(ErrorCode::BadArgument, "laplace_sigma2_pstar: k must be >= 0");
    const double base = laplace_sigma2_p(v, sigma_sq_prev, delta, model, spec);
    if (k == 0.0) return base;
    const double a = model.params().a;
    const double beta = model.beta();
    const double s_max = std::sqrt(90.0 / beta);
    const QuadratureSpec inner = tighter(spec, 10.0);
    const auto correction = [&](int m) {
        return integrate(
            [&](double s) {
                const double y = s * s;
                return -std::expm1(-v * y) * f_m_numeric(m, y, model, delta, inner) * 2.0 * s;
            },
            0.0, s_max, spec);
    };
    const double coef1 = a * beta / std::sqrt(2.0 * kPi);
    const double coef3 = a / (2.0 * std::sqrt(2.0 * kPi));
    return base * std::exp(-k * coef1 * correction(1)) * std::exp(-k * coef3 * correction(3));
}

FTildeCdf::FTildeCdf(int m, const Model& model, double delta, const QuadratureSpec& spec)
    : m_(m), model_(model), delta_(delta), spec_(spec),
      mass_(ar_mass_quadrature(m, model, delta, spec)) {
    if (!(mass_ > 0.0)) {
        throw Error(ErrorCode::BadArgument, "FTildeCdf: zero jump mass (rho = 0?)");
    }
}

double FTildeCdf::operator()(double y) const {
    if (!(y >= 0.0)) throw Error(ErrorCode::BadArgument, "FTildeCdf: y must be >= 0");
    if (y == 0.0) return 0.0;
    const double s_hi = std::min(std::sqrt(y), std::sqrt(90.0 / model_.beta()));
    const QuadratureSpec inner = tighter(spec_, 10.0);
    const double partial = integrate(
        [&](double s) {
            return f_m_numeric(m_, s * s, model_, delta_, inner) * 2.0 * s;
        },
        0.0, s_hi, spec_);
    return std::min(partial / mass_, 1.0);
}

OracleCheck agreement_check(const std::string& name, double reference, double value,
                            double tolerance) {
    OracleCheck check;
    check.name = name;
    check.reference = reference;
    check.value = value;
    check.tolerance = tolerance;
    const double scale = std::abs(reference);
    check.rel_err = scale > 0.0 ? std::abs(value - reference) / scale : std::abs(value - reference);
    check.pass = check.rel_err <= tolerance;
    return check;
}

std::vector<OracleCheck> run_oracle_checks(const Model& model, double delta,
                                           const QuadratureSpec& spec) {
    std::vector<OracleCheck> checks;
    const ModelParams& p = model.params();
    const StepConstants sc(model, delta);
    const bool has_jump_correction = p.rho < 0.0;

    checks.push_back(agreement_check(
        "levy_moment_1", model.levy_moment_1(),
        quad_levy_integral([&](double x) { return std::expm1(p.rho * x); }, model, spec), 1e-8));
    checks.push_back(agreement_check(
        "levy_moment_2", model.levy_moment_2(),
        quad_levy_integral(
            [&](double x) {
                const double e = std::expm1(p.rho * x);
                return e * e;
            },
            model, spec),
        1e-8));
    checks.push_back(agreement_check(
        "mean_jump_rate", p.lambda * p.a / p.b,
        quad_levy_integral([](double x) { return x; }, model, spec), 1e-8));
    checks.push_back(agreement_check("ar_mass_1", sc.ar_mass(1),
                                     ar_mass_quadrature(1, model, delta, spec), 1e-8));
    checks.push_back(agreement_check("ar_mass_3", sc.ar_mass(3),
                                     ar_mass_quadrature(3, model, delta, spec), 1e-8));

    if (has_jump_correction) {
        checks.push_back(agreement_check(
            "acceptance_identity_1", 1.0,
            sc.acceptance_probability(1) * g_envelope_integral(1, model, delta, spec), 1e-8));
        checks.push_back(agreement_check(
            "acceptance_identity_3", 1.0,
            sc.acceptance_probability(3) * g_envelope_integral(3, model, delta, spec), 1e-8));

        const double beta = model.beta();
        const double s_max = std::sqrt(90.0 / beta);
        for (int m : {1, 3}) {
            checks.push_back(agreement_check(
                "f_tilde_normalization_" + std::to_string(m), 1.0,
                integrate([&](double s) { return sc.f_tilde(m, s * s) * 2.0 * s; }, 0.0, s_max,
                          spec),
                1e-8));
        }

        // envelope domination on a dense log grid; reported value is the
        // largest ratio f~_m / g_m seen (must stay <= 1)
        for (int m : {1, 3}) {
            double worst = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double y = std::pow(10.0, -8.0 + 8.0 * static_cast<double>(i) / 1000.0);
                worst = std::max(worst, sc.f_tilde(m, y) / sc.g_envelope(m, y));
            }
            OracleCheck check;
            check.name = "envelope_domination_" + std::to_string(m);
            check.reference = 1.0;
            check.value = worst;
            check.tolerance = 1e-9;
            check.rel_err = std::max(0.0, worst - 1.0);
            check.pass = worst <= 1.0 + check.tolerance;
            checks.push_back(check);
        }
    }
    return checks;
}

}  // namespace oracle
}  // namespace bnsmc
