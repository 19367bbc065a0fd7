#include "bnsmc/model.hpp"

#include <cmath>
#include <sstream>

namespace bnsmc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const double kSqrtPi = std::sqrt(kPi);
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

double closed_c1(const ModelParams& p) {
    // int (e^{rho x} - 1) nu(dx) = rho lambda a / sqrt(b^2 - 2 rho)
    return p.rho * p.lambda * p.a / std::sqrt(p.b * p.b - 2.0 * p.rho);
}

double closed_c2(const ModelParams& p) {
    // int (e^{rho x} - 1)^2 nu(dx)
    return 2.0 * p.rho * p.lambda * p.a *
           (1.0 / std::sqrt(p.b * p.b - 4.0 * p.rho) - 1.0 / std::sqrt(p.b * p.b - 2.0 * p.rho));
}

}  // namespace

AssumptionReport check_assumption(const ModelParams& p) {
    AssumptionReport report;
    report.condition1_lhs = 0.5 * p.b * p.b;
    report.condition1_rhs = 2.0 * std::max(-std::expm1(-p.lambda * p.horizon) / p.lambda, -p.rho);
    report.condition1_ok = report.condition1_lhs > report.condition1_rhs;
    const double denom = std::exp(-p.lambda * p.horizon) * p.sigma0_sq + closed_c2(p);
    report.condition2_ratio = p.alpha / denom;
    report.condition2_ok = report.condition2_ratio > report.condition2_bound;
    return report;
}

Model::Model(const ModelParams& params) : params_(params) {
    beta_ = 0.5 * params.b * params.b;
    c1_rho_ = closed_c1(params);
    c2_rho_ = closed_c2(params);
    mu_ = params.alpha - c1_rho_;
}

Model Model::validate(const ModelParams& p) {
    if (!positive_finite(p.s0)) throw Error(ErrorCode::BadArgument, "s0 must be finite and > 0");
    if (!positive_finite(p.sigma0_sq)) throw Error(ErrorCode::BadArgument, "sigma0_sq must be finite and > 0");
    if (!positive_finite(p.lambda)) throw Error(ErrorCode::BadArgument, "lambda must be finite and > 0");
    if (!positive_finite(p.a)) throw Error(ErrorCode::BadArgument, "a must be finite and > 0");
    if (!positive_finite(p.b)) throw Error(ErrorCode::BadArgument, "b must be finite and > 0");
    if (!positive_finite(p.horizon)) throw Error(ErrorCode::BadArgument, "horizon must be finite and > 0");
    if (!std::isfinite(p.rho) || p.rho > 0.0) throw Error(ErrorCode::BadArgument, "rho must be finite and <= 0");
    if (!std::isfinite(p.alpha)) throw Error(ErrorCode::BadArgument, "alpha must be finite");

    const AssumptionReport report = check_assumption(p);
    if (!report.condition1_ok) {
        std::ostringstream msg;
        msg << "condition 1 violated: b^2/2 = " << report.condition1_lhs
            << " must exceed 2 max((1-e^{-lambda T})/lambda, |rho|) = " << report.condition1_rhs
            << " (margin " << report.margin1() << ")";
        throw Error(ErrorCode::Condition1Violated, msg.str());
    }
    if (!report.condition2_ok) {
        std::ostringstream msg;
        msg << "condition 2 violated: alpha / (e^{-lambda T} sigma0^2 + C2) = " << report.condition2_ratio
            << " must exceed -1 (margin " << report.margin2() << ")";
        throw Error(ErrorCode::Condition2Violated, msg.str());
    }
    return Model(p);
}

double Model::levy_density(double x) const {
    if (!(x > 0.0)) throw Error(ErrorCode::BadArgument, "levy_density: x must be > 0");
    const double b_sq = params_.b * params_.b;
    return params_.lambda * params_.a / (2.0 * kSqrt2Pi) * std::pow(x, -1.5) * (1.0 + b_sq * x) *
           std::exp(-0.5 * b_sq * x);
}

double Model::k_factor(double sigma_sq) const {
    const double denom = sigma_sq + c2_rho_;
    if (!(denom > 0.0)) throw Error(ErrorCode::BadArgument, "k_factor: sigma_sq + C2 must be > 0");
    return params_.alpha / denom;
}

GridSpec GridSpec::uniform(double horizon, std::uint64_t steps) {
    if (!(horizon > 0.0) || steps < 1) throw Error(ErrorCode::BadArgument, "grid: horizon > 0 and steps >= 1 required");
    return GridSpec{steps, horizon / static_cast<double>(steps), horizon};
}

StepConstants::StepConstants(const Model& model, double delta) {
    if (!(delta > 0.0)) throw Error(ErrorCode::BadArgument, "step constants: delta must be > 0");
    const ModelParams& p = model.params();
    delta_ = delta;
    lambda_ = p.lambda;
    rho_ = p.rho;
    alpha_ = p.alpha;
    a_ = p.a;
    beta_ = model.beta();
    mu_ = model.mu();
    c1_rho_ = model.levy_moment_1();
    c2_rho_ = model.levy_moment_2();

    const double one_msw = -std::expm1(-0.5 * lambda_ * delta);  // 1 - sqrt(w)
    sqrt_w_ = 1.0 - one_msw;
    w_ = sqrt_w_ * sqrt_w_;
    em1_ = 1.0 / sqrt_w_ - 1.0;  // e^{lambda delta / 2} - 1

    ig_mean_ = p.a * one_msw / p.b;
    ig_shape_ = p.a * p.a * one_msw * one_msw;
    bdl_rate_ = p.a * p.b * one_msw;
    bdl_p0_ = std::exp(-bdl_rate_);

    // masses of f_m written without cancellation:
    //   C_1 = sqrt(pi) lambda delta (beta^{-1/2} - (beta - rho)^{-1/2})
    //   C_3 = 2 sqrt(pi) lambda delta (sqrt(beta - rho) - sqrt(beta))
    const double sb = std::sqrt(beta_);
    const double sbr = std::sqrt(beta_ - rho_);
    c1_mass_ = kSqrtPi * lambda_ * delta * (-rho_) / ((sbr + sb) * sb * sbr);
    c3_mass_ = 2.0 * kSqrtPi * lambda_ * delta * (-rho_) / (sbr + sb);

    rate1_per_k_ = p.a * beta_ / kSqrt2Pi * c1_mass_;
    rate3_per_k_ = p.a / (2.0 * kSqrt2Pi) * c3_mass_;

    // acceptance probabilities 1 / int g_m, in forms stable as rho -> 0
    accept1_ = lambda_ * delta / (2.0 * em1_) * (-rho_) / ((sbr + sb) * sbr);
    accept3_ = lambda_ * delta * beta_ / (em1_ * (sb * sbr + beta_));

    // Gauss-Legendre pair on [1, 1/w] with the z powers folded into weights
    const double lo = 1.0, hi = 1.0 / w_;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const auto& r12 = detail::gauss_legendre<12>();
    for (std::size_t i = 0; i < 12; ++i) {
        zi_[i] = mid + half * r12.node[i];
        const double zm = 1.0 / std::sqrt(zi_[i]);
        wz1_[i] = r12.weight[i] * half * zm;
        wz3_[i] = r12.weight[i] * half * zm / zi_[i];
    }
    const auto& r6 = detail::gauss_legendre<6>();
    for (std::size_t i = 0; i < 6; ++i) {
        zi6_[i] = mid + half * r6.node[i];
        const double zm = 1.0 / std::sqrt(zi6_[i]);
        wz1_6_[i] = r6.weight[i] * half * zm;
        wz3_6_[i] = r6.weight[i] * half * zm / zi6_[i];
    }
}

double StepConstants::ar_mass(int m) const {
    if (m == 1) return c1_mass_;
    if (m == 3) return c3_mass_;
    throw Error(ErrorCode::BadArgument, "ar_mass: m must be 1 or 3");
}

double StepConstants::acceptance_probability(int m) const {
    if (m == 1) return accept1_;
    if (m == 3) return accept3_;
    throw Error(ErrorCode::BadArgument, "acceptance_probability: m must be 1 or 3");
}

double StepConstants::f_tilde(int m, double y) const {
    if (m != 1 && m != 3) throw Error(ErrorCode::BadArgument, "f_tilde: m must be 1 or 3");
    if (!(y > 0.0)) throw Error(ErrorCode::BadArgument, "f_tilde: y must be > 0");
    const double mexp = -0.5 * static_cast<double>(m);
    if (rho_ == 0.0) {
        // pointwise limit: the factor (1 - e^{rho y z}) ~ -rho y z cancels
        // against the same linearization inside the mass
        QuadratureSpec spec;
        spec.abs_tol = 1e-12;
        const double num = std::pow(y, 1.0 + mexp) * std::exp(-beta_ * y) *
                           integrate(
                               [&](double z) {
                                   return std::pow(z, 1.0 + mexp) * std::exp(-beta_ * y * (z - 1.0));
                               },
                               1.0, 1.0 / w_, spec);
        const double gamma_factor = (m == 1) ? 0.5 * kSqrtPi : kSqrtPi;  // Gamma(2 - m/2)
        const double mass = lambda_ * delta_ * gamma_factor * std::pow(beta_, 0.5 * m - 2.0);
        return num / mass;
    }
    if (m == 3 && y < 1e-12) {
        // y^{-3/2} times the z-integral overflows as written; substituting
        // the bound (1 - e^{rho y z}) ~ |rho| y z keeps everything finite
        QuadratureSpec spec;
        spec.abs_tol = 1e-12;
        const double linearized = integrate(
            [&](double z) { return std::exp(-beta_ * y * (z - 1.0)) / std::sqrt(z); },
            1.0, 1.0 / w_, spec);
        return (-rho_) * std::exp(-beta_ * y) / std::sqrt(y) * linearized / ar_mass(3);
    }
    return std::pow(y, mexp) * std::exp(-beta_ * y) * z_integral(m, y) / ar_mass(m);
}

double StepConstants::g_envelope(int m, double y) const {
    if (m != 1 && m != 3) throw Error(ErrorCode::BadArgument, "g_envelope: m must be 1 or 3");
    if (!(y > 0.0)) throw Error(ErrorCode::BadArgument, "g_envelope: y must be > 0");
    if (rho_ == 0.0) return std::numeric_limits<double>::infinity();  // zero-mass envelope
    const double c = (m == 1) ? 1.0 : -rho_;
    return 2.0 * c / ar_mass(m) * std::exp(-beta_ * y) / std::sqrt(y) * em1_;
}

double StepConstants::g_tilde(double y) const {
    if (!(y > 0.0)) throw Error(ErrorCode::BadArgument, "g_tilde: y must be > 0");
    return std::sqrt(beta_ / kPi) * std::exp(-beta_ * y) / std::sqrt(y);
}

double levy_moment_1(const Model& model) { return model.levy_moment_1(); }
double levy_moment_2(const Model& model) { return model.levy_moment_2(); }
double k_factor(double sigma_sq, const Model& model) { return model.k_factor(sigma_sq); }

double ar_mass(int m, const Model& model, double delta) {
    return StepConstants(model, delta).ar_mass(m);
}

double f_tilde(int m, double y, const Model& model, double delta) {
    return StepConstants(model, delta).f_tilde(m, y);
}

double g_envelope(int m, double y, const Model& model, double delta) {
    return StepConstants(model, delta).g_envelope(m, y);
}

double g_tilde(double y, const Model& model) {
    if (!(y > 0.0)) throw Error(ErrorCode::BadArgument, "g_tilde: y must be > 0");
    return std::sqrt(model.beta() / kPi) * std::exp(-model.beta() * y) / std::sqrt(y);
}

double acceptance_probability(int m, const Model& model, double delta) {
    return StepConstants(model, delta).acceptance_probability(m);
}

}  // namespace bnsmc
