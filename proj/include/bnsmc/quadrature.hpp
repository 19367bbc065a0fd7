#pragma once

// Adaptive panel integration with an embedded Gauss-Legendre pair.
// A panel is estimated with a 15-node rule; the difference against a 7-node
// rule on the same panel serves as the error estimate, and panels whose
// estimate exceeds their share of the tolerance budget are bisected.
// Nodes and weights are generated at startup by Newton iteration on the
// Legendre recurrence, so no tabulated constants are involved.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "bnsmc/errors.hpp"

namespace bnsmc {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

namespace detail {

template <std::size_t N>
struct GaussLegendreRule {
    std::array<double, N> node;    // on [-1, 1]
    std::array<double, N> weight;

    GaussLegendreRule() {
        constexpr double kPi = 3.141592653589793238462643383279502884;
        const std::size_t half = (N + 1) / 2;
        for (std::size_t i = 1; i <= half; ++i) {
            double z = std::cos(kPi * (static_cast<double>(i) - 0.25) / (static_cast<double>(N) + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 128; ++iter) {
                // Legendre polynomial P_N(z) and derivative by recurrence
                double p0 = 1.0, p1 = 0.0;
                for (std::size_t j = 0; j < N; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * static_cast<double>(j) + 1.0) * z * p1 - static_cast<double>(j) * p2) /
                         (static_cast<double>(j) + 1.0);
                }
                pp = static_cast<double>(N) * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            node[i - 1] = -z;
            node[N - i] = z;
            weight[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
            weight[N - i] = weight[i - 1];
        }
    }
};

template <std::size_t N>
inline const GaussLegendreRule<N>& gauss_legendre() {
    static const GaussLegendreRule<N> rule;
    return rule;
}

template <std::size_t N, class F>
inline double fixed_rule(F&& f, double lo, double hi) {
    const auto& rule = gauss_legendre<N>();
    const double mid = 0.5 * (lo + hi);
    const double halfwidth = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        acc += rule.weight[i] * f(mid + halfwidth * rule.node[i]);
    }
    return acc * halfwidth;
}

}  // namespace detail

// Integrates f over [lo, hi]. Throws Error(QuadratureFailure) if the panel
// budget is exhausted before the error estimate meets the tolerance.
template <class F>
double integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    if (!(lo <= hi)) throw Error(ErrorCode::BadArgument, "integrate: lo > hi");
    if (lo == hi) return 0.0;

    struct Panel {
        double lo, hi, value, error;
    };
    auto make_panel = [&](double a, double b) {
        const double coarse = detail::fixed_rule<7>(f, a, b);
        const double fine = detail::fixed_rule<15>(f, a, b);
        return Panel{a, b, fine, std::abs(fine - coarse)};
    };

    const double total_len = hi - lo;
    const Panel whole = make_panel(lo, hi);
    const double scale_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(whole.value));

    std::vector<Panel> stack{whole};
    double total = 0.0;
    double error_accum = 0.0;
    int subdivisions = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double budget = scale_tol * (p.hi - p.lo) / total_len;
        if (p.error <= budget) {
            total += p.value;
            error_accum += p.error;
            continue;
        }
        if ((p.hi - p.lo) < 1e-14 * total_len) {
            // cannot refine further; keep the value but remember the deficit
            if (!std::isfinite(p.value)) {
                throw Error(ErrorCode::QuadratureFailure, "integrate: non-finite panel value");
            }
            total += p.value;
            error_accum += p.error;
            continue;
        }
        if (++subdivisions > spec.max_subdivisions) {
            throw Error(ErrorCode::QuadratureFailure,
                        "integrate: panel budget exhausted (non-convergent integrand)");
        }
        const double mid = 0.5 * (p.lo + p.hi);
        stack.push_back(make_panel(p.lo, mid));
        stack.push_back(make_panel(mid, p.hi));
    }
    const double final_tol = 4.0 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (!(error_accum <= final_tol)) {
        throw Error(ErrorCode::QuadratureFailure, "integrate: error estimate exceeds tolerance");
    }
    return total;
}

}  // namespace bnsmc
