#include "bnsmc/estimators.hpp"

namespace bnsmc {

const char* method_name(Method method) {
    return method == Method::Algo1 ? "algo1" : "algo2";
}

const char* estimand_name(Estimand estimand) {
    switch (estimand) {
        case Estimand::TerminalMean: return "terminal_mean";
        case Estimand::AsianMean: return "asian_mean";
        case Estimand::EuroCall: return "euro_call";
        case Estimand::AsianCall: return "asian_call";
    }
    return "unknown";
}

double error_percent(double s0, double point) {
    if (!(s0 > 0.0)) throw Error(ErrorCode::BadArgument, "error_percent: s0 must be > 0");
    return (s0 - point) / s0 * 100.0;
}

PathFunctionals path_functionals(const PathP& path) {
    if (path.s.size() < 2 || path.s.size() != path.z.size()) {
        throw Error(ErrorCode::BadArgument, "path_functionals: malformed weighted path");
    }
    PathFunctionals f;
    const std::size_t n = path.s.size();
    double sum_wz = 0.0, sum_s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum_wz += path.s[k] * path.z[k];
        sum_s += path.s[k];
    }
    f.terminal = path.s.back();
    f.weight_terminal = path.z.back();
    f.terminal_weighted = f.terminal * f.weight_terminal;
    f.asian_weighted = sum_wz / static_cast<double>(n);
    f.asian_plain = sum_s / static_cast<double>(n);
    return f;
}

PathFunctionals path_functionals(const PathPstar& path) {
    if (path.s.size() < 2) {
        throw Error(ErrorCode::BadArgument, "path_functionals: malformed path");
    }
    PathFunctionals f;
    double sum_s = 0.0;
    for (double s : path.s) sum_s += s;
    f.terminal = path.s.back();
    f.weight_terminal = 1.0;
    f.terminal_weighted = f.terminal;
    f.asian_plain = sum_s / static_cast<double>(path.s.size());
    f.asian_weighted = f.asian_plain;
    return f;
}

namespace {

template <class PathType, class Summand>
EstimateReport reduce_paths(std::span<const PathType> paths, Summand&& summand, Estimand estimand,
                            Method method, double s0, double strike, const RunMeta& meta) {
    if (paths.size() < 2) throw Error(ErrorCode::BadArgument, "estimator: need at least 2 paths");
    SampleAccumulator acc;
    for (const PathType& path : paths) acc.add(summand(path_functionals(path)));
    EstimateReport report;
    report.estimand = estimand;
    report.method = method;
    report.point = acc.mean();
    report.std_error = acc.std_error();
    report.strike = strike;
    report.meta = meta;
    if (meta.paths == 0) report.meta.paths = paths.size();
    if (estimand == Estimand::TerminalMean || estimand == Estimand::AsianMean) {
        report.error_percent = error_percent(s0, report.point);
    }
    return report;
}

double call_payoff(double underlying, double strike) {
    return underlying > strike ? underlying - strike : 0.0;
}

}  // namespace

EstimateReport estimate_terminal_mean(std::span<const PathP> paths, double s0, const RunMeta& meta) {
    return reduce_paths(paths, [](const PathFunctionals& f) { return f.terminal_weighted; },
                        Estimand::TerminalMean, Method::Algo1, s0,
                        std::numeric_limits<double>::quiet_NaN(), meta);
}

EstimateReport estimate_terminal_mean(std::span<const PathPstar> paths, double s0, const RunMeta& meta) {
    return reduce_paths(paths, [](const PathFunctionals& f) { return f.terminal; },
                        Estimand::TerminalMean, Method::Algo2, s0,
                        std::numeric_limits<double>::quiet_NaN(), meta);
}

EstimateReport estimate_asian_mean(std::span<const PathP> paths, double s0, const RunMeta& meta) {
    return reduce_paths(paths, [](const PathFunctionals& f) { return f.asian_weighted; },
                        Estimand::AsianMean, Method::Algo1, s0,
                        std::numeric_limits<double>::quiet_NaN(), meta);
}

EstimateReport estimate_asian_mean(std::span<const PathPstar> paths, double s0, const RunMeta& meta) {
    return reduce_paths(paths, [](const PathFunctionals& f) { return f.asian_plain; },
                        Estimand::AsianMean, Method::Algo2, s0,
                        std::numeric_limits<double>::quiet_NaN(), meta);
}

EstimateReport price_option(std::span<const PathP> paths, Payoff payoff, double strike,
                            const RunMeta& meta) {
    if (!(strike >= 0.0)) throw Error(ErrorCode::BadArgument, "price_option: strike must be >= 0");
    const bool euro = payoff == Payoff::EuroCall;
    return reduce_paths(paths,
                        [&](const PathFunctionals& f) {
                            const double underlying = euro ? f.terminal : f.asian_plain;
                            return f.weight_terminal * call_payoff(underlying, strike);
                        },
                        euro ? Estimand::EuroCall : Estimand::AsianCall, Method::Algo1, 0.0, strike,
                        meta);
}

EstimateReport price_option(std::span<const PathPstar> paths, Payoff payoff, double strike,
                            const RunMeta& meta) {
    if (!(strike >= 0.0)) throw Error(ErrorCode::BadArgument, "price_option: strike must be >= 0");
    const bool euro = payoff == Payoff::EuroCall;
    return reduce_paths(paths,
                        [&](const PathFunctionals& f) {
                            const double underlying = euro ? f.terminal : f.asian_plain;
                            return call_payoff(underlying, strike);
                        },
                        euro ? Estimand::EuroCall : Estimand::AsianCall, Method::Algo2, 0.0, strike,
                        meta);
}

}  // namespace bnsmc
