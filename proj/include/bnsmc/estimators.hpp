#pragma once

// Estimators over simulated paths: terminal mean, equally weighted grid-time
// average ("Asian" mean), Error % against the exact identity S0 = E*[S_T],
// and option prices at zero interest rate. Weighted-path samples multiply
// each functional by the terminal density-process value; direct samples use
// the plain average.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include "bnsmc/engines.hpp"

namespace bnsmc {

enum class Method { Algo1, Algo2 };
enum class Estimand { TerminalMean, AsianMean, EuroCall, AsianCall };
enum class Payoff { EuroCall, AsianCall };

const char* method_name(Method method);
const char* estimand_name(Estimand estimand);

struct RunMeta {
    double alpha = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t steps = 0;
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
};

struct EstimateReport {
    Estimand estimand = Estimand::TerminalMean;
    Method method = Method::Algo2;
    double point = 0.0;
    double std_error = 0.0;
    // (S0 - point) / S0 * 100; NaN for option prices (no closed truth)
    double error_percent = std::numeric_limits<double>::quiet_NaN();
    double strike = std::numeric_limits<double>::quiet_NaN();
    double wall_time_sec = 0.0;
    RunMeta meta;
};

// sign convention: overestimates give negative values
double error_percent(double s0, double point);

// Streaming mean/variance accumulator (Welford), mergeable in a fixed order
// so reductions stay deterministic under any worker count.
class SampleAccumulator {
public:
    void add(double x) {
        ++count_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }

    void merge(const SampleAccumulator& other) {
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const double n1 = static_cast<double>(count_);
        const double n2 = static_cast<double>(other.count_);
        const double d = other.mean_ - mean_;
        mean_ += d * n2 / (n1 + n2);
        m2_ += other.m2_ + d * d * n1 * n2 / (n1 + n2);
        count_ += other.count_;
    }

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    double std_error() const {
        return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Per-path functionals feeding the estimators. For weighted paths the asian
// mean uses the per-time weighted average sum(S_k Z_k) / (M+1), while option
// payoffs are weighted by the terminal Z only.
struct PathFunctionals {
    double terminal = 0.0;        // S_T
    double weight_terminal = 1.0; // Z_T (1 for direct paths)
    double terminal_weighted = 0.0;   // S_T Z_T
    double asian_weighted = 0.0;      // sum S_k Z_k / (M+1)
    double asian_plain = 0.0;         // sum S_k / (M+1)
};

PathFunctionals path_functionals(const PathP& path);
PathFunctionals path_functionals(const PathPstar& path);

EstimateReport estimate_terminal_mean(std::span<const PathP> paths, double s0, const RunMeta& meta = {});
EstimateReport estimate_terminal_mean(std::span<const PathPstar> paths, double s0, const RunMeta& meta = {});
EstimateReport estimate_asian_mean(std::span<const PathP> paths, double s0, const RunMeta& meta = {});
EstimateReport estimate_asian_mean(std::span<const PathPstar> paths, double s0, const RunMeta& meta = {});

EstimateReport price_option(std::span<const PathP> paths, Payoff payoff, double strike,
                            const RunMeta& meta = {});
EstimateReport price_option(std::span<const PathPstar> paths, Payoff payoff, double strike,
                            const RunMeta& meta = {});

}  // namespace bnsmc
