#include "bnsmc/rng.hpp"

#include <cmath>

namespace bnsmc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

// Philox4x32 round constants (Salmon et al., SC'11)
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
}

}  // namespace

void RngStream::refill() {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32),
    };
    std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
    };
    for (int round = 0; round < 10; ++round) philox_round(ctr, key);
    buf_ = ctr;
    ++block_;
    word_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (word_ > 2) refill();
    const std::uint64_t lo = buf_[word_];
    const std::uint64_t hi = buf_[word_ + 1];
    word_ += 2;
    return lo | (hi << 32);
}

double RngStream::next_uniform() {
    // 53-bit mantissa shifted into (0, 1); never returns an endpoint
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = kTwoPi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

double sample_normal(RngStream& stream, double variance) {
    if (!(variance >= 0.0)) throw Error(ErrorCode::BadArgument, "sample_normal: variance must be >= 0");
    if (variance == 0.0) return 0.0;
    return std::sqrt(variance) * stream.next_normal();
}

std::uint64_t sample_poisson_with_p0(RngStream& stream, double rate, double p0) {
    // inversion by sequential search; exact, one uniform consumed
    double u = stream.next_uniform();
    double p = p0;
    double cum = p;
    std::uint64_t k = 0;
    while (u > cum) {
        ++k;
        p *= rate / static_cast<double>(k);
        cum += p;
        if (p == 0.0) break;  // exhausted double precision far in the tail
    }
    return k;
}

namespace {

// Transformed rejection with decomposition (Hormann's PTRD); exact for
// rate >= 10 without series summation.
std::uint64_t poisson_ptrd(RngStream& stream, double rate) {
    const double smu = std::sqrt(rate);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = stream.next_uniform() - 0.5;
        const double v = stream.next_uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + rate + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * std::log(rate) - rate - std::lgamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

}  // namespace

std::uint64_t sample_poisson(RngStream& stream, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw Error(ErrorCode::BadArgument, "sample_poisson: rate must be finite and >= 0");
    }
    if (rate == 0.0) return 0;
    if (rate < 10.0) return sample_poisson_with_p0(stream, rate, std::exp(-rate));
    return poisson_ptrd(stream, rate);
}

double sample_gamma_half(RngStream& stream, double scale) {
    if (!(scale > 0.0)) throw Error(ErrorCode::BadArgument, "sample_gamma_half: scale must be > 0");
    const double z = stream.next_normal();
    return 0.5 * scale * z * z;
}

double sample_inverse_gaussian(RngStream& stream, double mean, double shape) {
    if (!(mean > 0.0) || !(shape > 0.0)) {
        throw Error(ErrorCode::BadArgument, "sample_inverse_gaussian: mean and shape must be > 0");
    }
    const double z = stream.next_normal();
    const double y = z * z;
    // smaller root of the transformation, written without cancellation:
    // x = mean (1 + h - sqrt(h^2 + 2h)) = mean / (1 + h + sqrt(h^2 + 2h))
    const double h = 0.5 * mean * y / shape;
    const double x = mean / (1.0 + h + std::sqrt(h * (h + 2.0)));
    const double u = stream.next_uniform();
    return (u <= mean / (mean + x)) ? x : mean * mean / x;
}

}  // namespace bnsmc
