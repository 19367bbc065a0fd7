#pragma once

// Counter-based random streams (Philox4x32-10) and the variate samplers the
// engines need. A stream is fully determined by (seed, stream_id); stream_id
// is the path index, so any worker can regenerate any path without touching
// shared state. Streams are cheap value types.

#include <array>
#include <cstdint>

#include "bnsmc/errors.hpp"

namespace bnsmc {

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64();
    double next_uniform();  // open interval (0, 1)
    double next_normal();   // standard normal, Box-Muller with cached spare

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int word_ = 4;  // next unread 32-bit word in buf_; 4 means empty
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// N(0, variance); variance = 0 degenerates to the point mass at 0.
double sample_normal(RngStream& stream, double variance);

// Exact Poisson draw. Sequential-search inversion for rate < 10 (one uniform
// per draw), transformed-rejection (PTRD) above.
std::uint64_t sample_poisson(RngStream& stream, double rate);
// Variant with e^{-rate} precomputed by the caller (hot loops with a fixed rate).
std::uint64_t sample_poisson_with_p0(RngStream& stream, double rate, double p0);

// Gamma(shape 1/2, given scale), via the identity Gamma(1/2, s) = s Z^2 / 2.
double sample_gamma_half(RngStream& stream, double scale);

// Inverse Gaussian with the mean/shape parametrization,
// density sqrt(shape / (2 pi x^3)) exp(-shape (x - mean)^2 / (2 mean^2 x)).
// Transformation-with-rejection (one normal, one uniform per draw).
double sample_inverse_gaussian(RngStream& stream, double mean, double shape);

}  // namespace bnsmc
