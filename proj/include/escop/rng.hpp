#ifndef ESCOP_RNG_HPP
#define ESCOP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace escop {

namespace detail {

inline std::uint64_t avalanche64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Per-draw random stream. The state is a pure function of (seed, stream),
// so draw i produces the same values no matter which worker runs it or in
// which order draws are scheduled. Generator: xoshiro256** seeded through
// the splitmix64 finalizer.
class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t key = detail::avalanche64(seed + 0x9e3779b97f4a7c15ULL);
        key = detail::avalanche64(key ^ (stream + 0xd1b54a32d192ed03ULL));
        std::uint64_t x = key;
        bool nonzero = false;
        for (auto& s : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            s = detail::avalanche64(x);
            nonzero = nonzero || (s != 0);
        }
        if (!nonzero) s_[0] = 0x1ULL;  // all-zero state is invalid for xoshiro
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    // 53-bit uniform in [0,1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0,1]
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // unit-rate exponential by inversion
    double exponential() { return -std::log(uniform_pos()); }

    // standard normal, Marsaglia polar (second variate discarded)
    double normal() {
        for (;;) {
            const double x = 2.0 * uniform01() - 1.0;
            const double y = 2.0 * uniform01() - 1.0;
            const double r2 = x * x + y * y;
            if (r2 < 1.0 && r2 > 0.0) {
                return x * std::sqrt(-2.0 * std::log(r2) / r2);
            }
        }
    }

    // Gamma(shape, rate), Marsaglia-Tsang with the U^{1/shape} boost for
    // shape < 1. The boost factor is drawn first: when it underflows to
    // zero in double precision the core draw is skipped entirely, which
    // keeps tiny-shape increments cheap (they dominate subordinator grids).
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0)) {
            throw std::invalid_argument("gamma: shape and rate must be positive");
        }
        if (shape < 1.0) {
            const double log_boost = std::log(uniform_pos()) / shape;
            if (log_boost < -745.0) return 0.0;
            return gamma_ge1(shape + 1.0) * std::exp(log_boost) / rate;
        }
        return gamma_ge1(shape) / rate;
    }

    // Poisson(mean). Knuth's product method for small means; larger means
    // are split additively into chunks, which stays exact.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        std::uint64_t total = 0;
        while (mean > 16.0) {
            total += poisson_knuth(std::exp(-16.0));
            mean -= 16.0;
        }
        return total + poisson_knuth(std::exp(-mean));
    }

    // Variant with precomputed exp(-mean), for hot loops with a fixed mean
    // per grid step. Valid only for mean <= 16.
    std::uint64_t poisson_with_exp(double exp_neg_mean) {
        return poisson_knuth(exp_neg_mean);
    }

private:
    double gamma_ge1(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::uint64_t poisson_knuth(double threshold) {
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > threshold);
        return k - 1;
    }

    std::uint64_t s_[4];
};

}  // namespace escop

#endif
