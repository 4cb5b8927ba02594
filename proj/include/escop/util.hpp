#ifndef ESCOP_UTIL_HPP
#define ESCOP_UTIL_HPP

#include <cstdint>
#include <string>

namespace escop {

inline double clamp01(double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

// Binomial coefficient as double; exact for the small orders used here
// (n stays below the dimension cap).
inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return r;
}

// Kahan compensated accumulator. compute_G sums alternating binomial terms
// whose magnitudes can span many orders; compensation keeps the negativity
// test honest.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// FNV-1a, used to fingerprint family descriptors in batch metadata.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace escop

#endif
