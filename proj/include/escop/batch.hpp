#ifndef ESCOP_BATCH_HPP
#define ESCOP_BATCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace escop {

// n x d unit-interval observations with provenance. Bit-exact reproducible
// from (method, family, n, seed) regardless of worker count.
struct SampleBatch {
    std::size_t n = 0;
    int d = 0;
    std::vector<double> data;  // row-major
    std::string method;        // "shock" | "frailty"
    std::uint64_t seed = 0;
    std::string family;        // canonical family descriptor

    double at(std::size_t i, int k) const {
        return data[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
    }
    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(d),
                static_cast<std::size_t>(d)};
    }
};

}  // namespace escop

#endif
