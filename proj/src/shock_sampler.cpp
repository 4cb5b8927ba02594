#include "escop/shock_sampler.hpp"

#include <algorithm>
#include <bit>

#include "escop/parallel.hpp"
#include "escop/rng.hpp"
#include "escop/util.hpp"

namespace escop {

ShockModelSpec build_shock_model(const OrderedFactorCopula& c, const GridSpec& grid,
                                 std::string family_label) {
    ValidityReport report = validate(c, Condition::iv, grid);
    if (report.verdict != Verdict::pass) {
        throw ValidityError("build_shock_model: condition (iv) fails, " +
                                std::to_string(report.violation_count) +
                                " violation(s) on the grid",
                            std::move(report));
    }
    ShockModelSpec spec;
    spec.d = c.dim();
    spec.h = h_from_g(c, grid);
    spec.family_label = std::move(family_label);
    spec.atom_at_zero.reserve(static_cast<std::size_t>(spec.d));
    spec.degenerate.reserve(static_cast<std::size_t>(spec.d));
    for (int m = 1; m <= spec.d; ++m) {
        spec.atom_at_zero.push_back(clamp01(spec.h.at(m).zero_limit()));
        spec.degenerate.push_back(spec.h.at(m).is_constant_one());
    }
    return spec;
}

SampleBatch sample_shock(const ShockModelSpec& m, std::size_t n, std::uint64_t seed,
                         int workers) {
    const int d = m.d;
    if (d < 2 || static_cast<int>(m.h.H.size()) != d) {
        throw std::invalid_argument("sample_shock: malformed shock model");
    }
    if (d > kShockDimensionCap) {
        throw std::invalid_argument("sample_shock: d exceeds the 2^24 shock cap; "
                                    "use the frailty sampler");
    }

    SampleBatch batch;
    batch.n = n;
    batch.d = d;
    batch.method = "shock";
    batch.seed = seed;
    batch.family = m.family_label;
    batch.data.assign(n * static_cast<std::size_t>(d), 0.0);

    const std::uint32_t mask_end = (1u << d);
    parallel_for(0, n, workers, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(static_cast<std::size_t>(d));
        for (std::size_t i = lo; i < hi; ++i) {
            SubstreamRng rng(seed, i);
            std::fill(x.begin(), x.end(), 0.0);
            for (std::uint32_t mask = 1; mask < mask_end; ++mask) {
                const int card = std::popcount(mask);
                if (m.degenerate[static_cast<std::size_t>(card - 1)]) {
                    continue;  // point mass at zero; the max is unaffected
                }
                const double p = rng.uniform01();
                const double z = m.h.at(card).inverse(p);
                std::uint32_t bits = mask;
                while (bits != 0) {
                    const int k = std::countr_zero(bits);
                    if (z > x[static_cast<std::size_t>(k)]) {
                        x[static_cast<std::size_t>(k)] = z;
                    }
                    bits &= bits - 1;
                }
            }
            double* row = batch.data.data() + i * static_cast<std::size_t>(d);
            std::copy(x.begin(), x.end(), row);
        }
    });
    return batch;
}

}  // namespace escop
