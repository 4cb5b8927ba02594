#ifndef ESCOP_SHOCK_SAMPLER_HPP
#define ESCOP_SHOCK_SAMPLER_HPP

#include <cstdint>
#include <string>

#include "escop/batch.hpp"
#include "escop/copula.hpp"
#include "escop/validity.hpp"

namespace escop {

// Validity failure raised when a copula container does not pass the
// per-cardinality membership check required by the stochastic model.
class ValidityError : public std::runtime_error {
public:
    ValidityError(std::string msg, ValidityReport report)
        : std::runtime_error(std::move(msg)), report(std::move(report)) {}
    ValidityReport report;
};

// Exact stochastic model behind the copula: 2^d - 1 independent shocks, one
// distribution per subset cardinality, componentwise maxima.
struct ShockModelSpec {
    int d = 0;
    HFamily h;                          // element m: shock law for |E| = m
    std::vector<double> atom_at_zero;   // right limits at zero, clamped
    std::vector<bool> degenerate;      // H_m == 1: point mass at zero
    std::string family_label;
};

// Wraps h_from_g after checking condition (iv). Degenerate cardinalities
// are flagged so their shocks are emitted as exact zeros without consuming
// randomness.
ShockModelSpec build_shock_model(const OrderedFactorCopula& c,
                                 const GridSpec& grid = GridSpec{},
                                 std::string family_label = "");

// Hard cap: 2^24 - 1 shocks per draw. Larger d must use the frailty route.
inline constexpr int kShockDimensionCap = 24;

// One draw: Z^E = H_{|E|}^{-1}(p) over all nonempty bitmasks in ascending
// order, X_k = max over masks containing k. Draw i uses the substream
// derived from (seed, i), so output is order- and worker-independent.
SampleBatch sample_shock(const ShockModelSpec& m, std::size_t n,
                         std::uint64_t seed, int workers = 1);

}  // namespace escop

#endif
