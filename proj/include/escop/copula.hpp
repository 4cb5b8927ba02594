#ifndef ESCOP_COPULA_HPP
#define ESCOP_COPULA_HPP

#include <span>
#include <vector>

#include "escop/distortion.hpp"
#include "escop/grid.hpp"

namespace escop {

// C(u) = prod_k g_k(u_(k)) with g_1 the identity and g_k(1) = 1. The
// container validates only those structural constraints; whether the g_k
// actually yield a distribution function is the validity module's job.
class OrderedFactorCopula {
public:
    static OrderedFactorCopula make(int d, std::vector<DistortionFn> g,
                                    const GridSpec& grid = GridSpec{});

    double cdf(std::span<const double> u) const;
    // g_k(u) read as the conditional diagonal ratio
    // P(U_1<=u,...,U_k<=u | U_1<=u,...,U_{k-1}<=u); k is 1-based.
    double diagonal_ratio(int k, double u) const;

    int dim() const { return d_; }
    const DistortionFn& g(int k) const;  // 1-based, matching the math

private:
    OrderedFactorCopula(int d, std::vector<DistortionFn> g)
        : d_(d), g_(std::move(g)) {}
    int d_;
    std::vector<DistortionFn> g_;
};

// Shock distributions per cardinality: element m (1-based) is the law of
// the shocks shared by all subsets of size m.
struct HFamily {
    int d = 0;
    std::vector<DistortionFn> H;
    const DistortionFn& at(int m) const { return H.at(static_cast<std::size_t>(m - 1)); }
};

// H_{j,k} = prod_{i=0}^{j-1} g_{k+1+i}^{(-1)^i binom(j-1,i)}, with the right
// limit at zero as its value at 0.
DistortionFn make_H(const OrderedFactorCopula& c, int j, int k);

// The full per-cardinality family {H_{m,d-m}}_{m=1..d}. Requires every g_k
// strictly positive on (0,1].
HFamily h_from_g(const OrderedFactorCopula& c, const GridSpec& grid = GridSpec{});

// Inverse direction: g_k = prod_{m=1}^{d+1-k} H_{m,d-m}^{binom(d-k,m-1)}.
// Fails when the normalization prod_m H_m^{binom(d-1,m-1)} deviates from the
// identity by more than 1e-10 on the evaluation grid.
OrderedFactorCopula g_from_h(const HFamily& h, const GridSpec& grid = GridSpec{});

// inf{u : f(u) >= p}; see DistortionFn::inverse.
inline double generalized_inverse(const DistortionFn& f, double p) {
    return f.inverse(p);
}

}  // namespace escop

#endif
