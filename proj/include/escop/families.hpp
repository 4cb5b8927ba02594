#ifndef ESCOP_FAMILIES_HPP
#define ESCOP_FAMILIES_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "escop/bernstein.hpp"
#include "escop/copula.hpp"
#include "escop/validity.hpp"

namespace escop {

OrderedFactorCopula independence(int d);
OrderedFactorCopula comonotone(int d);

// g_k(u) = u^{a_{k-1}} for a d-monotone sequence with a_0 = 1. With
// gate = false the container is built without the d-monotonicity check,
// which is what the validate command needs to inspect broken inputs.
OrderedFactorCopula marshall_olkin(const std::vector<double>& a, int d,
                                   bool gate = true);

// Sato-frailty family with exponent beta*log(1 + x/eta) and self-similarity
// index H. The copula depends only on beta; eta and H set the time scale of
// the paired subordinator.
std::pair<OrderedFactorCopula, BernsteinFamily> sato_gamma(double beta, double eta,
                                                           double h, int d);

// d = 2 copula with g_2(u) = min{a u + b, 1 - c + c u}; requires a > 1,
// b > 0, c > 0, b + c <= 1. Construction is gated on condition (ii) unless
// gate = false.
OrderedFactorCopula piecewise_linear_bivariate(double a, double b, double c,
                                               const GridSpec& grid = GridSpec{},
                                               bool gate = true);

// A family descriptor resolved into its containers. Bernstein-backed
// descriptors carry the family needed for the frailty route.
struct LoadedFamily {
    OrderedFactorCopula copula;
    std::optional<BernsteinFamily> bernstein;
    nlohmann::json descriptor;
    std::string name;

    std::string descriptor_string() const { return descriptor.dump(); }
};

// Accepts either a named preset {"name", "params", "d"} or a raw Bernstein
// descriptor {"kind", "psi1", "H", "d"}. gate_validity controls whether
// preset preconditions beyond the structural ones are enforced.
LoadedFamily family_from_json(const nlohmann::json& j, bool gate_validity = true,
                              const GridSpec& grid = GridSpec{});

}  // namespace escop

#endif
