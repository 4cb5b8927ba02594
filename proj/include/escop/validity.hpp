#ifndef ESCOP_VALIDITY_HPP
#define ESCOP_VALIDITY_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "escop/copula.hpp"
#include "escop/grid.hpp"

namespace escop {

enum class Condition { ii, iii, iv };
enum class Verdict { pass, fail, inconclusive };

const char* to_string(Condition c);
const char* to_string(Verdict v);
std::optional<Condition> condition_from_string(const std::string& s);

struct Witness {
    int j = 0, k = 0;
    double u = 0.0, v = 0.0;
    double value = 0.0;
    std::string what;
};

struct ValidityReport {
    Verdict verdict = Verdict::inconclusive;
    Condition condition = Condition::iv;
    std::size_t violation_count = 0;
    std::vector<Witness> witnesses;  // canonically sorted; capped
    std::string grid_descriptor;
    double negativity_tolerance = 0.0;
    double continuity_threshold = 0.0;
    nlohmann::json to_json() const;
};

// G_{j,k}(u,v) = sum_{i=0}^{j} binom(j,i) (-1)^i
//                prod_{l=1}^{i} g_{l+k}(u) prod_{l=i+1}^{j} g_{l+k}(v).
// Nonnegative for all 0 < u < v <= 1 iff C is a copula; equals the
// probability P(U_1<=u,...,U_k<=u, U_{k+1},...,U_{k+j} in [u,v]) divided by
// prod_{m<=k} g_m(u).
double compute_G(const OrderedFactorCopula& c, int j, int k, double u, double v);

// Grid scan of one of the three equivalent conditions. A pass means no
// violation was found at the grid resolution; it does not certify validity.
ValidityReport validate(const OrderedFactorCopula& c, Condition condition,
                        const GridSpec& grid = GridSpec{}, int workers = 1);

// Alternating binomial differences of {a_0,...}: nonnegative for all
// k >= 0, j >= 1 with k + j <= d.
struct MonotoneWitness {
    int k = 0, j = 0;
    double value = 0.0;
};
std::pair<bool, std::optional<MonotoneWitness>> is_d_monotone(
    const std::vector<double>& a, int d);

// Detects the extreme-value structure g_k(u) = u^{a_{k-1}}: fits each
// exponent at u = 0.5 and verifies the power form across the grid (including
// the right limit at zero). Returns the exponent sequence when the fit holds
// and the sequence is d-monotone.
std::optional<std::vector<double>> detect_extreme_value(
    const OrderedFactorCopula& c, double tol = 1e-9,
    const GridSpec& grid = GridSpec{});

struct TailDependence {
    double lambda_l = 0.0;
    double lambda_u = 0.0;
};

// Bivariate tail coefficients of C(u1,u2) = u_(1) g_2(u_(2)):
// lambda_L = lim_{u->0} g_2(u), lambda_U = 1 - g_2'(1-). The left derivative
// is computed by one-sided differences with Richardson extrapolation.
TailDependence tail_dependence(const DistortionFn& g2);

}  // namespace escop

#endif
