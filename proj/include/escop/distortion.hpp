#ifndef ESCOP_DISTORTION_HPP
#define ESCOP_DISTORTION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace escop {

namespace detail {
struct DistortionNode;
}

// A monotone function object on [0,1]: the carrier of the copula factors
// g_k and the shock distributions H. Immutable after construction; copies
// share the underlying node.
//
// Evaluation conventions:
//   - operator() clamps to [0,1] (distribution-function contract),
//   - raw() is unclamped and is what validity scans look at,
//   - the value at u = 0 is the stored right limit at zero; a positive
//     right limit represents an atom of the distribution at 0.
class DistortionFn {
public:
    // --- closed forms -----------------------------------------------------
    static DistortionFn identity();
    static DistortionFn constant(double value);
    static DistortionFn power(double exponent);  // u^a on (0,1]
    // min{a u + b, 1 - c + c u}; starts at b, kink, slope c up to 1
    static DistortionFn piecewise_linear(double a, double b, double c);
    // g_k of the Sato-gamma family: ((1+(k-1)w)/(1+kw))^beta, w = u^{-1/beta}-1
    static DistortionFn sato_gamma_factor(double beta, int k);

    // --- composite / data-driven forms ------------------------------------
    // Strictly increasing abscissae in [0,1]; monotone piecewise-linear
    // interpolation, extended to (0, zero_limit) on the left and (1, 1) on
    // the right when the grid does not reach the endpoints.
    static DistortionFn tabulated(std::vector<double> u, std::vector<double> v,
                                  double zero_limit);
    // prod_i base_i(u)^{e_i}, evaluated in the log domain. Pure products of
    // power forms are folded into a single power at construction.
    static DistortionFn log_power_product(
        std::vector<std::pair<DistortionFn, double>> terms);
    // Arbitrary closed form; serialized by tabulation on the default grid.
    static DistortionFn custom(std::function<double(double)> fn, double zero_limit,
                               std::string label);

    // --- evaluation --------------------------------------------------------
    double operator()(double u) const;  // clamped to [0,1]
    double raw(double u) const;         // unclamped
    double log_raw(double u) const;     // log of raw (may be +-inf)
    double zero_limit() const;          // right limit at 0, unclamped

    // Generalized inverse inf{u in [0,1] : f(u) >= p}. Returns 0 whenever
    // p <= zero limit (atom convention). Closed forms invert analytically;
    // everything else falls back to bisection (abs tol 1e-12, <= 200 steps).
    double inverse(double p) const;

    // True when the function is constant one, i.e. the associated shock is
    // a point mass at zero and consumes no randomness.
    bool is_constant_one() const;

    const char* kind() const;
    // (coefficient, exponent) when the function is coef * u^exponent
    std::optional<std::pair<double, double>> power_form() const;

    nlohmann::json to_json() const;
    static DistortionFn from_json(const nlohmann::json& j);

private:
    explicit DistortionFn(std::shared_ptr<const detail::DistortionNode> node)
        : node_(std::move(node)) {}
    std::shared_ptr<const detail::DistortionNode> node_;
};

}  // namespace escop

#endif
