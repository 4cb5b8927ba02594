#include "escop/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "escop/grid.hpp"
#include "escop/util.hpp"

namespace escop {

namespace detail {

struct DistortionNode {
    virtual ~DistortionNode() = default;
    virtual double raw(double u) const = 0;
    virtual double log_raw(double u) const { return std::log(raw(u)); }
    virtual double zero_limit() const = 0;
    virtual std::optional<double> closed_inverse(double /*p*/) const {
        return std::nullopt;
    }
    virtual const char* kind() const = 0;
    virtual std::optional<std::pair<double, double>> power_form() const {
        return std::nullopt;
    }
    virtual nlohmann::json to_json() const = 0;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IdentityNode final : DistortionNode {
    double raw(double u) const override { return u; }
    double log_raw(double u) const override { return std::log(u); }
    double zero_limit() const override { return 0.0; }
    std::optional<double> closed_inverse(double p) const override { return p; }
    const char* kind() const override { return "identity"; }
    std::optional<std::pair<double, double>> power_form() const override {
        return std::make_pair(1.0, 1.0);
    }
    nlohmann::json to_json() const override { return {{"kind", "identity"}}; }
};

struct ConstantNode final : DistortionNode {
    explicit ConstantNode(double v) : value(v) {}
    double value;
    double raw(double) const override { return value; }
    double zero_limit() const override { return value; }
    std::optional<double> closed_inverse(double p) const override {
        if (p <= value) return 0.0;
        return std::nullopt;  // never attained; bisection reports the domain error
    }
    const char* kind() const override { return "constant"; }
    std::optional<std::pair<double, double>> power_form() const override {
        if (value > 0.0) return std::make_pair(value, 0.0);
        return std::nullopt;
    }
    nlohmann::json to_json() const override {
        return {{"kind", "constant"}, {"params", {{"value", value}}}};
    }
};

struct PowerNode final : DistortionNode {
    explicit PowerNode(double a) : expo(a) {}
    double expo;
    double raw(double u) const override {
        if (u == 0.0) return zero_limit();
        if (expo == 1.0) return u;
        return std::pow(u, expo);
    }
    double log_raw(double u) const override {
        if (expo == 0.0) return 0.0;
        return expo * std::log(u);
    }
    double zero_limit() const override {
        if (expo > 0.0) return 0.0;
        if (expo == 0.0) return 1.0;
        return kInf;
    }
    std::optional<double> closed_inverse(double p) const override {
        if (expo > 0.0) return std::pow(p, 1.0 / expo);
        if (expo == 0.0) return 0.0;  // constant one
        return std::nullopt;
    }
    const char* kind() const override { return "power"; }
    std::optional<std::pair<double, double>> power_form() const override {
        return std::make_pair(1.0, expo);
    }
    nlohmann::json to_json() const override {
        return {{"kind", "power"}, {"params", {{"exponent", expo}}}};
    }
};

struct PiecewiseLinearNode final : DistortionNode {
    PiecewiseLinearNode(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {}
    double a, b, c;
    double raw(double u) const override {
        return std::min(a * u + b, 1.0 - c + c * u);
    }
    double zero_limit() const override { return b; }
    std::optional<double> closed_inverse(double p) const override {
        if (p <= b) return 0.0;
        const double kink_u = (1.0 - (b + c)) / (a - c);
        const double kink_v = a * kink_u + b;
        if (p <= kink_v) return (p - b) / a;
        return 1.0 - (1.0 - p) / c;
    }
    const char* kind() const override { return "piecewise_linear"; }
    nlohmann::json to_json() const override {
        return {{"kind", "piecewise_linear"},
                {"params", {{"a", a}, {"b", b}, {"c", c}}}};
    }
};

struct SatoGammaNode final : DistortionNode {
    SatoGammaNode(double beta_, int k_) : beta(beta_), k(k_) {}
    double beta;
    int k;

    double w_of(double u) const {
        if (beta == 1.0) return 1.0 / u - 1.0;
        return std::pow(u, -1.0 / beta) - 1.0;
    }
    double raw(double u) const override {
        if (u == 0.0) return zero_limit();
        if (u >= 1.0) return 1.0;
        const double w = w_of(u);
        if (!std::isfinite(w)) return zero_limit();
        const double km1 = static_cast<double>(k - 1);
        const double ratio = (1.0 + km1 * w) / (1.0 + k * w);
        return beta == 1.0 ? ratio : std::pow(ratio, beta);
    }
    double log_raw(double u) const override {
        if (u == 0.0) return std::log(zero_limit());
        if (u >= 1.0) return 0.0;
        const double w = w_of(u);
        const double km1 = static_cast<double>(k - 1);
        if (!std::isfinite(w)) {
            return k == 1 ? -kInf : beta * std::log(km1 / k);
        }
        return beta * (std::log1p(km1 * w) - std::log1p(k * w));
    }
    double zero_limit() const override {
        if (k == 1) return 0.0;
        return std::pow(static_cast<double>(k - 1) / k, beta);
    }
    std::optional<double> closed_inverse(double p) const override {
        if (p <= zero_limit()) return 0.0;
        if (p >= 1.0) return 1.0;
        const double q = beta == 1.0 ? p : std::pow(p, 1.0 / beta);
        const double denom = q * k - (k - 1.0);
        const double w = (1.0 - q) / denom;
        const double u = beta == 1.0 ? 1.0 / (1.0 + w) : std::pow(1.0 + w, -beta);
        return clamp01(u);
    }
    const char* kind() const override { return "sato_gamma"; }
    nlohmann::json to_json() const override {
        return {{"kind", "sato_gamma"}, {"params", {{"beta", beta}, {"k", k}}}};
    }
};

struct TabulatedNode final : DistortionNode {
    TabulatedNode(std::vector<double> u, std::vector<double> v, double zl)
        : us(std::move(u)), vs(std::move(v)), zero(zl) {}
    std::vector<double> us, vs;
    double zero;

    double raw(double u) const override {
        if (u <= 0.0) return zero;
        if (u <= us.front()) {
            return interp(0.0, zero, us.front(), vs.front(), u);
        }
        if (u >= us.back()) {
            if (us.back() >= 1.0) return vs.back();
            return interp(us.back(), vs.back(), 1.0, 1.0, std::min(u, 1.0));
        }
        const auto it = std::upper_bound(us.begin(), us.end(), u);
        const std::size_t i = static_cast<std::size_t>(it - us.begin());
        return interp(us[i - 1], vs[i - 1], us[i], vs[i], u);
    }
    double zero_limit() const override { return zero; }
    std::optional<double> closed_inverse(double p) const override {
        // first crossing, scanning segments left to right
        if (p <= zero) return 0.0;
        double ulo = 0.0, vlo = zero;
        for (std::size_t i = 0; i < us.size(); ++i) {
            if (vs[i] >= p) return invert_segment(ulo, vlo, us[i], vs[i], p);
            ulo = us[i];
            vlo = vs[i];
        }
        if (us.back() < 1.0 && 1.0 >= p) {
            return invert_segment(ulo, vlo, 1.0, 1.0, p);
        }
        return std::nullopt;
    }
    const char* kind() const override { return "grid"; }
    nlohmann::json to_json() const override {
        return {{"kind", "grid"},
                {"grid", {{"u", us}, {"v", vs}}},
                {"zero_limit", zero}};
    }

private:
    static double interp(double x0, double y0, double x1, double y1, double x) {
        if (x1 == x0) return y1;
        const double t = (x - x0) / (x1 - x0);
        return y0 + t * (y1 - y0);
    }
    static double invert_segment(double x0, double y0, double x1, double y1,
                                 double p) {
        if (y1 <= y0) return x1;
        if (p <= y0) return x0;
        return x0 + (p - y0) * (x1 - x0) / (y1 - y0);
    }
};

struct LogPowerProductNode final : DistortionNode {
    LogPowerProductNode(std::vector<std::pair<DistortionFn, double>> t, double zl)
        : terms(std::move(t)), zero(zl) {}
    std::vector<std::pair<DistortionFn, double>> terms;
    double zero;

    double raw(double u) const override {
        if (u <= 0.0) return zero;
        return std::exp(log_raw(u));
    }
    double log_raw(double u) const override {
        if (u <= 0.0) return std::log(zero);
        KahanSum s;
        for (const auto& [fn, e] : terms) s.add(e * fn.log_raw(u));
        return s.value();
    }
    double zero_limit() const override { return zero; }
    const char* kind() const override { return "log_power_product"; }
    nlohmann::json to_json() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [fn, e] : terms) {
            arr.push_back({{"fn", fn.to_json()}, {"exponent", e}});
        }
        return {{"kind", "log_power_product"}, {"terms", arr}, {"zero_limit", zero}};
    }
};

struct CustomNode final : DistortionNode {
    CustomNode(std::function<double(double)> f, double zl, std::string lbl)
        : fn(std::move(f)), zero(zl), label(std::move(lbl)) {}
    std::function<double(double)> fn;
    double zero;
    std::string label;

    double raw(double u) const override {
        if (u <= 0.0) return zero;
        return fn(u);
    }
    double zero_limit() const override { return zero; }
    const char* kind() const override { return "custom"; }
    nlohmann::json to_json() const override {
        // no closed serialization; tabulate on the default grid
        GridSpec grid;
        std::vector<double> us, vs;
        for (double u : grid.evaluation_grid()) {
            if (u <= 0.0) continue;
            us.push_back(u);
            vs.push_back(clamp01(raw(u)));
        }
        return {{"kind", "grid"},
                {"grid", {{"u", us}, {"v", vs}}},
                {"zero_limit", clamp01(zero)},
                {"label", label}};
    }
};

// Right limit at zero of a product of powers. Bases whose own limit is a
// positive finite number contribute a finite log; bases vanishing at zero
// push the log to -inf (positive exponent) or +inf (negative exponent).
// Mixed infinities are resolved by probing the log-sum near zero.
double product_zero_limit(const std::vector<std::pair<DistortionFn, double>>& terms) {
    KahanSum finite;
    int to_neg_inf = 0, to_pos_inf = 0;
    for (const auto& [fn, e] : terms) {
        if (e == 0.0) continue;
        const double zl = fn.zero_limit();
        if (zl <= 0.0) {
            (e > 0.0 ? to_neg_inf : to_pos_inf)++;
        } else if (std::isinf(zl)) {
            (e > 0.0 ? to_pos_inf : to_neg_inf)++;
        } else {
            finite.add(e * std::log(zl));
        }
    }
    if (to_neg_inf > 0 && to_pos_inf == 0) return 0.0;
    if (to_pos_inf > 0 && to_neg_inf == 0) return kInf;
    if (to_pos_inf == 0 && to_neg_inf == 0) return std::exp(finite.value());

    // mixed: probe
    const double probes[] = {1e-6, 1e-8, 1e-10, 1e-12};
    double logv[4];
    for (int i = 0; i < 4; ++i) {
        KahanSum s;
        for (const auto& [fn, e] : terms) s.add(e * fn.log_raw(probes[i]));
        logv[i] = s.value();
    }
    if (std::abs(logv[3] - logv[2]) < 1e-6) return std::exp(logv[3]);
    if (logv[3] < logv[2]) return 0.0;
    return kInf;
}

double bisect_inverse(const DistortionFn& f, double p) {
    if (f(1.0) + 1e-12 < p) {
        throw std::domain_error("generalized inverse: target above f(1)");
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= p) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace
}  // namespace detail

using detail::DistortionNode;

DistortionFn DistortionFn::identity() {
    static const auto node = std::make_shared<const detail::IdentityNode>();
    return DistortionFn(node);
}

DistortionFn DistortionFn::constant(double value) {
    if (value < 0.0 || value > 1.0) {
        throw std::invalid_argument("constant distortion value must lie in [0,1]");
    }
    return DistortionFn(std::make_shared<const detail::ConstantNode>(value));
}

DistortionFn DistortionFn::power(double exponent) {
    if (exponent == 1.0) return identity();
    if (exponent == 0.0) return constant(1.0);
    return DistortionFn(std::make_shared<const detail::PowerNode>(exponent));
}

DistortionFn DistortionFn::piecewise_linear(double a, double b, double c) {
    if (!(a > 1.0) || !(b > 0.0) || !(c > 0.0) || b + c > 1.0) {
        throw std::invalid_argument(
            "piecewise_linear requires a > 1, b > 0, c > 0, b + c <= 1");
    }
    return DistortionFn(std::make_shared<const detail::PiecewiseLinearNode>(a, b, c));
}

DistortionFn DistortionFn::sato_gamma_factor(double beta, int k) {
    if (!(beta > 0.0) || k < 1) {
        throw std::invalid_argument("sato_gamma_factor requires beta > 0, k >= 1");
    }
    if (k == 1) return identity();
    return DistortionFn(std::make_shared<const detail::SatoGammaNode>(beta, k));
}

DistortionFn DistortionFn::tabulated(std::vector<double> u, std::vector<double> v,
                                     double zero_limit) {
    if (u.size() != v.size() || u.empty()) {
        throw std::invalid_argument("tabulated: u and v must be nonempty, same size");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || u[i] > 1.0) {
            throw std::invalid_argument("tabulated: abscissae must lie in [0,1]");
        }
        if (i > 0 && !(u[i] > u[i - 1])) {
            throw std::invalid_argument("tabulated: abscissae must be strictly increasing");
        }
        if (v[i] < 0.0 || v[i] > 1.0) {
            throw std::invalid_argument("tabulated: values must lie in [0,1]");
        }
    }
    if (zero_limit < 0.0 || zero_limit > 1.0) {
        throw std::invalid_argument("tabulated: zero limit must lie in [0,1]");
    }
    return DistortionFn(std::make_shared<const detail::TabulatedNode>(
        std::move(u), std::move(v), zero_limit));
}

DistortionFn DistortionFn::log_power_product(
    std::vector<std::pair<DistortionFn, double>> terms) {
    if (terms.empty()) return constant(1.0);
    for (const auto& [fn, e] : terms) {
        (void)e;
        // bases must be strictly positive on (0,1] for the log evaluation
        for (double probe : {1e-8, 0.25, 0.5, 0.75, 1.0}) {
            if (!(fn.raw(probe) > 0.0)) {
                throw std::invalid_argument(
                    "log_power_product: base function vanishes on (0,1]");
            }
        }
    }
    // fold pure products of powers: prod (c_i u^{a_i})^{e_i} = C u^{A}
    bool all_powers = true;
    double folded_expo = 0.0;
    KahanSum coef_log;
    for (const auto& [fn, e] : terms) {
        const auto pf = fn.power_form();
        if (!pf) {
            all_powers = false;
            break;
        }
        coef_log.add(e * std::log(pf->first));
        folded_expo += e * pf->second;
    }
    if (all_powers && std::abs(coef_log.value()) < 1e-15) {
        return power(folded_expo);
    }
    const double zl = detail::product_zero_limit(terms);
    return DistortionFn(std::make_shared<const detail::LogPowerProductNode>(
        std::move(terms), zl));
}

DistortionFn DistortionFn::custom(std::function<double(double)> fn, double zero_limit,
                                  std::string label) {
    return DistortionFn(std::make_shared<const detail::CustomNode>(
        std::move(fn), zero_limit, std::move(label)));
}

double DistortionFn::operator()(double u) const { return clamp01(node_->raw(u)); }

double DistortionFn::raw(double u) const { return node_->raw(u); }

double DistortionFn::log_raw(double u) const { return node_->log_raw(u); }

double DistortionFn::zero_limit() const { return node_->zero_limit(); }

double DistortionFn::inverse(double p) const {
    if (p < 0.0 || p > 1.0) {
        throw std::domain_error("generalized inverse: p must lie in [0,1]");
    }
    if (p <= clamp01(zero_limit())) return 0.0;
    if (auto ci = node_->closed_inverse(p)) return clamp01(*ci);
    return detail::bisect_inverse(*this, p);
}

bool DistortionFn::is_constant_one() const {
    return zero_limit() >= 1.0 - 1e-15;
}

const char* DistortionFn::kind() const { return node_->kind(); }

std::optional<std::pair<double, double>> DistortionFn::power_form() const {
    return node_->power_form();
}

nlohmann::json DistortionFn::to_json() const { return node_->to_json(); }

DistortionFn DistortionFn::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return identity();
    if (kind == "constant") {
        return constant(j.at("params").at("value").get<double>());
    }
    if (kind == "power") {
        return power(j.at("params").at("exponent").get<double>());
    }
    if (kind == "piecewise_linear") {
        const auto& p = j.at("params");
        return piecewise_linear(p.at("a").get<double>(), p.at("b").get<double>(),
                                p.at("c").get<double>());
    }
    if (kind == "sato_gamma") {
        const auto& p = j.at("params");
        return sato_gamma_factor(p.at("beta").get<double>(), p.at("k").get<int>());
    }
    if (kind == "grid") {
        return tabulated(j.at("grid").at("u").get<std::vector<double>>(),
                         j.at("grid").at("v").get<std::vector<double>>(),
                         j.at("zero_limit").get<double>());
    }
    if (kind == "log_power_product") {
        std::vector<std::pair<DistortionFn, double>> terms;
        for (const auto& t : j.at("terms")) {
            terms.emplace_back(from_json(t.at("fn")), t.at("exponent").get<double>());
        }
        return log_power_product(std::move(terms));
    }
    throw std::invalid_argument("unknown distortion kind: " + kind);
}

}  // namespace escop
