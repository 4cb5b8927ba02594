#include "escop/families.hpp"

#include <cmath>
#include <stdexcept>

namespace escop {

OrderedFactorCopula independence(int d) {
    return marshall_olkin(std::vector<double>(static_cast<std::size_t>(d), 1.0), d);
}

OrderedFactorCopula comonotone(int d) {
    std::vector<double> a(static_cast<std::size_t>(d), 0.0);
    a[0] = 1.0;
    return marshall_olkin(a, d);
}

OrderedFactorCopula marshall_olkin(const std::vector<double>& a, int d, bool gate) {
    if (static_cast<int>(a.size()) < d) {
        throw std::invalid_argument("marshall_olkin: sequence shorter than d");
    }
    if (std::abs(a[0] - 1.0) > 1e-12) {
        throw std::invalid_argument("marshall_olkin: a_0 must equal 1");
    }
    if (gate) {
        const auto [ok, witness] = is_d_monotone(a, d);
        if (!ok) {
            throw std::invalid_argument(
                "marshall_olkin: sequence is not d-monotone (witness k=" +
                std::to_string(witness->k) + ", j=" + std::to_string(witness->j) +
                ", sum=" + std::to_string(witness->value) + ")");
        }
    }
    std::vector<DistortionFn> g;
    g.reserve(static_cast<std::size_t>(d));
    g.push_back(DistortionFn::identity());
    for (int k = 2; k <= d; ++k) {
        g.push_back(DistortionFn::power(a[static_cast<std::size_t>(k - 1)]));
    }
    return OrderedFactorCopula::make(d, std::move(g));
}

std::pair<OrderedFactorCopula, BernsteinFamily> sato_gamma(double beta, double eta,
                                                           double h, int d) {
    if (!(beta > 0.0) || !(eta > 0.0) || !(h > 0.0)) {
        throw std::invalid_argument("sato_gamma: beta, eta, H must be positive");
    }
    BernsteinFamily family = BernsteinFamily::sato(Psi1::log_form(beta, eta), h);
    return {copula_from_bernstein(family, d), family};
}

OrderedFactorCopula piecewise_linear_bivariate(double a, double b, double c,
                                               const GridSpec& grid, bool gate) {
    std::vector<DistortionFn> g;
    g.push_back(DistortionFn::identity());
    g.push_back(DistortionFn::piecewise_linear(a, b, c));
    OrderedFactorCopula copula = OrderedFactorCopula::make(2, std::move(g), grid);
    if (gate) {
        const ValidityReport r = validate(copula, Condition::ii, grid);
        if (r.verdict != Verdict::pass) {
            throw std::invalid_argument(
                "piecewise_linear_bivariate: condition (ii) fails for these "
                "parameters");
        }
    }
    return copula;
}

LoadedFamily family_from_json(const nlohmann::json& j, bool gate_validity,
                              const GridSpec& grid) {
    if (j.contains("kind") && j.contains("psi1")) {
        const int d = j.value("d", 2);
        BernsteinFamily f = BernsteinFamily::from_json(j);
        nlohmann::json desc = f.to_json();
        desc["d"] = d;
        return LoadedFamily{copula_from_bernstein(f, d, grid), f, desc, "bernstein"};
    }
    const std::string name = j.at("name").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    const int d = j.value("d", 2);
    nlohmann::json desc = {{"name", name}, {"params", params}, {"d", d}};

    if (name == "independence") {
        return LoadedFamily{independence(d), std::nullopt, desc, name};
    }
    if (name == "comonotone") {
        return LoadedFamily{comonotone(d), std::nullopt, desc, name};
    }
    if (name == "marshall_olkin") {
        const auto a = params.at("a").get<std::vector<double>>();
        return LoadedFamily{marshall_olkin(a, d, gate_validity), std::nullopt, desc,
                            name};
    }
    if (name == "sato_gamma") {
        auto [copula, family] = sato_gamma(params.at("beta").get<double>(),
                                           params.value("eta", 1.0),
                                           params.value("H", 1.0), d);
        return LoadedFamily{std::move(copula), family, desc, name};
    }
    if (name == "piecewise_linear_bivariate") {
        if (j.contains("d") && d != 2) {
            throw std::invalid_argument("piecewise_linear_bivariate is bivariate");
        }
        desc["d"] = 2;
        return LoadedFamily{
            piecewise_linear_bivariate(params.at("a").get<double>(),
                                       params.at("b").get<double>(),
                                       params.at("c").get<double>(), grid,
                                       gate_validity),
            std::nullopt, desc, name};
    }
    throw std::invalid_argument("unknown family name: " + name);
}

}  // namespace escop
