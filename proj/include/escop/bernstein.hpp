#ifndef ESCOP_BERNSTEIN_HPP
#define ESCOP_BERNSTEIN_HPP

#include <string>

#include <json.hpp>

#include "escop/copula.hpp"
#include "escop/grid.hpp"

namespace escop {

// Base Laplace exponent Psi_1 of an additive subordinator. Two named forms:
//   log: beta * log(1 + x / eta)                (gamma subordinator)
//   cpp: drift * x + rate * (1 - 1/(1 + jump_mean * x))
//        (compound Poisson with exponential jumps, plus linear drift)
struct Psi1 {
    enum class Form { log, cpp };
    Form form = Form::log;
    double beta = 1.0, eta = 1.0;                       // log form
    double drift = 0.0, rate = 0.0, jump_mean = 1.0;    // cpp form

    static Psi1 log_form(double beta, double eta);
    static Psi1 cpp_form(double drift, double rate, double jump_mean);

    double operator()(double x) const;
    double inverse(double y) const;  // solves Psi_1(x) = y, closed form
    nlohmann::json to_json() const;
    static Psi1 from_json(const nlohmann::json& j);
};

// Consistent Bernstein family {Psi_t}: Levy kind has Psi_t = t Psi_1,
// Sato kind has Psi_t(x) = Psi_1(x t^H).
struct BernsteinFamily {
    enum class Kind { levy, sato };
    Kind kind = Kind::levy;
    Psi1 psi1;
    double sato_h = 1.0;  // self-similarity index H; unused for the Levy kind

    static BernsteinFamily levy(Psi1 psi1);
    static BernsteinFamily sato(Psi1 psi1, double h);

    double psi(double t, double x) const;  // Psi_t(x)
    nlohmann::json to_json() const;
    std::string descriptor() const;  // canonical JSON string
    // descriptive Levy-Khintchine record (a_t, b_t, nu_t), documentation only
    std::string levy_khintchine_note() const;
    static BernsteinFamily from_json(const nlohmann::json& j);
};

// Survival function of a first-passage time across a unit exponential
// trigger: F-bar(x) = exp(-Psi_x(1)).
double marginal_survival(const BernsteinFamily& f, double x);
double marginal_survival_inverse(const BernsteinFamily& f, double u);

// The survival copula of d exceedance times, in ordered-product form:
// g_k(u) = exp(-Psi_{tau}(k) + Psi_{tau}(k-1)) with tau = F-bar^{-1}(u).
// Levy kind yields power functions; Sato log form yields the closed
// sato-gamma factors (independent of eta and H).
OrderedFactorCopula copula_from_bernstein(const BernsteinFamily& f, int d,
                                          const GridSpec& grid = GridSpec{});

}  // namespace escop

#endif
