#include "escop/bernstein.hpp"

#include <cmath>
#include <stdexcept>

namespace escop {

Psi1 Psi1::log_form(double beta, double eta) {
    if (!(beta > 0.0) || !(eta > 0.0)) {
        throw std::invalid_argument("log form requires beta > 0 and eta > 0");
    }
    Psi1 p;
    p.form = Form::log;
    p.beta = beta;
    p.eta = eta;
    return p;
}

Psi1 Psi1::cpp_form(double drift, double rate, double jump_mean) {
    if (drift < 0.0 || rate < 0.0 || (drift == 0.0 && rate == 0.0)) {
        throw std::invalid_argument("cpp form requires drift, rate >= 0, not both 0");
    }
    if (rate > 0.0 && !(jump_mean > 0.0)) {
        throw std::invalid_argument("cpp form requires jump_mean > 0 when rate > 0");
    }
    Psi1 p;
    p.form = Form::cpp;
    p.drift = drift;
    p.rate = rate;
    p.jump_mean = jump_mean;
    return p;
}

double Psi1::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (form == Form::log) return beta * std::log1p(x / eta);
    return drift * x + rate * (1.0 - 1.0 / (1.0 + jump_mean * x));
}

double Psi1::inverse(double y) const {
    if (y <= 0.0) return 0.0;
    if (form == Form::log) return eta * std::expm1(y / beta);
    if (drift == 0.0) {
        // rate * m x / (1 + m x) = y, solvable only below the asymptote
        if (y >= rate) {
            throw std::domain_error("Psi_1 inverse: level above the cpp asymptote");
        }
        return y / (jump_mean * (rate - y));
    }
    // drift*m x^2 + (drift + rate*m - y*m) x - y = 0, positive root
    const double a = drift * jump_mean;
    const double b = drift + rate * jump_mean - y * jump_mean;
    const double c = -y;
    return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

nlohmann::json Psi1::to_json() const {
    if (form == Form::log) {
        return {{"form", "log"}, {"beta", beta}, {"eta", eta}};
    }
    return {{"form", "cpp"}, {"drift", drift}, {"rate", rate}, {"jump_mean", jump_mean}};
}

Psi1 Psi1::from_json(const nlohmann::json& j) {
    const std::string form = j.at("form").get<std::string>();
    if (form == "log") {
        return log_form(j.at("beta").get<double>(), j.at("eta").get<double>());
    }
    if (form == "cpp") {
        return cpp_form(j.at("drift").get<double>(), j.at("rate").get<double>(),
                        j.value("jump_mean", 1.0));
    }
    throw std::invalid_argument("unknown psi1 form: " + form);
}

BernsteinFamily BernsteinFamily::levy(Psi1 psi1) {
    BernsteinFamily f;
    f.kind = Kind::levy;
    f.psi1 = psi1;
    return f;
}

BernsteinFamily BernsteinFamily::sato(Psi1 psi1, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("sato kind requires H > 0");
    if (psi1.form != Psi1::Form::log) {
        // Psi_t - Psi_s must stay a Bernstein function, which for the Sato
        // time change requires a self-decomposable exponent. The exponential
        // jump density s -> rate/mean * exp(-s/mean) fails that (s * density
        // is not decreasing), so the compound-Poisson form is rejected here.
        throw std::invalid_argument(
            "sato kind requires a self-decomposable exponent; use the log form");
    }
    BernsteinFamily f;
    f.kind = Kind::sato;
    f.psi1 = psi1;
    f.sato_h = h;
    return f;
}

double BernsteinFamily::psi(double t, double x) const {
    if (t <= 0.0 || x <= 0.0) return 0.0;
    if (kind == Kind::levy) return t * psi1(x);
    return psi1(x * std::pow(t, sato_h));
}

nlohmann::json BernsteinFamily::to_json() const {
    return {{"kind", kind == Kind::levy ? "levy" : "sato"},
            {"psi1", psi1.to_json()},
            {"H", sato_h}};
}

std::string BernsteinFamily::descriptor() const { return to_json().dump(); }

std::string BernsteinFamily::levy_khintchine_note() const {
    std::string base;
    if (psi1.form == Psi1::Form::log) {
        base = "a_1 = 0, b_1 = 0, nu_1(ds) = " + std::to_string(psi1.beta) +
               " * exp(-" + std::to_string(psi1.eta) + " s)/s ds";
    } else {
        base = "a_1 = 0, b_1 = " + std::to_string(psi1.drift) + ", nu_1(ds) = " +
               std::to_string(psi1.rate) + " * Exp(mean " +
               std::to_string(psi1.jump_mean) + ") jump law";
    }
    if (kind == Kind::levy) {
        return base + "; Levy scaling: a_t = 0, b_t = t b_1, nu_t = t nu_1";
    }
    return base + "; Sato scaling with H = " + std::to_string(sato_h) +
           ": nu_t(A) = nu_1(t^{-H} A)";
}

BernsteinFamily BernsteinFamily::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    Psi1 psi1 = Psi1::from_json(j.at("psi1"));
    if (kind == "levy") return levy(psi1);
    if (kind == "sato") return sato(psi1, j.value("H", 1.0));
    throw std::invalid_argument("unknown bernstein kind: " + kind);
}

double marginal_survival(const BernsteinFamily& f, double x) {
    if (x < 0.0) throw std::domain_error("marginal_survival: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (f.kind == BernsteinFamily::Kind::levy) return std::exp(-x * f.psi1(1.0));
    return std::exp(-f.psi1(std::pow(x, f.sato_h)));
}

double marginal_survival_inverse(const BernsteinFamily& f, double u) {
    if (!(u > 0.0) || u > 1.0) {
        throw std::domain_error("marginal_survival_inverse: u must lie in (0,1]");
    }
    const double y = -std::log(u);
    if (f.kind == BernsteinFamily::Kind::levy) return y / f.psi1(1.0);
    return std::pow(f.psi1.inverse(y), 1.0 / f.sato_h);
}

OrderedFactorCopula copula_from_bernstein(const BernsteinFamily& f, int d,
                                          const GridSpec& grid) {
    if (d < 2) throw std::invalid_argument("copula_from_bernstein: d must be >= 2");
    std::vector<DistortionFn> g;
    g.reserve(static_cast<std::size_t>(d));

    if (f.kind == BernsteinFamily::Kind::levy) {
        // g_k(u) = u^{(Psi_1(k) - Psi_1(k-1)) / Psi_1(1)}
        const double norm = f.psi1(1.0);
        g.push_back(DistortionFn::identity());
        for (int k = 2; k <= d; ++k) {
            g.push_back(DistortionFn::power((f.psi1(k) - f.psi1(k - 1)) / norm));
        }
        return OrderedFactorCopula::make(d, std::move(g), grid);
    }

    // Sato kind (log form by construction): the factors are the closed
    // ratios; eta and the self-similarity index H cancel.
    g.push_back(DistortionFn::identity());
    for (int k = 2; k <= d; ++k) {
        g.push_back(DistortionFn::sato_gamma_factor(f.psi1.beta, k));
    }
    return OrderedFactorCopula::make(d, std::move(g), grid);
}

}  // namespace escop
