// Acceptance suite: one line per criterion, tolerances pinned in code.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "escop/diagnostics.hpp"
#include "escop/families.hpp"
#include "escop/frailty_sampler.hpp"
#include "escop/serialize.hpp"
#include "escop/shock_sampler.hpp"
#include "escop/util.hpp"
#include "escop/validity.hpp"

using namespace escop;

namespace {

constexpr int kWorkers = 4;

struct Result {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

const std::vector<double> kMarks{0.1, 0.3, 0.5, 0.7, 0.9};

struct Preset {
    std::string name;
    OrderedFactorCopula copula;
};

std::vector<Preset> valid_presets_all_dims() {
    std::vector<Preset> out;
    for (int d : {2, 3, 4}) {
        out.push_back({"independence d=" + std::to_string(d), independence(d)});
        out.push_back({"comonotone d=" + std::to_string(d), comonotone(d)});
        out.push_back({"sato_gamma(beta=1) d=" + std::to_string(d),
                       sato_gamma(1.0, 1.0, 1.0, d).first});
        out.push_back({"sato_gamma(beta=2) d=" + std::to_string(d),
                       sato_gamma(2.0, 1.0, 1.0, d).first});
    }
    out.push_back({"piecewise_linear(2,0.2,0.5)",
                   piecewise_linear_bivariate(2.0, 0.2, 0.5)});
    out.push_back({"marshall_olkin(1,0.5,0.25) d=3",
                   marshall_olkin({1.0, 0.5, 0.25}, 3)});
    return out;
}

// the six presets at their reference dimensions, used by the sampling criteria
std::vector<Preset> sampling_presets() {
    return {{"independence", independence(3)},
            {"comonotone", comonotone(3)},
            {"piecewise_linear(2,0.2,0.5)", piecewise_linear_bivariate(2.0, 0.2, 0.5)},
            {"marshall_olkin(1,0.5,0.25)", marshall_olkin({1.0, 0.5, 0.25}, 3)},
            {"sato_gamma(beta=1)", sato_gamma(1.0, 1.0, 1.0, 3).first},
            {"sato_gamma(beta=2)", sato_gamma(2.0, 1.0, 1.0, 3).first}};
}

Result criterion1_theorem_equivalence() {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& p : valid_presets_all_dims()) {
        for (Condition cond : {Condition::ii, Condition::iii, Condition::iv}) {
            const auto rep = validate(p.copula, cond, GridSpec{}, kWorkers);
            r.require(rep.verdict == Verdict::pass,
                      p.name + " fails condition " + to_string(cond));
        }
    }
    // broken input 1: g_2(u) = u^2
    const auto sq = OrderedFactorCopula::make(
        2, {DistortionFn::identity(), DistortionFn::power(2.0)});
    for (Condition cond : {Condition::ii, Condition::iii, Condition::iv}) {
        const auto rep = validate(sq, cond, GridSpec{}, kWorkers);
        r.require(rep.verdict == Verdict::fail && !rep.witnesses.empty(),
                  std::string("g2=u^2 slips through condition ") + to_string(cond));
    }
    // broken input 2: non-monotone Marshall-Olkin exponents
    const auto mo_bad = marshall_olkin({1.0, 0.9, 0.1}, 3, /*gate=*/false);
    for (Condition cond : {Condition::ii, Condition::iii, Condition::iv}) {
        const auto rep = validate(mo_bad, cond, GridSpec{}, kWorkers);
        r.require(rep.verdict == Verdict::fail && !rep.witnesses.empty(),
                  std::string("mo(1,0.9,0.1) slips through condition ") +
                      to_string(cond));
    }
    // broken input 3: H family violating the normalization constraint
    HFamily bad_h{2, {DistortionFn::power(0.5), DistortionFn::power(0.3)}};
    bool rejected = false;
    try {
        (void)g_from_h(bad_h);
    } catch (const std::domain_error&) {
        rejected = true;
    }
    r.require(rejected, "non-normalized H family was accepted");

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(secs < 10.0, "runtime " + std::to_string(secs) + " s >= 10 s");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "14 valid configs, 3 broken inputs, %.2f s", secs);
    r.detail = r.pass ? buf : r.detail;
    return r;
}

Result criterion2_closed_form_cross_check() {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = sato_gamma(1.0, 1.0, 1.0, 2).first;
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            const double u1 = i / 100.0, u2 = j / 100.0;
            const double lo = std::min(u1, u2), hi = std::max(u1, u2);
            const double closed = lo / (2.0 - hi);
            worst = std::max(worst,
                             std::abs(c.cdf(std::vector<double>{u1, u2}) - closed));
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(worst <= 1e-12, "max deviation " + std::to_string(worst));
    r.require(secs < 1.0, "runtime " + std::to_string(secs) + " s >= 1 s");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |prod g - closed form| = %.2e, %.2f s",
                  worst, secs);
    r.detail = r.pass ? buf : r.detail;
    return r;
}

Result criterion3_sampler_equivalence() {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    const auto [copula, family] = sato_gamma(1.0, 1.0, 1.0, 3);
    const auto shock =
        sample_shock(build_shock_model(copula), 200000, 1001, kWorkers);
    const auto frailty = sample_frailty(family, 3, 200000, 1002, kWorkers);
    const double dist = sup_distance(shock, frailty, tensor_grid(3, kMarks), kWorkers);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(dist <= 0.012, "sup distance " + std::to_string(dist) + " > 0.012");
    r.require(secs < 60.0, "runtime " + std::to_string(secs) + " s >= 60 s");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "sup distance %.4f (tol 0.012), %.1f s", dist,
                  secs);
    r.detail = r.pass ? buf : r.detail;
    return r;
}

Result criterion4_marshall_olkin_frailty() {
    Result r;
    // gamma Levy subordinator, eta = 1, beta normalized so Psi_1(1) = 1
    const double beta = 1.0 / std::log(2.0);
    const auto f = BernsteinFamily::levy(Psi1::log_form(beta, 1.0));
    const auto c = copula_from_bernstein(f, 2);
    const double a1 = std::log(1.5) / std::log(2.0);
    const auto pf = c.g(2).power_form();
    r.require(pf && std::abs(pf->second - a1) <= 1e-12,
              "exponent a_1 != log(3/2)/log 2");

    const auto batch = sample_frailty(f, 2, 200000, 1003, kWorkers);
    const double dist = sup_distance(batch, c, tensor_grid(2, kMarks), kWorkers);
    r.require(dist <= 0.01, "sup distance " + std::to_string(dist) + " > 0.01");

    const auto tail = estimate_tail_dependence(batch);
    r.require(tail.conclusive, "tail estimate inconclusive");
    r.require(std::abs(tail.lambda_u - (1.0 - a1)) <= 0.05,
              "lambda_U estimate " + std::to_string(tail.lambda_u) + " vs " +
                  std::to_string(1.0 - a1));
    char buf[112];
    std::snprintf(buf, sizeof(buf),
                  "a1=%.5f, sup distance %.4f (tol 0.01), lambdaU_hat=%.3f (true %.3f)",
                  a1, dist, tail.lambda_u, 1.0 - a1);
    r.detail = r.pass ? buf : r.detail;
    return r;
}

Result criterion5_tail_dependence() {
    Result r;
    const auto c = piecewise_linear_bivariate(2.0, 0.2, 0.5);
    const auto analytic = tail_dependence(c.g(2));
    r.require(std::abs(analytic.lambda_l - 0.2) <= 1e-9, "analytic lambda_L != b");
    r.require(std::abs(analytic.lambda_u - 0.5) <= 1e-9, "analytic lambda_U != 1-c");

    const auto batch =
        sample_shock(build_shock_model(c), 1000000, 1004, kWorkers);
    const auto est = estimate_tail_dependence(batch);
    r.require(est.conclusive, "tail estimate inconclusive");
    r.require(std::abs(est.lambda_l - 0.2) <= 0.05,
              "lambda_L estimate " + std::to_string(est.lambda_l));
    r.require(std::abs(est.lambda_u - 0.5) <= 0.05,
              "lambda_U estimate " + std::to_string(est.lambda_u));
    char buf[112];
    std::snprintf(buf, sizeof(buf),
                  "analytic (%.3f, %.3f); estimates (%.3f, %.3f) at n=1e6",
                  analytic.lambda_l, analytic.lambda_u, est.lambda_l, est.lambda_u);
    r.detail = r.pass ? buf : r.detail;
    return r;
}

Result criterion6_g_identity_oracle() {
    Result r;
    std::string counts;
    for (const auto& p : sampling_presets()) {
        const auto batch =
            sample_shock(build_shock_model(p.copula), 20000, 1005, kWorkers);
        SubstreamRng rng(1006, fnv1a(p.name));
        const int d = p.copula.dim();
        int passed = 0, total = 0;
        while (total < 100) {
            const int j =
                1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(d));
            const int k = static_cast<int>(rng.next_u64() %
                                           static_cast<std::uint64_t>(d - j + 1));
            double u = 0.02 + 0.96 * rng.uniform01();
            double v = 0.02 + 0.96 * rng.uniform01();
            if (u > v) std::swap(u, v);
            if (v - u < 0.01) continue;
            ++total;
            if (mc_check_G(p.copula, batch, j, k, u, v).pass) ++passed;
        }
        r.require(passed >= 99, p.name + ": only " + std::to_string(passed) +
                                    "/100 configs within 5 sigma");
        counts += (counts.empty() ? "" : ", ") + std::to_string(passed);
    }
    r.detail = r.pass ? ("passes per preset: " + counts + " (need >= 99)") : r.detail;
    return r;
}

Result criterion7_marginal_uniformity() {
    Result r;
    const std::size_t n = 100000;
    const double band = 1.63 / std::sqrt(static_cast<double>(n));
    const GridSpec grid;
    // the grid passage rounds U down by at most one cell
    const double frailty_band = band + 1.0 / grid.path_points;
    std::uint64_t seed = 5555;
    double worst_shock = 0.0, worst_frailty = 0.0;
    for (const auto& p : sampling_presets()) {
        const auto batch =
            sample_shock(build_shock_model(p.copula), n, seed++, kWorkers);
        for (int k = 0; k < batch.d; ++k) {
            const double ks = ks_statistic(batch, k);
            worst_shock = std::max(worst_shock, ks);
            r.require(ks <= band, p.name + " shock column " + std::to_string(k + 1) +
                                      ": KS " + std::to_string(ks));
        }
    }
    std::vector<std::pair<std::string, BernsteinFamily>> frailty_families = {
        {"sato_gamma(beta=1)", BernsteinFamily::sato(Psi1::log_form(1.0, 1.0), 1.0)},
        {"sato_gamma(beta=2)", BernsteinFamily::sato(Psi1::log_form(2.0, 1.0), 1.0)},
        {"levy_gamma(normalized)",
         BernsteinFamily::levy(Psi1::log_form(1.0 / std::log(2.0), 1.0))}};
    for (const auto& [name, fam] : frailty_families) {
        const auto batch = sample_frailty(fam, 3, n, seed++, kWorkers);
        for (int k = 0; k < batch.d; ++k) {
            const double ks = ks_statistic(batch, k);
            worst_frailty = std::max(worst_frailty, ks);
            r.require(ks <= frailty_band, name + " frailty column " +
                                              std::to_string(k + 1) + ": KS " +
                                              std::to_string(ks));
        }
    }
    char buf[112];
    std::snprintf(buf, sizeof(buf),
                  "worst KS: shock %.4f (band %.4f), frailty %.4f (band %.4f)",
                  worst_shock, band, worst_frailty, frailty_band);
    r.detail = r.pass ? buf : r.detail;
    return r;
}

Result criterion8_determinism() {
    Result r;
    const auto [copula, family] = sato_gamma(1.0, 1.0, 1.0, 3);
    const auto spec = build_shock_model(copula, GridSpec{}, "sato_gamma");
    const std::string s1 = batch_to_csv(sample_shock(spec, 20000, 1008, 1));
    const std::string s4 = batch_to_csv(sample_shock(spec, 20000, 1008, 4));
    const std::string s8 = batch_to_csv(sample_shock(spec, 20000, 1008, 8));
    const std::string s1b = batch_to_csv(sample_shock(spec, 20000, 1008, 1));
    r.require(s1 == s4 && s1 == s8 && s1 == s1b, "shock CSV differs across runs");

    const std::string f1 = batch_to_csv(sample_frailty(family, 3, 20000, 1009, 1));
    const std::string f4 = batch_to_csv(sample_frailty(family, 3, 20000, 1009, 4));
    const std::string f8 = batch_to_csv(sample_frailty(family, 3, 20000, 1009, 8));
    const std::string f1b = batch_to_csv(sample_frailty(family, 3, 20000, 1009, 1));
    r.require(f1 == f4 && f1 == f8 && f1 == f1b, "frailty CSV differs across runs");
    r.detail = r.pass ? "shock and frailty byte-identical for workers 1, 4, 8" : r.detail;
    return r;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Result()> run;
    };
    const std::vector<Entry> criteria = {
        {"1 theorem-equivalence suite", criterion1_theorem_equivalence},
        {"2 closed-form cross-check (Sato-gamma d=2)", criterion2_closed_form_cross_check},
        {"3 sampler equivalence (shock vs frailty)", criterion3_sampler_equivalence},
        {"4 Marshall-Olkin frailty consistency", criterion4_marshall_olkin_frailty},
        {"5 tail-dependence formulas", criterion5_tail_dependence},
        {"6 G-identity oracle", criterion6_g_identity_oracle},
        {"7 marginal uniformity (KS 99% band)", criterion7_marginal_uniformity},
        {"8 determinism across worker counts", criterion8_determinism},
    };
    int failures = 0;
    for (const auto& e : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = e.run();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("[%s] criterion %s (%.1f s)%s%s\n", r.pass ? "PASS" : "FAIL",
                    e.name, secs, r.detail.empty() ? "" : " -- ",
                    r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu acceptance criteria passed\n",
                static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
