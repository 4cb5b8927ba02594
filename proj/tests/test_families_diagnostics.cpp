#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "escop/diagnostics.hpp"
#include "escop/families.hpp"
#include "escop/frailty_sampler.hpp"
#include "escop/serialize.hpp"

using namespace escop;

namespace {

// independent oracle: the full Sato-gamma product form
double sato_closed_form(double beta, std::vector<double> u) {
    std::sort(u.begin(), u.end());
    double prod = 1.0;
    for (std::size_t k = 1; k <= u.size(); ++k) {
        const double w = std::pow(u[k - 1], -1.0 / beta) - 1.0;
        prod *= (1.0 + (static_cast<double>(k) - 1.0) * w) /
                (1.0 + static_cast<double>(k) * w);
    }
    return std::pow(prod, beta);
}

}  // namespace

TEST_CASE("marshall_olkin presets") {
    const auto ind = marshall_olkin({1.0, 1.0, 1.0}, 3);
    CHECK(ind.cdf(std::vector<double>{0.2, 0.4, 0.5}) ==
          doctest::Approx(0.04).epsilon(1e-14));

    const auto como = marshall_olkin({1.0, 0.0, 0.0}, 3);
    CHECK(como.cdf(std::vector<double>{0.2, 0.4, 0.5}) ==
          doctest::Approx(0.2).epsilon(1e-14));

    const auto mo = marshall_olkin({1.0, 0.5, 0.25}, 3);
    const auto t = tail_dependence(mo.g(2));
    CHECK(t.lambda_u == doctest::Approx(0.5).epsilon(1e-9));

    CHECK_THROWS_WITH_AS(marshall_olkin({1.0, 0.9, 0.1}, 3),
                         doctest::Contains("k=0, j=3"), std::invalid_argument);
    CHECK_THROWS(marshall_olkin({0.9, 0.5}, 2));  // a_0 != 1
}

TEST_CASE("sato_gamma closed form and nuisance invariance") {
    const auto [c1, f1] = sato_gamma(1.0, 1.0, 1.0, 2);
    CHECK(c1.cdf(std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const auto [c2, f2] = sato_gamma(2.0, 1.0, 1.0, 3);
    const std::vector<double> pt{0.5, 0.5, 0.5};
    CHECK(c2.cdf(pt) == doctest::Approx(sato_closed_form(2.0, pt)).epsilon(1e-12));

    // eta and H do not enter the copula at all
    const auto [c3, f3] = sato_gamma(2.0, 5.0, 0.3, 3);
    for (double u : {0.1, 0.35, 0.8}) {
        std::vector<double> q{u, 0.6, 0.25};
        CHECK(c2.cdf(q) == c3.cdf(q));
    }
    CHECK_THROWS(sato_gamma(-1.0, 1.0, 1.0, 2));
    CHECK_THROWS(sato_gamma(1.0, 0.0, 1.0, 2));
}

TEST_CASE("piecewise linear family") {
    const auto c = piecewise_linear_bivariate(2.0, 0.2, 0.5);
    const auto t = tail_dependence(c.g(2));
    CHECK(t.lambda_l == doctest::Approx(0.2));
    CHECK(t.lambda_u == doctest::Approx(0.5).epsilon(1e-9));
    // kink at (1-(b+c))/(a-c) = 0.2
    const double kink = (1.0 - 0.7) / (2.0 - 0.5);
    CHECK(kink == doctest::Approx(0.2));
    CHECK(c.g(2)(kink) == doctest::Approx(2.0 * kink + 0.2));

    CHECK_THROWS(piecewise_linear_bivariate(2.0, 0.5, 0.6));  // b + c > 1
    CHECK_THROWS(piecewise_linear_bivariate(0.9, 0.2, 0.5));  // a <= 1
}

TEST_CASE("every preset passes condition (iv)") {
    const auto presets = {independence(4), comonotone(4),
                          piecewise_linear_bivariate(2.0, 0.2, 0.5),
                          marshall_olkin({1.0, 0.5, 0.25}, 3),
                          sato_gamma(1.0, 1.0, 1.0, 4).first,
                          sato_gamma(2.0, 2.0, 0.5, 3).first};
    for (const auto& c : presets) {
        CHECK(validate(c, Condition::iv).verdict == Verdict::pass);
    }
}

TEST_CASE("marshall_olkin round-trips through extreme-value detection") {
    const std::vector<double> a{1.0, 0.62, 0.4, 0.33};
    const auto c = marshall_olkin(a, 4);
    const auto detected = detect_extreme_value(c);
    REQUIRE(detected.has_value());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK((*detected)[i] == doctest::Approx(a[i]).epsilon(1e-12));
    }
}

TEST_CASE("family descriptors parse from JSON") {
    const auto mo = family_from_json(nlohmann::json{
        {"name", "marshall_olkin"}, {"params", {{"a", {1.0, 0.5, 0.25}}}}, {"d", 3}});
    CHECK(mo.copula.dim() == 3);
    CHECK(!mo.bernstein.has_value());

    const auto sg = family_from_json(nlohmann::json{
        {"name", "sato_gamma"},
        {"params", {{"beta", 1.0}, {"eta", 1.0}, {"H", 1.0}}},
        {"d", 2}});
    REQUIRE(sg.bernstein.has_value());
    CHECK(sg.copula.cdf(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0 / 3.0));

    const auto bern = family_from_json(nlohmann::json{
        {"kind", "levy"},
        {"psi1", {{"form", "log"}, {"beta", 1.0}, {"eta", 1.0}}},
        {"H", 1.0},
        {"d", 2}});
    REQUIRE(bern.bernstein.has_value());

    // broken inputs are loadable when gating is off, for the validate path
    const auto broken = family_from_json(
        nlohmann::json{
            {"name", "marshall_olkin"}, {"params", {{"a", {1.0, 0.9, 0.1}}}}, {"d", 3}},
        /*gate_validity=*/false);
    CHECK(validate(broken.copula, Condition::iv).verdict == Verdict::fail);
    CHECK_THROWS(family_from_json(nlohmann::json{{"name", "nope"}, {"d", 2}}));
}

TEST_CASE("empirical copula counts rows") {
    SampleBatch b;
    b.n = 4;
    b.d = 2;
    b.data = {0.1, 0.1, 0.2, 0.9, 0.9, 0.2, 0.8, 0.8};
    const auto vals = empirical_copula(b, {{0.5, 0.5}, {1.0, 1.0}, {0.85, 0.85}});
    CHECK(vals[0] == doctest::Approx(0.25));
    CHECK(vals[1] == doctest::Approx(1.0));
    CHECK(vals[2] == doctest::Approx(0.5));
    CHECK_THROWS(empirical_copula(b, {{0.5, 0.5, 0.5}}));

    // comonotone batch: empirical at (t,t) tracks t
    const auto como = sample_shock(build_shock_model(comonotone(2)), 50000, 4);
    const auto v = empirical_copula(como, {{0.3, 0.3}, {0.7, 0.7}});
    CHECK(v[0] == doctest::Approx(0.3).epsilon(0.03));
    CHECK(v[1] == doctest::Approx(0.7).epsilon(0.02));

    // monotone in each grid coordinate
    const auto w = empirical_copula(
        como, {{0.2, 0.5}, {0.4, 0.5}, {0.6, 0.5}, {0.6, 0.8}, {0.6, 1.0}});
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] >= w[i - 1]);
}

TEST_CASE("sup distance separates the wrong model") {
    const auto ind = independence(2);
    const auto batch = sample_shock(build_shock_model(ind), 100000, 5, 4);
    CHECK(sup_distance(batch, ind, tensor_grid(2, {0.1, 0.3, 0.5, 0.7, 0.9}), 4) <=
          0.01);
    const auto emp = empirical_copula(batch, {{0.5, 0.5}});
    // independence sample against the comonotone value 0.5 at (0.5, 0.5)
    CHECK(std::abs(emp[0] - 0.5) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("tail dependence estimators") {
    const auto como = sample_shock(build_shock_model(comonotone(2)), 100000, 6, 4);
    const auto e1 = estimate_tail_dependence(como);
    CHECK(e1.conclusive);
    CHECK(e1.lambda_u == doctest::Approx(1.0));
    CHECK(e1.lambda_l == doctest::Approx(1.0));

    const auto mo = marshall_olkin({1.0, 0.5}, 2);
    const auto bmo = sample_shock(build_shock_model(mo), 200000, 7, 4);
    const auto e2 = estimate_tail_dependence(bmo);
    CHECK(e2.conclusive);
    CHECK(std::abs(e2.lambda_u - 0.5) <= 0.05);

    const auto ind = sample_shock(build_shock_model(independence(2)), 200000, 8, 4);
    const auto e3 = estimate_tail_dependence(ind);
    CHECK(e3.lambda_u <= 0.05);

    SampleBatch tiny;
    tiny.n = 50;
    tiny.d = 2;
    tiny.data.assign(100, 0.5);
    CHECK(!estimate_tail_dependence(tiny).conclusive);
}

TEST_CASE("mc_check_G frozen configurations") {
    {
        const auto g = mc_check_G(independence(2), 2, 0, 0.3, 0.6, 100000, 11, 4);
        CHECK(g.analytic == doctest::Approx(0.09).epsilon(1e-12));
        CHECK(std::abs(g.estimate - g.analytic) <= 0.005);
        CHECK(g.pass);
    }
    {
        const auto g = mc_check_G(comonotone(2), 2, 0, 0.3, 0.6, 100000, 12, 4);
        CHECK(g.analytic == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(std::abs(g.estimate - g.analytic) <= 0.008);
        CHECK(g.pass);
    }
    {
        const auto c = sato_gamma(1.0, 1.0, 1.0, 3).first;
        const auto g = mc_check_G(c, 2, 1, 0.4, 0.7, 100000, 13, 4);
        const double expected = c.g(1)(0.4) * compute_G(c, 2, 1, 0.4, 0.7);
        CHECK(g.analytic == doctest::Approx(expected).epsilon(1e-12));
        CHECK(g.pass);
    }
    {
        // conditioning event with k >= 1 on the comonotone copula: zero mass
        const auto g = mc_check_G(comonotone(2), 1, 1, 0.3, 0.6, 50000, 14, 4);
        CHECK(g.analytic == doctest::Approx(0.0));
        CHECK(g.estimate == doctest::Approx(0.0));
        CHECK(g.pass);
    }
}

TEST_CASE("ks statistic flags a non-uniform column") {
    SampleBatch b;
    b.n = 10000;
    b.d = 1;
    b.data.resize(b.n);
    for (std::size_t i = 0; i < b.n; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(b.n);
        b.data[i] = u;
    }
    CHECK(ks_statistic(b, 0) <= 1.63 / std::sqrt(10000.0));
    for (auto& x : b.data) x = x * x;  // heavily skewed
    CHECK(ks_statistic(b, 0) > 1.63 / std::sqrt(10000.0));
}

TEST_CASE("batch CSV and metadata round out the provenance") {
    SampleBatch b;
    b.n = 2;
    b.d = 2;
    b.data = {0.25, 0.5, 0.125, 1.0};
    b.method = "shock";
    b.seed = 42;
    b.family = "{\"name\":\"independence\"}";
    const std::string csv = batch_to_csv(b);
    CHECK(csv.find("u1,u2\r\n") == 0);
    CHECK(csv.find("0.25") != std::string::npos);
    const auto meta = batch_metadata(b);
    CHECK(meta.at("method") == "shock");
    CHECK(meta.at("seed") == 42);
    CHECK(meta.at("n") == 2);
    CHECK(meta.at("family_hash").get<std::string>().size() == 16);
}
