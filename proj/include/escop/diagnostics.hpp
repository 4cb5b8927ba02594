#ifndef ESCOP_DIAGNOSTICS_HPP
#define ESCOP_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "escop/batch.hpp"
#include "escop/copula.hpp"
#include "escop/shock_sampler.hpp"
#include "escop/validity.hpp"

namespace escop {

// All-marks tensor grid {marks}^d as a list of d-vectors.
std::vector<std::vector<double>> tensor_grid(int d, const std::vector<double>& marks);

// (1/n) #{rows componentwise <= point}, one value per point.
std::vector<double> empirical_copula(const SampleBatch& b,
                                     const std::vector<std::vector<double>>& points,
                                     int workers = 1);

// max over the grid of |empirical - analytic cdf|
double sup_distance(const SampleBatch& b, const OrderedFactorCopula& c,
                    const std::vector<std::vector<double>>& grid_points,
                    int workers = 1);

// max over the grid of |empirical(a) - empirical(b)|
double sup_distance(const SampleBatch& a, const SampleBatch& b,
                    const std::vector<std::vector<double>>& grid_points,
                    int workers = 1);

// Threshold-exceedance tail estimators on the first two columns:
// upper: #{both > t} / #{first > t}; lower: #{both <= 1-t} / #{first <= 1-t}.
struct TailEstimate {
    double lambda_l = 0.0, lambda_u = 0.0;
    double se_l = 0.0, se_u = 0.0;          // binomial standard errors
    std::size_t count_upper = 0, count_lower = 0;  // conditioning counts
    bool conclusive = false;                 // both counts >= 100
    nlohmann::json to_json() const;
};
TailEstimate estimate_tail_dependence(const SampleBatch& b, double t = 0.98);

// Kolmogorov-Smirnov statistic of one column against the uniform law.
double ks_statistic(const SampleBatch& b, int column);

// Monte Carlo check of the probability identity behind condition (ii):
// P(U_1<=u,...,U_k<=u, U_{k+1},...,U_{k+j} in [u,v]) equals
// prod_{m<=k} g_m(u) * G_{j,k}(u,v).
struct GCheck {
    int j = 0, k = 0;
    double u = 0.0, v = 0.0;
    double analytic = 0.0, estimate = 0.0, stderr_est = 0.0, sigmas = 0.0;
    bool pass = false;
    nlohmann::json to_json() const;
};
GCheck mc_check_G(const OrderedFactorCopula& c, int j, int k, double u, double v,
                  std::size_t n, std::uint64_t seed, int workers = 1);
// Same check against a pre-sampled batch (shared across many configurations).
GCheck mc_check_G(const OrderedFactorCopula& c, const SampleBatch& batch, int j,
                  int k, double u, double v);

}  // namespace escop

#endif
