#include "escop/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "escop/util.hpp"

namespace escop {

OrderedFactorCopula OrderedFactorCopula::make(int d, std::vector<DistortionFn> g,
                                              const GridSpec& grid) {
    if (d < 2) throw std::invalid_argument("copula dimension must be >= 2");
    if (static_cast<int>(g.size()) != d) {
        throw std::invalid_argument("expected " + std::to_string(d) +
                                    " distortion functions, got " +
                                    std::to_string(g.size()));
    }
    // g_1 must be the identity; cheap kind check first, pointwise otherwise
    if (std::string(g[0].kind()) != "identity") {
        for (double u : grid.evaluation_grid()) {
            if (std::abs(g[0](u) - u) > 1e-12) {
                throw std::invalid_argument(
                    "g_1 must be the identity on [0,1] (deviation at u=" +
                    std::to_string(u) + ")");
            }
        }
    }
    for (int k = 2; k <= d; ++k) {
        const double at_one = g[static_cast<std::size_t>(k - 1)](1.0);
        if (std::abs(at_one - 1.0) > 1e-12) {
            throw std::invalid_argument("g_" + std::to_string(k) +
                                        "(1) = " + std::to_string(at_one) +
                                        ", must equal 1");
        }
    }
    return OrderedFactorCopula(d, std::move(g));
}

double OrderedFactorCopula::cdf(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != d_) {
        throw std::invalid_argument("cdf: argument dimension mismatch");
    }
    for (double x : u) {
        if (!(x >= 0.0) || x > 1.0) {
            throw std::domain_error("cdf: components must lie in [0,1]");
        }
        if (x == 0.0) return 0.0;
    }
    std::vector<double> sorted(u.begin(), u.end());
    std::stable_sort(sorted.begin(), sorted.end());
    double prod = 1.0;
    for (int k = 1; k <= d_; ++k) {
        prod *= g_[static_cast<std::size_t>(k - 1)](sorted[static_cast<std::size_t>(k - 1)]);
    }
    return clamp01(prod);
}

double OrderedFactorCopula::diagonal_ratio(int k, double u) const {
    if (k < 1 || k > d_) throw std::invalid_argument("diagonal_ratio: k out of range");
    if (!(u >= 0.0) || u > 1.0) {
        throw std::domain_error("diagonal_ratio: u must lie in [0,1]");
    }
    if (u == 0.0) {
        // delta_{k-1}(0) = 0 for k >= 2 since g_1(0) = 0; the ratio has no
        // defined limit there.
        if (k == 1) return 0.0;
        throw std::domain_error("diagonal_ratio: undefined at u = 0");
    }
    return g_[static_cast<std::size_t>(k - 1)](u);
}

const DistortionFn& OrderedFactorCopula::g(int k) const {
    if (k < 1 || k > d_) throw std::invalid_argument("g index out of range");
    return g_[static_cast<std::size_t>(k - 1)];
}

DistortionFn make_H(const OrderedFactorCopula& c, int j, int k) {
    if (j < 1 || k < 0 || k + j > c.dim()) {
        throw std::invalid_argument("make_H: need j >= 1, k >= 0, k + j <= d");
    }
    std::vector<std::pair<DistortionFn, double>> terms;
    terms.reserve(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) {
        const double e = (i % 2 == 0 ? 1.0 : -1.0) * binom(j - 1, i);
        terms.emplace_back(c.g(k + 1 + i), e);
    }
    return DistortionFn::log_power_product(std::move(terms));
}

HFamily h_from_g(const OrderedFactorCopula& c, const GridSpec& grid) {
    const auto eval = grid.evaluation_grid();
    for (int k = 1; k <= c.dim(); ++k) {
        for (double u : eval) {
            if (u <= 0.0) continue;
            if (!(c.g(k).raw(u) > 0.0)) {
                throw std::domain_error("h_from_g: g_" + std::to_string(k) +
                                        " vanishes at u = " + std::to_string(u) +
                                        "; negative powers are undefined");
            }
        }
    }
    HFamily h;
    h.d = c.dim();
    h.H.reserve(static_cast<std::size_t>(c.dim()));
    for (int m = 1; m <= c.dim(); ++m) {
        h.H.push_back(make_H(c, m, c.dim() - m));
    }
    return h;
}

OrderedFactorCopula g_from_h(const HFamily& h, const GridSpec& grid) {
    const int d = h.d;
    if (d < 2 || static_cast<int>(h.H.size()) != d) {
        throw std::invalid_argument("g_from_h: malformed H family");
    }
    std::vector<DistortionFn> g;
    g.reserve(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        std::vector<std::pair<DistortionFn, double>> terms;
        for (int m = 1; m <= d + 1 - k; ++m) {
            terms.emplace_back(h.at(m), binom(d - k, m - 1));
        }
        g.push_back(DistortionFn::log_power_product(std::move(terms)));
    }
    // normalization: the reconstructed g_1 must be the identity
    double worst = 0.0, worst_u = 0.0;
    for (double u : grid.evaluation_grid()) {
        if (u <= 0.0) continue;
        const double dev = std::abs(g[0].raw(u) - u);
        if (dev > worst) {
            worst = dev;
            worst_u = u;
        }
    }
    if (worst > 1e-10) {
        throw std::domain_error(
            "g_from_h: normalization violated, max |g_1(u) - u| = " +
            std::to_string(worst) + " at u = " + std::to_string(worst_u));
    }
    g[0] = DistortionFn::identity();  // verified above; store the exact form
    return OrderedFactorCopula::make(d, std::move(g), grid);
}

}  // namespace escop
