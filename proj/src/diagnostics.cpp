#include "escop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "escop/parallel.hpp"

namespace escop {

std::vector<std::vector<double>> tensor_grid(int d, const std::vector<double>& marks) {
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    const std::size_t m = marks.size();
    for (;;) {
        std::vector<double> pt(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) pt[static_cast<std::size_t>(k)] = marks[idx[static_cast<std::size_t>(k)]];
        out.push_back(std::move(pt));
        int k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] == m) {
            idx[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == d) break;
    }
    return out;
}

std::vector<double> empirical_copula(const SampleBatch& b,
                                     const std::vector<std::vector<double>>& points,
                                     int workers) {
    if (b.n == 0) throw std::invalid_argument("empirical_copula: empty batch");
    for (const auto& pt : points) {
        if (static_cast<int>(pt.size()) != b.d) {
            throw std::invalid_argument("empirical_copula: point dimension mismatch");
        }
    }
    const std::size_t np = points.size();
    std::vector<std::size_t> counts(np, 0);
    std::mutex merge_mutex;
    parallel_for(0, b.n, workers, [&](std::size_t lo, std::size_t hi) {
        std::vector<std::size_t> local(np, 0);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto row = b.row(i);
            for (std::size_t p = 0; p < np; ++p) {
                bool leq = true;
                for (int k = 0; k < b.d; ++k) {
                    if (row[static_cast<std::size_t>(k)] > points[p][static_cast<std::size_t>(k)]) {
                        leq = false;
                        break;
                    }
                }
                if (leq) ++local[p];
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t p = 0; p < np; ++p) counts[p] += local[p];
    });
    std::vector<double> out(np);
    for (std::size_t p = 0; p < np; ++p) {
        out[p] = static_cast<double>(counts[p]) / static_cast<double>(b.n);
    }
    return out;
}

double sup_distance(const SampleBatch& b, const OrderedFactorCopula& c,
                    const std::vector<std::vector<double>>& grid_points,
                    int workers) {
    if (b.d != c.dim()) throw std::invalid_argument("sup_distance: dimension mismatch");
    const auto emp = empirical_copula(b, grid_points, workers);
    double worst = 0.0;
    for (std::size_t p = 0; p < grid_points.size(); ++p) {
        worst = std::max(worst, std::abs(emp[p] - c.cdf(grid_points[p])));
    }
    return worst;
}

double sup_distance(const SampleBatch& a, const SampleBatch& b,
                    const std::vector<std::vector<double>>& grid_points,
                    int workers) {
    if (a.d != b.d) throw std::invalid_argument("sup_distance: dimension mismatch");
    const auto ea = empirical_copula(a, grid_points, workers);
    const auto eb = empirical_copula(b, grid_points, workers);
    double worst = 0.0;
    for (std::size_t p = 0; p < grid_points.size(); ++p) {
        worst = std::max(worst, std::abs(ea[p] - eb[p]));
    }
    return worst;
}

nlohmann::json TailEstimate::to_json() const {
    return {{"lambda_l", lambda_l}, {"lambda_u", lambda_u},
            {"se_l", se_l},         {"se_u", se_u},
            {"count_upper", count_upper}, {"count_lower", count_lower},
            {"conclusive", conclusive}};
}

TailEstimate estimate_tail_dependence(const SampleBatch& b, double t) {
    if (b.d < 2) throw std::invalid_argument("tail estimation needs d >= 2");
    if (!(t > 0.0) || !(t < 1.0)) {
        throw std::invalid_argument("tail threshold must lie in (0,1)");
    }
    std::size_t first_hi = 0, both_hi = 0, first_lo = 0, both_lo = 0;
    const double s = 1.0 - t;
    for (std::size_t i = 0; i < b.n; ++i) {
        const double u1 = b.at(i, 0), u2 = b.at(i, 1);
        if (u1 > t) {
            ++first_hi;
            if (u2 > t) ++both_hi;
        }
        if (u1 <= s) {
            ++first_lo;
            if (u2 <= s) ++both_lo;
        }
    }
    TailEstimate e;
    e.count_upper = first_hi;
    e.count_lower = first_lo;
    e.conclusive = first_hi >= 100 && first_lo >= 100;
    if (first_hi > 0) {
        e.lambda_u = static_cast<double>(both_hi) / static_cast<double>(first_hi);
        e.se_u = std::sqrt(std::max(e.lambda_u * (1.0 - e.lambda_u), 1e-12) /
                           static_cast<double>(first_hi));
    }
    if (first_lo > 0) {
        e.lambda_l = static_cast<double>(both_lo) / static_cast<double>(first_lo);
        e.se_l = std::sqrt(std::max(e.lambda_l * (1.0 - e.lambda_l), 1e-12) /
                           static_cast<double>(first_lo));
    }
    return e;
}

double ks_statistic(const SampleBatch& b, int column) {
    if (column < 0 || column >= b.d) {
        throw std::invalid_argument("ks_statistic: column out of range");
    }
    std::vector<double> col(b.n);
    for (std::size_t i = 0; i < b.n; ++i) col[i] = b.at(i, column);
    std::sort(col.begin(), col.end());
    const double n = static_cast<double>(b.n);
    double worst = 0.0;
    for (std::size_t i = 0; i < b.n; ++i) {
        const double x = col[i];
        worst = std::max(worst, (static_cast<double>(i) + 1.0) / n - x);
        worst = std::max(worst, x - static_cast<double>(i) / n);
    }
    return worst;
}

nlohmann::json GCheck::to_json() const {
    return {{"test", "G_identity"}, {"j", j},        {"k", k},
            {"u", u},               {"v", v},        {"analytic", analytic},
            {"estimate", estimate}, {"stderr", stderr_est}, {"sigmas", sigmas},
            {"verdict", pass ? "pass" : "fail"}};
}

GCheck mc_check_G(const OrderedFactorCopula& c, const SampleBatch& batch, int j,
                  int k, double u, double v) {
    if (k + j > c.dim() || batch.d != c.dim()) {
        throw std::invalid_argument("mc_check_G: index bounds or dimension mismatch");
    }
    double prefix = 1.0;
    for (int m = 1; m <= k; ++m) prefix *= c.g(m)(u);
    const double analytic = prefix * compute_G(c, j, k, u, v);

    std::size_t count = 0;
    for (std::size_t i = 0; i < batch.n; ++i) {
        const auto row = batch.row(i);
        bool in_event = true;
        for (int m = 0; m < k && in_event; ++m) {
            in_event = row[static_cast<std::size_t>(m)] <= u;
        }
        for (int m = k; m < k + j && in_event; ++m) {
            const double x = row[static_cast<std::size_t>(m)];
            in_event = x >= u && x <= v;
        }
        if (in_event) ++count;
    }
    GCheck g;
    g.j = j;
    g.k = k;
    g.u = u;
    g.v = v;
    g.analytic = analytic;
    g.estimate = static_cast<double>(count) / static_cast<double>(batch.n);
    const double p = std::min(std::max(analytic, 0.0), 1.0);
    g.stderr_est = std::sqrt(p * (1.0 - p) / static_cast<double>(batch.n));
    const double tol = 5.0 * g.stderr_est + 1e-12;
    g.sigmas = g.stderr_est > 0.0
                   ? std::abs(g.estimate - g.analytic) / g.stderr_est
                   : (std::abs(g.estimate - g.analytic) <= 1e-12 ? 0.0 : INFINITY);
    g.pass = std::abs(g.estimate - g.analytic) <= tol;
    return g;
}

GCheck mc_check_G(const OrderedFactorCopula& c, int j, int k, double u, double v,
                  std::size_t n, std::uint64_t seed, int workers) {
    const ShockModelSpec spec = build_shock_model(c);
    const SampleBatch batch = sample_shock(spec, n, seed, workers);
    return mc_check_G(c, batch, j, k, u, v);
}

}  // namespace escop
