#include "escop/validity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "escop/parallel.hpp"
#include "escop/util.hpp"

namespace escop {

namespace {

constexpr double kNegTolerance = 1e-10;
constexpr std::size_t kWitnessCap = 10000;

void sort_canonically(std::vector<Witness>& w) {
    std::sort(w.begin(), w.end(), [](const Witness& a, const Witness& b) {
        if (a.j != b.j) return a.j < b.j;
        if (a.k != b.k) return a.k < b.k;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    if (w.size() > kWitnessCap) w.resize(kWitnessCap);
}

// Condition (ii): scan all index pairs over the u < v pair grid.
ValidityReport validate_ii(const OrderedFactorCopula& c, const GridSpec& grid,
                           int workers) {
    const int d = c.dim();
    const auto pts = grid.pair_grid();
    const std::size_t np = pts.size();

    // cache g_k on the pair grid
    std::vector<std::vector<double>> gval(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        auto& col = gval[static_cast<std::size_t>(k - 1)];
        col.resize(np);
        for (std::size_t i = 0; i < np; ++i) col[i] = c.g(k)(pts[i]);
    }

    std::vector<Witness> witnesses;
    std::size_t total = 0;
    std::mutex merge_mutex;
    parallel_for(0, np, workers, [&](std::size_t lo, std::size_t hi) {
        std::vector<Witness> local;
        std::size_t local_total = 0;
        for (std::size_t iu = lo; iu < hi; ++iu) {
            for (std::size_t iv = iu + 1; iv < np; ++iv) {
                for (int k = 0; k < d; ++k) {
                    for (int j = 1; k + j <= d; ++j) {
                        KahanSum s;
                        double prod_u = 1.0;
                        // walk i = 0..j, maintaining prefix product at u and
                        // suffix product at v
                        for (int i = 0; i <= j; ++i) {
                            if (i > 0) {
                                prod_u *= gval[static_cast<std::size_t>(k + i - 1)][iu];
                            }
                            double prod_v = 1.0;
                            for (int l = i + 1; l <= j; ++l) {
                                prod_v *= gval[static_cast<std::size_t>(k + l - 1)][iv];
                            }
                            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                            s.add(sign * binom(j, i) * prod_u * prod_v);
                        }
                        if (s.value() < -kNegTolerance) {
                            ++local_total;
                            // collect everything; the cap is applied after the
                            // global canonical sort so the reported subset does
                            // not depend on chunk boundaries
                            local.push_back({j, k, pts[iu], pts[iv], s.value(),
                                             "G_{j,k}(u,v) negative"});
                        }
                    }
                }
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        total += local_total;
        witnesses.insert(witnesses.end(), local.begin(), local.end());
    });
    sort_canonically(witnesses);

    ValidityReport r;
    r.condition = Condition::ii;
    r.verdict = total == 0 ? Verdict::pass : Verdict::fail;
    r.violation_count = total;
    r.witnesses = std::move(witnesses);
    r.grid_descriptor = grid.describe();
    r.negativity_tolerance = kNegTolerance;
    return r;
}

// Membership of one H_{j,k} in the set of continuous increasing distribution
// functions on [0,1] that are positive on (0,1] and equal 1 at 1. Evaluated
// raw (unclamped) so that range violations stay visible. The jump from the
// zero point is excluded: H(0) is defined as the right limit, so there can
// be no discontinuity there.
void check_membership(const DistortionFn& h, int j, int k,
                      const std::vector<double>& eval, double cont_threshold,
                      std::vector<Witness>& out, std::size_t& total) {
    auto report = [&](double u, double v, double value, const char* what) {
        ++total;
        if (out.size() < kWitnessCap) out.push_back({j, k, u, v, value, what});
    };
    double prev_u = -1.0, prev_val = 0.0;
    for (double u : eval) {
        if (u <= 0.0) continue;
        const double val = h.raw(u);
        if (!(val > 0.0)) report(u, u, val, "H not strictly positive on (0,1]");
        if (val < -1e-9 || val > 1.0 + 1e-9) report(u, u, val, "H leaves [0,1]");
        if (prev_u >= 0.0) {
            if (val < prev_val - 1e-12) {
                report(prev_u, u, val - prev_val, "H decreasing");
            } else if (val - prev_val > cont_threshold) {
                report(prev_u, u, val - prev_val, "H jump exceeds continuity proxy");
            }
        }
        prev_u = u;
        prev_val = val;
    }
    const double at_one = h.raw(1.0);
    if (std::abs(at_one - 1.0) > 1e-9) report(1.0, 1.0, at_one, "H(1) != 1");
}

ValidityReport validate_membership(const OrderedFactorCopula& c, Condition cond,
                                   const GridSpec& grid) {
    const int d = c.dim();
    const auto eval = grid.evaluation_grid();
    const double threshold = grid.continuity_threshold();

    std::vector<Witness> witnesses;
    std::size_t total = 0;
    for (int k = 0; k < d; ++k) {
        for (int j = 1; k + j <= d; ++j) {
            if (cond == Condition::iv && k + j != d) continue;
            const DistortionFn h = make_H(c, j, k);
            check_membership(h, j, k, eval, threshold, witnesses, total);
        }
    }
    sort_canonically(witnesses);

    ValidityReport r;
    r.condition = cond;
    r.verdict = total == 0 ? Verdict::pass : Verdict::fail;
    r.violation_count = total;
    r.witnesses = std::move(witnesses);
    r.grid_descriptor = grid.describe();
    r.negativity_tolerance = kNegTolerance;
    r.continuity_threshold = threshold;
    return r;
}

}  // namespace

const char* to_string(Condition c) {
    switch (c) {
        case Condition::ii: return "ii";
        case Condition::iii: return "iii";
        case Condition::iv: return "iv";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<Condition> condition_from_string(const std::string& s) {
    if (s == "ii") return Condition::ii;
    if (s == "iii") return Condition::iii;
    if (s == "iv") return Condition::iv;
    return std::nullopt;
}

nlohmann::json ValidityReport::to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : witnesses) {
        w.push_back({{"j", x.j},
                     {"k", x.k},
                     {"u", x.u},
                     {"v", x.v},
                     {"value", x.value},
                     {"what", x.what}});
    }
    return {{"condition", to_string(condition)},
            {"verdict", to_string(verdict)},
            {"semantics", "pass = no violation found at this grid resolution"},
            {"violations", violation_count},
            {"witnesses", w},
            {"grid", grid_descriptor},
            {"tolerances",
             {{"negativity", negativity_tolerance},
              {"continuity_jump", continuity_threshold}}}};
}

double compute_G(const OrderedFactorCopula& c, int j, int k, double u, double v) {
    if (j < 1 || k < 0 || k + j > c.dim()) {
        throw std::invalid_argument("compute_G: need j >= 1, k >= 0, k + j <= d");
    }
    if (!(u > 0.0) || !(u < v) || !(v <= 1.0)) {
        throw std::domain_error("compute_G: need 0 < u < v <= 1");
    }
    KahanSum s;
    double prod_u = 1.0;
    for (int i = 0; i <= j; ++i) {
        if (i > 0) prod_u *= c.g(k + i)(u);
        double prod_v = 1.0;
        for (int l = i + 1; l <= j; ++l) prod_v *= c.g(k + l)(v);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        s.add(sign * binom(j, i) * prod_u * prod_v);
    }
    return s.value();
}

ValidityReport validate(const OrderedFactorCopula& c, Condition condition,
                        const GridSpec& grid, int workers) {
    if (condition == Condition::ii) return validate_ii(c, grid, workers);
    return validate_membership(c, condition, grid);
}

std::pair<bool, std::optional<MonotoneWitness>> is_d_monotone(
    const std::vector<double>& a, int d) {
    if (static_cast<int>(a.size()) < d) {
        throw std::invalid_argument("is_d_monotone: sequence shorter than d");
    }
    for (int j = 1; j <= d; ++j) {
        for (int k = 0; k + j <= d; ++k) {
            KahanSum s;
            for (int i = 0; i < j; ++i) {
                const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                s.add(sign * binom(j - 1, i) * a[static_cast<std::size_t>(k + i)]);
            }
            if (s.value() < -1e-12) {
                return {false, MonotoneWitness{k, j, s.value()}};
            }
        }
    }
    return {true, std::nullopt};
}

std::optional<std::vector<double>> detect_extreme_value(const OrderedFactorCopula& c,
                                                        double tol,
                                                        const GridSpec& grid) {
    const int d = c.dim();
    const double u_ref = 0.5;
    std::vector<double> a(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        const double gref = c.g(k)(u_ref);
        if (!(gref > 0.0)) return std::nullopt;
        a[static_cast<std::size_t>(k - 1)] = std::log(gref) / std::log(u_ref);
    }
    const auto eval = grid.evaluation_grid();
    for (int k = 1; k <= d; ++k) {
        const double ak = a[static_cast<std::size_t>(k - 1)];
        for (double u : eval) {
            if (u <= 0.0) continue;
            const double expected = ak == 0.0 ? 1.0 : std::pow(u, ak);
            if (std::abs(c.g(k)(u) - expected) > tol) return std::nullopt;
        }
        // the right limit at zero must match the limit of u^{a}
        const double limit = ak > 1e-14 ? 0.0 : 1.0;
        if (std::abs(clamp01(c.g(k).zero_limit()) - limit) > tol) return std::nullopt;
    }
    if (!is_d_monotone(a, d).first) return std::nullopt;
    return a;
}

TailDependence tail_dependence(const DistortionFn& g2) {
    TailDependence t;
    t.lambda_l = clamp01(g2.zero_limit());

    // one-sided difference quotients at 1, Richardson-extrapolated twice
    const double h0 = 1e-3;
    const double g1v = g2(1.0);
    const double d0 = (g1v - g2(1.0 - h0)) / h0;
    const double d1 = (g1v - g2(1.0 - h0 / 2)) / (h0 / 2);
    const double d2 = (g1v - g2(1.0 - h0 / 4)) / (h0 / 4);
    const double r1 = 2.0 * d1 - d0;
    const double r2 = 2.0 * d2 - d1;
    const double deriv = (4.0 * r2 - r1) / 3.0;
    t.lambda_u = clamp01(1.0 - deriv);
    return t;
}

}  // namespace escop
