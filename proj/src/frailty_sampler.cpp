#include "escop/frailty_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "escop/parallel.hpp"

namespace escop {

namespace {
constexpr int kExtensionSteps = 64;
constexpr int kMaxExtensions = 60;
}  // namespace

PathSimulator::PathSimulator(const BernsteinFamily& f, int path_points) : f_(f) {
    if (path_points < 2) {
        throw std::invalid_argument("PathSimulator: need at least 2 grid points");
    }
    if (f.psi1.form == Psi1::Form::cpp) {
        if (f.kind == BernsteinFamily::Kind::sato) {
            throw std::invalid_argument(
                "PathSimulator: no sampling mechanism for the Sato kind with a "
                "compound-Poisson exponent; use the log form");
        }
        return;  // event mechanism needs no grid
    }
    const int M = path_points;
    t_.reserve(static_cast<std::size_t>(M - 1));
    for (int i = 1; i < M; ++i) {
        t_.push_back(marginal_survival_inverse(f, 1.0 - static_cast<double>(i) / M));
    }
    if (f.kind == BernsteinFamily::Kind::levy) {
        gamma_shape_.resize(t_.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            gamma_shape_[i] = f.psi1.beta * (t_[i] - prev);
            prev = t_[i];
        }
        return;
    }
    // Sato kind, log form: first value is Gamma(beta, eta t_1^{-H}); later
    // increments use the self-decomposability representation, whose Laplace
    // transform matches ((eta + x s^H)/(eta + x t^H))^beta exactly.
    const double h = f.sato_h;
    const double beta = f.psi1.beta;
    const double eta = f.psi1.eta;
    first_rate_ = eta * std::pow(t_[0], -h);
    const std::size_t steps = t_.size() - 1;
    pois_mean_.resize(steps);
    pois_exp_.resize(steps);
    w_scale_.resize(steps);
    log_c_.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double lo = t_[i], hi = t_[i + 1];
        pois_mean_[i] = beta * h * std::log(hi / lo);
        pois_exp_[i] = std::exp(-pois_mean_[i]);
        w_scale_[i] = std::pow(hi, h) / eta;
        log_c_[i] = -h * std::log(hi / lo);
    }
}

void PathSimulator::simulate(SubstreamRng& rng, double target_level,
                             SubordinatorPath& out) const {
    if (!(target_level > 0.0)) {
        throw std::invalid_argument("simulate: target level must be positive");
    }
    out.times.clear();
    out.levels.clear();

    if (f_.psi1.form == Psi1::Form::cpp) {
        // exact event-driven path: exponential inter-jump times, exponential
        // jump sizes, linear drift in between
        const double b = f_.psi1.drift;
        const double rate = f_.psi1.rate;
        const double jump_mean = f_.psi1.jump_mean;
        out.repr = SubordinatorPath::Repr::events;
        out.drift = b;
        out.times.push_back(0.0);
        out.levels.push_back(0.0);
        double t = 0.0, level = 0.0;
        if (rate == 0.0) {
            const double t_cross = target_level / b;
            out.times.push_back(t_cross);
            out.levels.push_back(target_level);
            return;
        }
        for (;;) {
            const double gap = rng.exponential() / rate;
            if (b > 0.0 && level + b * gap >= target_level) {
                const double t_cross = t + (target_level - level) / b;
                out.times.push_back(t_cross);
                out.levels.push_back(target_level);
                return;
            }
            t += gap;
            level += b * gap;
            level += rng.exponential() * jump_mean;
            out.times.push_back(t);
            out.levels.push_back(level);
            if (level >= target_level) return;
        }
    }

    out.repr = SubordinatorPath::Repr::grid;
    out.drift = 0.0;
    const double beta = f_.psi1.beta;
    const double eta = f_.psi1.eta;
    double level = 0.0;

    if (f_.kind == BernsteinFamily::Kind::levy) {
        for (std::size_t i = 0; i < t_.size(); ++i) {
            level += rng.gamma(gamma_shape_[i], eta);
            out.times.push_back(t_[i]);
            out.levels.push_back(level);
            if (level >= target_level) return;
        }
        double horizon = t_.back();
        for (int ext = 0; ext < kMaxExtensions; ++ext) {
            const double step = horizon / kExtensionSteps;
            const double shape = beta * step;
            for (int j = 1; j <= kExtensionSteps; ++j) {
                level += rng.gamma(shape, eta);
                out.times.push_back(horizon + j * step);
                out.levels.push_back(level);
                if (level >= target_level) return;
            }
            horizon *= 2.0;
        }
        throw std::runtime_error("simulate: level not reached after 60 extensions");
    }

    // Sato kind, log form
    const double h = f_.sato_h;
    level = rng.gamma(beta, first_rate_);
    out.times.push_back(t_[0]);
    out.levels.push_back(level);
    if (level >= target_level) return;
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
        const std::uint64_t jumps = pois_mean_[i] > 16.0
                                        ? rng.poisson(pois_mean_[i])
                                        : rng.poisson_with_exp(pois_exp_[i]);
        for (std::uint64_t nj = 0; nj < jumps; ++nj) {
            const double w = rng.exponential() * w_scale_[i];
            const double v = rng.uniform01();
            level += w * std::exp(v * log_c_[i]);
        }
        out.times.push_back(t_[i + 1]);
        out.levels.push_back(level);
        if (level >= target_level) return;
    }
    double prev_t = t_.back();
    const double ratio = std::pow(2.0, 1.0 / kExtensionSteps);
    const double ext_mean = beta * h * std::log(ratio);
    const double ext_exp = std::exp(-ext_mean);
    const double ext_log_c = -h * std::log(ratio);
    for (int ext = 0; ext < kMaxExtensions; ++ext) {
        for (int j = 0; j < kExtensionSteps; ++j) {
            const double next_t = prev_t * ratio;
            const std::uint64_t jumps = ext_mean > 16.0 ? rng.poisson(ext_mean)
                                                        : rng.poisson_with_exp(ext_exp);
            const double scale = std::pow(next_t, h) / eta;
            for (std::uint64_t nj = 0; nj < jumps; ++nj) {
                const double w = rng.exponential() * scale;
                const double v = rng.uniform01();
                level += w * std::exp(v * ext_log_c);
            }
            out.times.push_back(next_t);
            out.levels.push_back(level);
            prev_t = next_t;
            if (level >= target_level) return;
        }
    }
    throw std::runtime_error("simulate: level not reached after 60 extensions");
}

SubordinatorPath PathSimulator::simulate(SubstreamRng& rng, double target_level) const {
    SubordinatorPath p;
    simulate(rng, target_level, p);
    return p;
}

SubordinatorPath simulate_path(const BernsteinFamily& f, double target_level,
                               const GridSpec& grid, SubstreamRng& rng) {
    PathSimulator sim(f, grid.path_points);
    return sim.simulate(rng, target_level);
}

double first_passage(const SubordinatorPath& p, double level) {
    if (!(level > 0.0)) {
        throw std::invalid_argument("first_passage: level must be positive");
    }
    if (p.terminal_level() < level) {
        throw std::invalid_argument("first_passage: path terminates below the level");
    }
    if (p.repr == SubordinatorPath::Repr::grid) {
        const auto it = std::lower_bound(p.levels.begin(), p.levels.end(), level);
        return p.times[static_cast<std::size_t>(it - p.levels.begin())];
    }
    for (std::size_t i = 1; i < p.times.size(); ++i) {
        const double t0 = p.times[i - 1], l0 = p.levels[i - 1];
        const double t1 = p.times[i], l1 = p.levels[i];
        if (l0 >= level) return t0;
        if (p.drift > 0.0 && l0 + p.drift * (t1 - t0) >= level) {
            return t0 + (level - l0) / p.drift;
        }
        if (l1 >= level) return t1;
    }
    return p.times.back();
}

SampleBatch sample_frailty(const BernsteinFamily& f, int d, std::size_t n,
                           std::uint64_t seed, int workers, const GridSpec& grid) {
    if (d < 2) throw std::invalid_argument("sample_frailty: d must be >= 2");
    const PathSimulator sim(f, grid.path_points);

    SampleBatch batch;
    batch.n = n;
    batch.d = d;
    batch.method = "frailty";
    batch.seed = seed;
    batch.family = f.descriptor();
    batch.data.assign(n * static_cast<std::size_t>(d), 0.0);

    parallel_for(0, n, workers, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> triggers(static_cast<std::size_t>(d));
        SubordinatorPath path;
        for (std::size_t i = lo; i < hi; ++i) {
            SubstreamRng rng(seed, i);
            double target = 0.0;
            for (auto& e : triggers) {
                e = rng.exponential();
                target = std::max(target, e);
            }
            sim.simulate(rng, target, path);
            double* row = batch.data.data() + i * static_cast<std::size_t>(d);
            for (int k = 0; k < d; ++k) {
                const double x = first_passage(path, triggers[static_cast<std::size_t>(k)]);
                row[k] = marginal_survival(f, x);
            }
        }
    });
    return batch;
}

}  // namespace escop
