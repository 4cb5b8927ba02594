#ifndef ESCOP_FRAILTY_SAMPLER_HPP
#define ESCOP_FRAILTY_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "escop/batch.hpp"
#include "escop/bernstein.hpp"
#include "escop/grid.hpp"
#include "escop/rng.hpp"

namespace escop {

// One simulated subordinator path. Compound-Poisson-plus-drift paths are
// exact event lists (piecewise linear between jumps); gamma-type paths are
// exact at grid points and read as right-continuous step functions.
struct SubordinatorPath {
    enum class Repr { events, grid };
    Repr repr = Repr::grid;
    double drift = 0.0;           // events repr: slope between jumps
    std::vector<double> times;    // events: jump instants (first entry t=0);
    std::vector<double> levels;   // level after the event / at the grid time

    double terminal_level() const { return levels.empty() ? 0.0 : levels.back(); }
};

// Precomputed discretization for one Bernstein family. Grid times sit at
// F-bar^{-1}(1 - i/M): uniform resolution in probability space, so the
// transform-space bias of a grid passage is at most 1/M.
class PathSimulator {
public:
    PathSimulator(const BernsteinFamily& f, int path_points);

    // Simulates until the running level reaches target_level, extending the
    // horizon by doubling when the base grid is exhausted (at most 60
    // doublings).
    void simulate(SubstreamRng& rng, double target_level, SubordinatorPath& out) const;
    SubordinatorPath simulate(SubstreamRng& rng, double target_level) const;

private:
    BernsteinFamily f_;
    std::vector<double> t_;           // grid times (empty for the event mechanism)
    std::vector<double> gamma_shape_; // levy gamma: increment shapes
    std::vector<double> pois_mean_;   // sato: per-step jump-count means
    std::vector<double> pois_exp_;    // sato: exp(-mean)
    std::vector<double> w_scale_;     // sato: mean of the raw jump size
    std::vector<double> log_c_;       // sato: log decay factor
    double first_rate_ = 0.0;         // sato: rate of the first grid value
};

SubordinatorPath simulate_path(const BernsteinFamily& f, double target_level,
                               const GridSpec& grid, SubstreamRng& rng);

// First instant the path reaches or exceeds the level. Exact for event
// paths; right grid endpoint for grid paths (time biased upward by at most
// one cell).
double first_passage(const SubordinatorPath& p, double level);

// Exceedance-time construction: d unit-exponential triggers, one path per
// draw simulated to the largest trigger, U_k = F-bar(X_k). The batch is
// distributed according to the survival copula of the exceedance vector,
// i.e. exactly copula_from_bernstein(f, d).
SampleBatch sample_frailty(const BernsteinFamily& f, int d, std::size_t n,
                           std::uint64_t seed, int workers = 1,
                           const GridSpec& grid = GridSpec{});

}  // namespace escop

#endif
