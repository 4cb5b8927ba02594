#ifndef ESCOP_GRID_HPP
#define ESCOP_GRID_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace escop {

// Shared grid configuration for function evaluation, validity scans and
// path discretization. The evaluation grid is uniform on [0,1] with a
// log-spaced ladder near zero so that steep-but-continuous distortion
// functions are resolved where they move fastest.
struct GridSpec {
    int uniform_points = 1025;   // uniform abscissae on [0,1]
    int log_points = 32;         // log-spaced abscissae in (log_lo, log_hi]
    double log_lo = 1e-8;
    double log_hi = 1e-2;
    int pair_points = 257;       // resolution of the (u,v) pair scan
    int path_points = 4096;      // subordinator grid resolution (probability space)

    // Grid checks falsify, never certify; the jump threshold below is the
    // continuity proxy used when testing membership in the class of
    // continuous distribution functions on [0,1].
    double continuity_threshold() const {
        return 10.0 / static_cast<double>(pair_points);
    }

    std::vector<double> evaluation_grid() const {
        std::vector<double> g;
        g.reserve(static_cast<std::size_t>(uniform_points + log_points));
        for (int i = 0; i < uniform_points; ++i) {
            g.push_back(static_cast<double>(i) / (uniform_points - 1));
        }
        const double ratio = std::pow(log_hi / log_lo, 1.0 / (log_points - 1));
        double x = log_lo;
        for (int i = 0; i < log_points; ++i) {
            g.push_back(x);
            x *= ratio;
        }
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        return g;
    }

    // Positive abscissae used for the 0 < u < v <= 1 scan.
    std::vector<double> pair_grid() const {
        std::vector<double> g;
        g.reserve(static_cast<std::size_t>(pair_points - 1));
        for (int i = 1; i < pair_points; ++i) {
            g.push_back(static_cast<double>(i) / (pair_points - 1));
        }
        return g;
    }

    std::string describe() const {
        return "uniform=" + std::to_string(uniform_points) +
               " log=" + std::to_string(log_points) +
               " pair=" + std::to_string(pair_points);
    }
};

}  // namespace escop

#endif
