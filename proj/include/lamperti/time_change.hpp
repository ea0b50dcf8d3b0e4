#ifndef LAMPERTI_TIME_CHANGE_HPP
#define LAMPERTI_TIME_CHANGE_HPP

#include <utility>
#include <vector>

#include "lamperti/path.hpp"
#include "lamperti/stats.hpp"

namespace lamperti {

// Cumulative additive functional A(t) of a piecewise-constant path:
// continuous, nondecreasing, piecewise linear between the path knots.
// After absorption at 0 with alpha > 0 the functional is +infinity
// (finite ramp then sentinel).
struct Clock {
    std::vector<double> times;       // path knots
    std::vector<double> cumulative;  // A(times[k]); A(0) = 0

    double total() const { return cumulative.back(); }
    double value_at(double t) const;    // linear interpolation on [0, t_end]
    // generalized inverse inf{s : A(s) >= u}; clamps to the lifetime beyond
    // the total
    double inverse(double u) const;
};

// A(t) = int_0^t |X_u|^{-alpha} du for the piecewise-constant mass path.
Clock additive_functional(const PathGrid& mass_path, double alpha);

// convenience wrapper around Clock::inverse
double invert_clock(const Clock& clock, double t);

// Y_t = X_{c_alpha(t)}: remap the knots of X through A(t) = int |X|^{-alpha}.
// Segments where the clock does not advance are dropped (absorbed states).
PathGrid c_alpha_transform(const PathGrid& path, double alpha);
MeasurePath c_alpha_transform(const MeasurePath& path, double alpha);

// X_t = Y_{gamma_alpha(t)}: remap through B(t) = int |Y|^{alpha}.
PathGrid gamma_alpha_transform(const PathGrid& path, double alpha);
MeasurePath gamma_alpha_transform(const MeasurePath& path, double alpha);

// pointwise log-polar composition on a shared time grid
MeasurePath map_to_process(const MeasurePath& rho_path, const PathGrid& xi_path);
std::pair<MeasurePath, PathGrid> process_to_map(const MeasurePath& path);

// z-scores comparing per-functional ensemble means (self-similarity checks:
// ensemble_b holds f(a X_{a^{-alpha} t}) samples for the rescaled start).
std::vector<double> self_similarity_z(const std::vector<RunningStat>& ensemble_a,
                                      const std::vector<RunningStat>& ensemble_b);

} // namespace lamperti

#endif
