#include "lamperti/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace lamperti {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double level_slope(double level, double alpha) {
    if (level > 0.0) return std::pow(level, -alpha);
    if (alpha > 0.0) return kInf;
    if (alpha == 0.0) return 1.0;
    return 0.0;
}

Clock build_clock(const std::vector<double>& times, const std::vector<double>& levels,
                  double alpha) {
    Clock clock;
    clock.times = times;
    clock.cumulative.resize(times.size());
    double acc = 0.0;
    clock.cumulative[0] = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        double slope = level_slope(levels[k - 1], alpha);
        if (std::isinf(slope) || std::isinf(acc))
            acc = kInf;
        else
            acc += slope * (times[k] - times[k - 1]);
        clock.cumulative[k] = acc;
    }
    return clock;
}

// remap path knots t_k -> A(t_k); drop the tail once the clock stops
// advancing or blows up
template <typename PathT>
PathT remap(const PathT& path, const Clock& clock) {
    PathT out;
    for (std::size_t k = 0; k < clock.times.size(); ++k) {
        double u = clock.cumulative[k];
        if (std::isinf(u)) break;
        if (k > 0 && !(u > clock.cumulative[k - 1])) break;  // clock stalled: absorbed
        if constexpr (std::is_same_v<PathT, PathGrid>)
            out.push(u, path.values[k], path.jump[k] != 0);
        else
            out.push(u, path.states[k], path.jump[k] != 0);
    }
    return out;
}

} // namespace

double Clock::value_at(double t) const {
    if (t < times.front() || t > times.back())
        throw std::out_of_range("Clock::value_at outside the recorded window");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin());
    if (k == times.size()) return cumulative.back();
    double a = cumulative[k - 1], b = cumulative[k];
    if (std::isinf(b)) return t == times[k - 1] ? a : kInf;
    double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return a + w * (b - a);
}

double Clock::inverse(double u) const {
    std::size_t last = 0;
    for (std::size_t k = 0; k < cumulative.size(); ++k) {
        if (std::isinf(cumulative[k])) break;
        last = k;
    }
    if (u >= cumulative[last]) return times[last];  // clamp to the lifetime
    auto it = std::lower_bound(cumulative.begin(), cumulative.begin() + last + 1, u);
    std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    if (k == 0) return times[0];
    double a = cumulative[k - 1], b = cumulative[k];
    double w = (u - a) / (b - a);
    return times[k - 1] + w * (times[k] - times[k - 1]);
}

Clock additive_functional(const PathGrid& mass_path, double alpha) {
    if (mass_path.size() < 1) throw std::invalid_argument("additive_functional: empty path");
    return build_clock(mass_path.times, mass_path.values, alpha);
}

double invert_clock(const Clock& clock, double t) { return clock.inverse(t); }

PathGrid c_alpha_transform(const PathGrid& path, double alpha) {
    return remap(path, additive_functional(path, alpha));
}

MeasurePath c_alpha_transform(const MeasurePath& path, double alpha) {
    return remap(path, additive_functional(path.total_mass_path(), alpha));
}

PathGrid gamma_alpha_transform(const PathGrid& path, double alpha) {
    return remap(path, additive_functional(path, -alpha));
}

MeasurePath gamma_alpha_transform(const MeasurePath& path, double alpha) {
    return remap(path, additive_functional(path.total_mass_path(), -alpha));
}

MeasurePath map_to_process(const MeasurePath& rho_path, const PathGrid& xi_path) {
    if (rho_path.times != xi_path.times)
        throw std::invalid_argument("map_to_process: time grids must coincide");
    MeasurePath out;
    for (std::size_t k = 0; k < rho_path.size(); ++k) {
        out.push(rho_path.times[k],
                 inverse_log_polar(normalize(rho_path.states[k]), xi_path.values[k]),
                 rho_path.jump[k] != 0 || xi_path.jump[k] != 0);
    }
    return out;
}

std::pair<MeasurePath, PathGrid> process_to_map(const MeasurePath& path) {
    MeasurePath rho;
    PathGrid xi;
    for (std::size_t k = 0; k < path.size(); ++k) {
        auto [r, x] = log_polar(path.states[k]);
        rho.push(path.times[k], r.measure(), path.jump[k] != 0);
        xi.push(path.times[k], x, path.jump[k] != 0);
    }
    return { std::move(rho), std::move(xi) };
}

std::vector<double> self_similarity_z(const std::vector<RunningStat>& ensemble_a,
                                      const std::vector<RunningStat>& ensemble_b) {
    if (ensemble_a.size() != ensemble_b.size())
        throw std::invalid_argument("self_similarity_z: functional count mismatch");
    std::vector<double> z(ensemble_a.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = welch_z(ensemble_a[i], ensemble_b[i]);
    return z;
}

} // namespace lamperti
