#ifndef LAMPERTI_PATH_HPP
#define LAMPERTI_PATH_HPP

#include <vector>

#include "lamperti/measure.hpp"

namespace lamperti {

// Time-stamped cadlag sample of a scalar trajectory, piecewise constant
// between recorded times. jump[i] marks a discontinuity at times[i].
struct PathGrid {
    std::vector<double> times;   // strictly increasing, starts at 0
    std::vector<double> values;
    std::vector<char> jump;

    void push(double t, double v, bool is_jump = false) {
        times.push_back(t);
        values.push_back(v);
        jump.push_back(is_jump ? 1 : 0);
    }
    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double final_time() const { return times.back(); }
    double final_value() const { return values.back(); }

    // cadlag evaluation: value at the last recorded time <= t
    double at(double t) const;

    void validate() const;  // throws on non-increasing times / size mismatch
};

// Same sampling convention for measure-valued trajectories.
struct MeasurePath {
    std::vector<double> times;
    std::vector<DiscreteMeasure> states;
    std::vector<char> jump;

    void push(double t, DiscreteMeasure m, bool is_jump = false) {
        times.push_back(t);
        states.push_back(std::move(m));
        jump.push_back(is_jump ? 1 : 0);
    }
    std::size_t size() const { return times.size(); }
    double final_time() const { return times.back(); }
    const DiscreteMeasure& at(double t) const;

    PathGrid total_mass_path() const;
};

} // namespace lamperti

#endif
