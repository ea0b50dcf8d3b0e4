#include "lamperti/path.hpp"

#include <algorithm>
#include <stdexcept>

namespace lamperti {

namespace {

std::size_t index_at(const std::vector<double>& times, double t) {
    if (times.empty()) throw std::logic_error("empty path");
    if (t < times.front()) throw std::out_of_range("path evaluated before start");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<std::size_t>(it - times.begin()) - 1;
}

} // namespace

double PathGrid::at(double t) const { return values[index_at(times, t)]; }

void PathGrid::validate() const {
    if (times.size() != values.size() || times.size() != jump.size())
        throw std::logic_error("PathGrid: size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::logic_error("PathGrid: times must strictly increase");
}

const DiscreteMeasure& MeasurePath::at(double t) const {
    return states[index_at(times, t)];
}

PathGrid MeasurePath::total_mass_path() const {
    PathGrid g;
    g.times = times;
    g.jump = jump;
    g.values.reserve(states.size());
    for (const auto& m : states) g.values.push_back(m.total_mass());
    return g;
}

} // namespace lamperti
