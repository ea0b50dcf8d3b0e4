#include "lamperti/measure.hpp"

#include <algorithm>
#include <cmath>

namespace lamperti {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
        if (a.mass < 0.0) throw std::invalid_argument("DiscreteMeasure: negative mass");
        if (!std::isfinite(a.mass)) throw std::invalid_argument("DiscreteMeasure: non-finite mass");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    for (const auto& a : atoms) {
        if (a.mass == 0.0) continue;
        if (!atoms_.empty() && atoms_.back().location == a.location)
            atoms_.back().mass += a.mass;
        else
            atoms_.push_back(a);
    }
    total_ = 0.0;
    for (const auto& a : atoms_) total_ += a.mass;
}

double DiscreteMeasure::mass_at(TypePoint p) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                               [](const Atom& a, TypePoint q) { return a.location < q; });
    if (it != atoms_.end() && it->location == p) return it->mass;
    return 0.0;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
    if (factor < 0.0) throw std::invalid_argument("scaled: negative factor");
    std::vector<Atom> out = atoms_;
    for (auto& a : out) a.mass *= factor;
    return DiscreteMeasure(std::move(out));
}

DiscreteMeasure DiscreteMeasure::plus_atom(TypePoint p, double mass) const {
    std::vector<Atom> out = atoms_;
    out.push_back(Atom{ p, mass });
    return DiscreteMeasure(std::move(out));
}

ProbabilityMeasure::ProbabilityMeasure(DiscreteMeasure m) : m_(std::move(m)) {
    if (std::abs(m_.total_mass() - 1.0) > 1e-12)
        throw std::invalid_argument("ProbabilityMeasure: total mass must be 1");
}

ProbabilityMeasure normalize(const DiscreteMeasure& mu) {
    if (mu.is_zero()) throw ZeroMeasureError();
    std::vector<Atom> out = mu.atoms();
    double total = mu.total_mass();
    for (auto& a : out) a.mass /= total;
    return ProbabilityMeasure(DiscreteMeasure(std::move(out)));
}

std::pair<ProbabilityMeasure, double> log_polar(const DiscreteMeasure& mu) {
    if (mu.is_zero()) throw ZeroMeasureError();
    return { normalize(mu), std::log(mu.total_mass()) };
}

DiscreteMeasure inverse_log_polar(const ProbabilityMeasure& rho, double xi) {
    return rho.measure().scaled(std::exp(xi));
}

DiscreteMeasure add_scaled_atom(const DiscreteMeasure& nu, TypePoint a, double zeta) {
    if (nu.is_zero()) throw ZeroMeasureError();
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::domain_error("add_scaled_atom: zeta must lie in (0,1)");
    return nu.plus_atom(a, nu.total_mass() * zeta / (1.0 - zeta));
}

} // namespace lamperti
