#ifndef LAMPERTI_MEASURE_HPP
#define LAMPERTI_MEASURE_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lamperti {

// Element of the type space. Labels are opaque; equality is label equality.
struct TypePoint {
    std::uint32_t label = 0;
    friend bool operator==(TypePoint a, TypePoint b) { return a.label == b.label; }
    friend bool operator<(TypePoint a, TypePoint b) { return a.label < b.label; }
};

class ZeroMeasureError : public std::domain_error {
public:
    ZeroMeasureError() : std::domain_error("operation undefined on the zero measure") {}
};

struct Atom {
    TypePoint location;
    double mass = 0.0;
};

// Finite positive measure on the label space, kept in canonical form:
// atoms sorted by label, duplicates merged, zero-mass atoms dropped.
// The zero measure (no atoms) is a valid absorbing state.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    static DiscreteMeasure single(std::uint32_t label, double mass) {
        return DiscreteMeasure({ Atom{ TypePoint{ label }, mass } });
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const { return total_; }
    bool is_zero() const { return atoms_.empty(); }
    double mass_at(TypePoint a) const;

    DiscreteMeasure scaled(double factor) const;
    DiscreteMeasure plus_atom(TypePoint a, double mass) const;

    friend bool operator==(const DiscreteMeasure& x, const DiscreteMeasure& y) {
        if (x.atoms_.size() != y.atoms_.size()) return false;
        for (std::size_t i = 0; i < x.atoms_.size(); ++i)
            if (!(x.atoms_[i].location == y.atoms_[i].location) ||
                x.atoms_[i].mass != y.atoms_[i].mass)
                return false;
        return true;
    }

private:
    std::vector<Atom> atoms_;
    double total_ = 0.0;
};

// A DiscreteMeasure with total mass 1 (to 1e-12).
class ProbabilityMeasure {
public:
    explicit ProbabilityMeasure(DiscreteMeasure m);
    const DiscreteMeasure& measure() const { return m_; }
    const std::vector<Atom>& atoms() const { return m_.atoms(); }
    std::size_t size() const { return m_.size(); }

private:
    DiscreteMeasure m_;
};

ProbabilityMeasure normalize(const DiscreteMeasure& mu);

// log-polar decomposition: mu -> (mu/|mu|, log|mu|). Throws ZeroMeasureError
// at the absorbing state.
std::pair<ProbabilityMeasure, double> log_polar(const DiscreteMeasure& mu);

// inverse: (rho, xi) -> e^xi * rho
DiscreteMeasure inverse_log_polar(const ProbabilityMeasure& rho, double xi);

// nu -> nu + |nu| * zeta/(1-zeta) * delta_a, the reproduction jump.
// New total mass is |nu|/(1-zeta); the normalized view is (1-zeta)rho + zeta delta_a.
DiscreteMeasure add_scaled_atom(const DiscreteMeasure& nu, TypePoint a, double zeta);

} // namespace lamperti

#endif
