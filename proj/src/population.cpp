#include "lamperti/population.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "lamperti/time_change.hpp"

namespace lamperti {

namespace {

double jump_size(double zeta) { return -std::log1p(-zeta); }

} // namespace

MoranSystem::MoranSystem(const ProbabilityMeasure& rho0, std::size_t n_particles) {
    if (n_particles < 2) throw std::invalid_argument("MoranSystem: need at least 2 particles");
    const auto& atoms = rho0.atoms();
    // largest-remainder rounding of masses to particle counts
    std::vector<std::size_t> counts(atoms.size());
    std::vector<std::pair<double, std::size_t>> rema(atoms.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double exact = atoms[i].mass * static_cast<double>(n_particles);
        counts[i] = static_cast<std::size_t>(exact);
        rema[i] = { exact - std::floor(exact), i };
        assigned += counts[i];
    }
    std::sort(rema.begin(), rema.end(), std::greater<>());
    for (std::size_t k = 0; assigned < n_particles; ++k, ++assigned)
        ++counts[rema[k % rema.size()].second];
    types_.reserve(n_particles);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        types_.insert(types_.end(), counts[i], atoms[i].location.label);
    perm_.resize(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) perm_[i] = static_cast<std::uint32_t>(i);
}

void MoranSystem::resample_window(double pair_rate, double window, Rng& rng) {
    if (pair_rate <= 0.0 || window <= 0.0) return;
    double n = static_cast<double>(types_.size());
    double total = pair_rate * 0.5 * n * (n - 1.0) * window;
    if (total > 1e8)
        throw DivergenceError("resample_window: event count exploded; reduce dt or particles");
    std::uint64_t events = poisson(rng, total);
    for (std::uint64_t e = 0; e < events; ++e) {
        std::size_t i = uniform_index(rng, types_.size());
        std::size_t j = uniform_index(rng, types_.size() - 1);
        if (j >= i) ++j;
        types_[j] = types_[i];  // i copies onto j
    }
}

TypePoint MoranSystem::paintbox_jump(double zeta, Rng& rng) {
    std::uint32_t a = types_[uniform_index(rng, types_.size())];
    std::size_t m = std::binomial_distribution<std::size_t>(types_.size(), zeta)(rng);
    for (std::size_t k = 0; k < m; ++k) {
        std::swap(perm_[k], perm_[k + uniform_index(rng, types_.size() - k)]);
        types_[perm_[k]] = a;
    }
    return TypePoint{ a };
}

DiscreteMeasure MoranSystem::empirical() const {
    std::map<std::uint32_t, std::size_t> counts;
    for (std::uint32_t t : types_) ++counts[t];
    std::vector<Atom> atoms;
    atoms.reserve(counts.size());
    double n = static_cast<double>(types_.size());
    for (const auto& [label, c] : counts)
        atoms.push_back(Atom{ TypePoint{ label }, static_cast<double>(c) / n });
    return DiscreteMeasure(std::move(atoms));
}

LambdaSpec effective_jump_spec(const PopulationScenario& scn) {
    const LambdaSpec& l = scn.params.lambda;
    if (l.kind() == LambdaSpec::Kind::Beta || l.kind() == LambdaSpec::Kind::Table)
        return truncate(l, scn.eps_trunc);
    return l;
}

std::vector<std::string> validate_scenario(const PopulationScenario& scn) {
    std::vector<std::string> warnings;
    if (scn.nu0.is_zero()) throw std::invalid_argument("scenario: nu0 must be nonzero");
    if (!(scn.T > 0.0) || !(scn.dt > 0.0)) throw std::invalid_argument("scenario: need T, dt > 0");
    if (!(scn.eps_trunc > 0.0 && scn.eps_trunc < 0.5) &&
        (scn.params.lambda.kind() == LambdaSpec::Kind::Beta ||
         scn.params.lambda.kind() == LambdaSpec::Kind::Table))
        throw std::invalid_argument("scenario: eps_trunc must lie in (0, 1/2) for continuous Lambda");
    LambdaSpec eff = effective_jump_spec(scn);
    double lo = eff.window_lo();
    if (eff.kind() == LambdaSpec::Kind::Atoms && !eff.atoms().empty())
        lo = eff.atoms().front().zeta;
    if (eff.has_continuous() && lo > 0.0 &&
        static_cast<double>(scn.n_particles) < 10.0 / lo)
        warnings.push_back("n_particles below 10/zeta_min; paintbox resolution is coarse");
    return warnings;
}

namespace {

// Frequency coordinate: an exact pure-jump measure when sigma = 0 (the
// frequencies are piecewise constant in that case), a Moran particle system
// otherwise.
class FrequencyState {
public:
    FrequencyState(const ProbabilityMeasure& rho0, std::size_t n_particles, bool exact)
        : exact_(exact) {
        if (exact_)
            measure_ = rho0.measure();
        else
            moran_.emplace(rho0, n_particles);
    }

    void resample_window(double pair_rate, double window, Rng& rng) {
        if (!exact_) moran_->resample_window(pair_rate, window, rng);
    }

    TypePoint paintbox_jump(double zeta, Rng& rng) {
        if (!exact_) return moran_->paintbox_jump(zeta, rng);
        double u = uniform01(rng);
        TypePoint a = measure_.atoms().back().location;
        double acc = 0.0;
        for (const auto& atom : measure_.atoms()) {
            acc += atom.mass;
            if (u < acc) { a = atom.location; break; }
        }
        std::vector<Atom> atoms = measure_.atoms();
        for (auto& at : atoms) at.mass *= (1.0 - zeta);
        atoms.push_back(Atom{ a, zeta });
        measure_ = DiscreteMeasure(std::move(atoms));
        return a;
    }

    DiscreteMeasure empirical() const { return exact_ ? measure_ : moran_->empirical(); }

private:
    bool exact_;
    std::optional<MoranSystem> moran_;
    DiscreteMeasure measure_;
};

// shared event-driven kernel for the two constructions
template <typename OnRecord>
void run_population_kernel(const PopulationScenario& scn, Rng& rng,
                           const std::vector<double>& record_times, OnRecord&& record) {
    LambdaSpec jspec = effective_jump_spec(scn);
    double rate = 0.0, compensator = 0.0;
    ZetaSampler sampler;
    if (jspec.has_continuous()) {
        rate = total_jump_intensity(jspec);
        compensator = log_jump_compensator(jspec);
        sampler = ZetaSampler(jspec, -2);
    }
    double sigma = scn.params.sigma;
    double drift = scn.params.kappa - 0.5 * sigma * sigma - compensator;
    double pair_rate = sigma * sigma;

    FrequencyState moran(normalize(scn.nu0), scn.n_particles, sigma == 0.0);
    double xi = std::log(scn.nu0.total_mass());

    std::vector<std::pair<double, double>> atom_events;  // (time, zeta)
    if (rate > 0.0) {
        double t = exponential(rng, rate);
        while (t < scn.T) {
            atom_events.emplace_back(t, sampler.sample(rng));
            t += exponential(rng, rate);
        }
    }

    double t = 0.0;
    std::size_t next_atom = 0;
    auto advance_to = [&](double s) {
        double h = s - t;
        if (h <= 0.0) return;
        moran.resample_window(pair_rate, h, rng);
        double g = sigma > 0.0 ? gaussian(rng) : 0.0;
        xi += drift * h + sigma * std::sqrt(h) * g;
        t = s;
    };
    record(0.0, moran, xi, false);
    for (double tr : record_times) {
        while (next_atom < atom_events.size() && atom_events[next_atom].first <= tr) {
            auto [ta, zeta] = atom_events[next_atom];
            advance_to(ta);
            moran.paintbox_jump(zeta, rng);
            xi += jump_size(zeta);
            record(ta, moran, xi, true);
            ++next_atom;
        }
        if (t < tr) {
            advance_to(tr);
            record(tr, moran, xi, false);
        }
    }
}

std::vector<double> grid_times(double T, double dt) {
    std::vector<double> times;
    std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    times.reserve(steps);
    for (std::size_t g = 1; g <= steps; ++g)
        times.push_back(std::min(static_cast<double>(g) * dt, T));
    return times;
}

} // namespace

SmhMapResult simulate_smh_map(const PopulationScenario& scn, Rng& rng) {
    SmhMapResult out;
    run_population_kernel(scn, rng, grid_times(scn.T, scn.dt),
                          [&](double t, const auto& freq, double xi, bool is_jump) {
                              DiscreteMeasure rho = freq.empirical();
                              out.rho.push(t, rho, is_jump);
                              out.xi.push(t, xi, is_jump);
                              out.nu.push(t, rho.scaled(std::exp(xi)), is_jump);
                          });
    return out;
}

SmhTerminal simulate_smh_terminal_parts(const PopulationScenario& scn, Rng& rng) {
    SmhTerminal out;
    run_population_kernel(scn, rng, { scn.T },
                          [&](double t, const auto& freq, double xi, bool) {
                              if (t == scn.T) {
                                  out.freq = freq.empirical();
                                  out.xi = xi;
                              }
                          });
    return out;
}

DiscreteMeasure simulate_smh_terminal(const PopulationScenario& scn, Rng& rng) {
    SmhTerminal parts = simulate_smh_terminal_parts(scn, rng);
    return parts.freq.scaled(std::exp(parts.xi));
}

MeasurePath simulate_poissonian(const PopulationScenario& scn, Rng& rng) {
    // Same event skeleton, mass tracked multiplicatively: e^{kappa_hat s}
    // times the exponential-Brownian diffusion mass between atoms, and a
    // factor 1/(1-zeta) at each atom.
    LambdaSpec jspec = effective_jump_spec(scn);
    double rate = 0.0, compensator = 0.0;
    ZetaSampler sampler;
    if (jspec.has_continuous()) {
        rate = total_jump_intensity(jspec);
        compensator = log_jump_compensator(jspec);
        sampler = ZetaSampler(jspec, -2);
    }
    double sigma = scn.params.sigma;
    double kappa_hat_eff = scn.params.kappa - compensator;
    double pair_rate = sigma * sigma;

    FrequencyState moran(normalize(scn.nu0), scn.n_particles, sigma == 0.0);
    double mass = scn.nu0.total_mass();

    std::vector<std::pair<double, double>> atom_events;
    if (rate > 0.0) {
        double t = exponential(rng, rate);
        while (t < scn.T) {
            atom_events.emplace_back(t, sampler.sample(rng));
            t += exponential(rng, rate);
        }
    }

    MeasurePath out;
    double t = 0.0;
    std::size_t next_atom = 0;
    auto advance_to = [&](double s) {
        double h = s - t;
        if (h <= 0.0) return;
        moran.resample_window(pair_rate, h, rng);
        double g = sigma > 0.0 ? gaussian(rng) : 0.0;
        mass *= std::exp(kappa_hat_eff * h - 0.5 * sigma * sigma * h +
                         sigma * std::sqrt(h) * g);
        t = s;
    };
    out.push(0.0, moran.empirical().scaled(mass));
    for (double tr : grid_times(scn.T, scn.dt)) {
        while (next_atom < atom_events.size() && atom_events[next_atom].first <= tr) {
            auto [ta, zeta] = atom_events[next_atom];
            advance_to(ta);
            moran.paintbox_jump(zeta, rng);
            mass /= (1.0 - zeta);
            out.push(ta, moran.empirical().scaled(mass), true);
            ++next_atom;
        }
        if (t < tr) {
            advance_to(tr);
            out.push(tr, moran.empirical().scaled(mass));
        }
    }
    return out;
}

DiscreteMeasure simulate_poissonian_terminal(const PopulationScenario& scn, Rng& rng) {
    PopulationScenario one = scn;
    one.dt = scn.T;  // single recording point
    MeasurePath path = simulate_poissonian(one, rng);
    return path.states.back();
}

MeasurePath simulate_dw(const DiscreteMeasure& mu0, double sigma, double T, double dt,
                        std::size_t n_particles, Rng& rng) {
    if (mu0.is_zero()) throw std::invalid_argument("simulate_dw: mu0 must be nonzero");
    MoranSystem moran(normalize(mu0), n_particles);
    double mass = mu0.total_mass();
    double pair_rate = sigma * sigma;

    // masses below the floor are treated as extinct; the resampling clock
    // 1/mass would otherwise explode in the final Euler steps
    const double mass_floor = 1e-9 * mu0.total_mass();

    MeasurePath out;
    out.push(0.0, mu0);
    double t = 0.0;
    for (double tg : grid_times(T, dt)) {
        double h = tg - t;
        if (mass > 0.0) {
            double clock = h / mass;  // c_1 clock increment, left-point rule
            moran.resample_window(pair_rate, clock, rng);
            mass += std::sqrt(sigma * sigma * mass * h) * gaussian(rng);
            if (mass <= mass_floor) mass = 0.0;  // absorbing state
        }
        t = tg;
        out.push(t, mass > 0.0 ? moran.empirical().scaled(mass) : DiscreteMeasure());
    }
    return out;
}

MeasurePath simulate_ss_population(const PopulationScenario& scn, Rng& rng) {
    SmhMapResult smh = simulate_smh_map(scn, rng);
    return gamma_alpha_transform(smh.nu, scn.alpha);
}

} // namespace lamperti
