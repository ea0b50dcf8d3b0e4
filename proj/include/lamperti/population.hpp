#ifndef LAMPERTI_POPULATION_HPP
#define LAMPERTI_POPULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lamperti/lambda.hpp"
#include "lamperti/measure.hpp"
#include "lamperti/path.hpp"
#include "lamperti/rng.hpp"

namespace lamperti {

// Finite-particle frequency process. Unordered pairs resample at a given
// rate (one of the two particles copies its type onto the other), so two
// sampled lineages coalesce at exactly that pair rate. Reproduction jumps
// relabel a Binomial(N, zeta) uniform subset to a type drawn from the
// pre-jump empirical measure, which makes the induced paintbox trials of a
// p-sample exactly independent zeta-coins.
class MoranSystem {
public:
    MoranSystem(const ProbabilityMeasure& rho0, std::size_t n_particles);

    std::size_t size() const { return types_.size(); }
    void resample_window(double pair_rate, double window, Rng& rng);
    TypePoint paintbox_jump(double zeta, Rng& rng);
    DiscreteMeasure empirical() const;  // total mass 1 up to rounding

private:
    std::vector<std::uint32_t> types_;
    std::vector<std::uint32_t> perm_;  // scratch index pool for subset draws
};

struct PopulationScenario {
    SMHParams params;
    double alpha = 0.0;
    DiscreteMeasure nu0;
    double T = 1.0;
    double dt = 1e-3;
    double eps_trunc = 0.01;
    std::size_t n_particles = 1000;
    std::uint64_t seed = 1;
};

// Continuous-part reproduction measures are restricted to (eps_trunc, 1/2];
// atom lists are finite-activity already and pass through unchanged.
LambdaSpec effective_jump_spec(const PopulationScenario& scn);

std::vector<std::string> validate_scenario(const PopulationScenario& scn);

struct SmhMapResult {
    MeasurePath rho;  // frequency path (unit-mass states)
    PathGrid xi;      // log-mass path
    MeasurePath nu;   // composed population path
};

// MAP-composed construction: one Poisson stream drives both coordinates
// (frequency paintbox jumps and log-mass jumps of -log(1-zeta)); between
// atoms the frequencies follow Moran resampling at pair rate sigma^2 and the
// log-mass moves by (kappa - sigma^2/2 - compensator) t + sigma B_t with
// exact Gaussian increments.
SmhMapResult simulate_smh_map(const PopulationScenario& scn, Rng& rng);

// terminal state only (no path recording); same law and stream layout
DiscreteMeasure simulate_smh_terminal(const PopulationScenario& scn, Rng& rng);

struct SmhTerminal {
    DiscreteMeasure freq;  // unit-mass frequency state
    double xi = 0.0;       // log total mass
};
SmhTerminal simulate_smh_terminal_parts(const PopulationScenario& scn, Rng& rng);

// Poissonian construction: between atoms runs the mass-exponential /
// Moran-frequency form of the time-changed branching diffusion scaled by
// e^{kappa_hat s}; at atoms applies the reproduction jump
// nu -> nu + |nu| zeta/(1-zeta) delta_a with a drawn from nu/|nu|.
MeasurePath simulate_poissonian(const PopulationScenario& scn, Rng& rng);
DiscreteMeasure simulate_poissonian_terminal(const PopulationScenario& scn, Rng& rng);

// Measure-valued branching diffusion without mutation: total mass is the
// Euler scheme for the diffusion with generator (sigma^2/2) x f'' (increment
// sqrt(sigma^2 x dt) N(0,1), absorbed at 0); frequencies follow Moran
// dynamics on the c_1 clock of the mass path.
MeasurePath simulate_dw(const DiscreteMeasure& mu0, double sigma, double T, double dt,
                        std::size_t n_particles, Rng& rng);

// alpha-self-similar population: gamma_alpha time change of the composed
// process.
MeasurePath simulate_ss_population(const PopulationScenario& scn, Rng& rng);

} // namespace lamperti

#endif
