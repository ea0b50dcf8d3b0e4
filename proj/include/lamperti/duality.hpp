#ifndef LAMPERTI_DUALITY_HPP
#define LAMPERTI_DUALITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lamperti/lambda.hpp"
#include "lamperti/measure.hpp"
#include "lamperti/partition.hpp"
#include "lamperti/population.hpp"
#include "lamperti/test_function.hpp"

namespace lamperti {

struct DualityExperiment {
    std::string id;
    TestFunction tf{ 1, Phi::constant(1), BumpFunction(1.0, 0.5) };
    DiscreteMeasure nu0;
    Partition pi0{ 1 };
    double z0 = 1.0;
    SMHParams params;
    double T = 0.5;
    std::size_t replicas = 100000;
    std::uint64_t seed = 1;
    double eps_trunc = 0.01;
    std::size_t n_particles = 1000;
};

struct DualityReport {
    std::string id;
    double lhs_mean = 0.0, lhs_se = 0.0;
    double rhs_mean = 0.0, rhs_se = 0.0;
    double z = 0.0;
    bool pass = false;
};

// E_nu[G(nu_t, pi0, z0)] (forward MAP construction) against
// E_(pi0,z0)[G(nu0, Pi_t, Z_t)] (coupled dual), identical truncation on both
// sides; Welch z, pass iff |z| < 3.
DualityReport run_duality(const DualityExperiment& exp, unsigned threads = 1);

struct FvDualityExperiment {
    std::string id;
    std::size_t p = 2;
    Phi phi = Phi::all_equal(2);
    ProbabilityMeasure rho0;
    SMHParams params;  // sigma and lambda drive both sides
    double T = 1.0;
    std::size_t replicas = 100000;
    std::size_t rhs_replicas = 200000;
    std::uint64_t seed = 1;
    double eps_trunc = 0.01;
    std::size_t n_particles = 1000;
};

struct FvDualityReport {
    std::string id;
    double lhs_mean = 0.0, lhs_se = 0.0;
    double rhs_mean = 0.0, rhs_se = 0.0;
    double z = 0.0;
    bool pass = false;
};

// E_rho0[<phi_pi, rho_t^{(x)p}>] (frequency side, singleton pi) against
// E_pi[<phi_{Pi_t}, rho0^{(x)p}>] (coalescent side).
FvDualityReport run_fv_duality(const FvDualityExperiment& exp, unsigned threads = 1);

// closed-form dual value for the pairwise-merger chain with p = 2:
// e^{-sigma2 t} r0 + (1 - e^{-sigma2 t})
double kingman_pair_duality_value(double r0, double sigma2, double t);

struct EquivalenceReport {
    std::string id;
    std::vector<std::string> functional_names;
    std::vector<double> z_scores;
    bool pass = false;
};

// MAP-composed vs Poissonian construction compared on bounded moment
// functionals of nu_T (Welch z per functional).
EquivalenceReport run_construction_equivalence(const PopulationScenario& scn,
                                               std::size_t replicas, std::uint64_t seed,
                                               unsigned threads = 1);

} // namespace lamperti

#endif
