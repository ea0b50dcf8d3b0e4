#ifndef LAMPERTI_DUAL_HPP
#define LAMPERTI_DUAL_HPP

#include <cstdint>
#include <vector>

#include "lamperti/coalescent.hpp"
#include "lamperti/lambda.hpp"
#include "lamperti/partition.hpp"
#include "lamperti/rng.hpp"

namespace lamperti {

struct DualState {
    Partition pi{ 1 };
    double log_z = 0.0;
};

struct DualRecord {
    double time = 0.0;
    std::size_t num_blocks = 0;
    double log_z = 0.0;
    int event_kind = 0;  // 0 grid point, 1 common-stream atom, 2 pairwise merger
};

struct DualResult {
    DualState final_state;
    std::vector<DualRecord> records;
    double absorption_time = 0.0;  // +inf when not absorbed by T
};

// Coupled dual (Pi_t, Z_t): one Poisson stream of atoms (t, zeta) at intensity
// dt x zeta^-2 Lambda_eps(dzeta). Every atom adds -log(1-zeta) to log Z and
// runs a literal paintbox trial on Pi (merger only when >= 2 blocks flip);
// independent pairwise mergers at rate sigma^2 per block pair touch Pi only;
// between events log Z moves by (kappa - sigma^2/2 - compensator) t + sigma B_t.
// Continuous reproduction measures are truncated to (eps_trunc, 1/2]; atom
// lists pass through unchanged.
DualResult simulate_dual(std::size_t p, const Partition& pi0, double z0,
                         const SMHParams& params, double T, double eps_trunc,
                         double dt, Rng& rng, bool record_path = false);

// One replica of the nested-truncation coupling: level k keeps atoms with
// zeta in (eps_levels[k], 1/2], all levels share the coarser atoms, their
// participation coins (by block index), and the pairwise-merger stream.
// Returns sup_{t<=T} d(Pi^{(k)}, Pi^{(k+1)}) for each adjacent pair of levels.
std::vector<double> nested_sup_distance(std::size_t p, const SMHParams& params,
                                        double T, const std::vector<double>& eps_levels,
                                        Rng& rng);

struct DualMarginalReport {
    double ks_p_absorption = 1.0;        // Pi vs standalone coalescent
    std::vector<double> cf_error;        // |emp CF of log Z - exp(-T Psi)| per theta
    std::vector<double> cf_tolerance;    // 3 SE + small CF bias allowance
    bool pass = false;
};

// Compares the marginals of the coupled dual against the standalone
// coalescent (absorption-time KS) and the Levy exponent prediction for log Z.
DualMarginalReport dual_marginal_check(std::size_t p, const SMHParams& params,
                                       double T, double eps_trunc,
                                       std::size_t replicas, std::uint64_t seed,
                                       const std::vector<double>& thetas = { 0.5, 1.0, 2.0 });

} // namespace lamperti

#endif
