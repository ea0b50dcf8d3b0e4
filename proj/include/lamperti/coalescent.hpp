#ifndef LAMPERTI_COALESCENT_HPP
#define LAMPERTI_COALESCENT_HPP

#include <vector>

#include "lamperti/lambda.hpp"
#include "lamperti/partition.hpp"
#include "lamperti/rng.hpp"

namespace lamperti {

struct CoalescentEvent {
    enum class Kind { Pairwise, Paintbox };
    double time = 0.0;
    Kind kind = Kind::Pairwise;
    double zeta = 0.0;                          // paintbox only
    std::vector<std::uint32_t> participants;    // merged block indices (>= 2)
    std::size_t blocks_before = 0;
    std::size_t blocks_after = 0;
};

struct CoalescentPath {
    Partition initial{ 1 };
    std::vector<CoalescentEvent> events;
    std::vector<Partition> states;  // partition after each event

    Partition at(double t) const;
    // time of the drop to a single block, or +inf if not absorbed
    double absorption_time() const;
};

// Each block participates in a paintbox trial with probability zeta; blocks
// coagulate only when at least two participate. Returns the new partition and
// the flagged block set.
std::pair<Partition, std::vector<std::uint32_t>>
paintbox_merge(const Partition& pi, double zeta, Rng& rng);

// (p, Lambda)-coalescent run until T or absorption. Pairwise mergers at rate
// pair_rate per unordered pair of blocks (the Kingman part, sigma^2 in the
// dual parameterization, plus any kingman atom carried by the LambdaSpec);
// multiple mergers through paintbox trials driven by the atoms of
// zeta^-2 Lambda over its window. Ineffective paintbox candidates (fewer than
// two participants) are thinned away without generating them one by one: the
// candidate clock is C(j,2)*||Lambda|| and a candidate at zeta is kept with
// probability P(Binom(j,zeta) >= 2) / (C(j,2) zeta^2) <= 1, which reproduces
// the effective rates exactly.
CoalescentPath simulate_coalescent(std::size_t p, const SMHParams& params, double T,
                                   Rng& rng);

// P(Binom(j, zeta) >= 2), computed by the positive binomial sum (stable for
// small zeta).
double effective_paintbox_probability(std::size_t j, double zeta);

} // namespace lamperti

#endif
