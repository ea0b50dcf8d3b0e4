#ifndef LAMPERTI_LEVY_HPP
#define LAMPERTI_LEVY_HPP

#include <utility>

#include "lamperti/lambda.hpp"
#include "lamperti/path.hpp"
#include "lamperti/rng.hpp"

namespace lamperti {

// Log-mass Levy path on [0, T]: drift + exact Gaussian increments recorded on
// the dt grid and at jump times, jumps -log(1-zeta) from a Poisson process of
// the (finite-activity) jump spec, compensated by
// -t int_{zeta<=1/2} |log(1-zeta)| zeta^-2 Lambda(dzeta). The Brownian part is
// sampled exactly at every recorded time, so the only grid effect is the
// sampling resolution of the path, not a discretization bias at the knots.
PathGrid simulate_levy(const LevyTriplet& triplet, double xi0, double T, double dt,
                       Rng& rng, double max_events_per_unit_time = 1e7);

// Monte Carlo estimate of E[sup_{t<=T} e^{q xi_t}] on the simulation grid.
std::pair<double, double> empirical_sup_moment(double q, const LevyTriplet& triplet,
                                               double T, double dt,
                                               std::size_t replicas, Rng& rng);

// Explicit upper bound for E[sup_{t<=T} e^{q xi_t}] with xi_0 = 0:
//   4 * exp(|drift| T) * exp(T [q^2 sigma^2/2
//       + int_{zeta<=1/2} (e^{qs}-1-qs) r(dzeta)
//       + int_{zeta>1/2} (e^{qs}-1) r(dzeta)]),   s = -log(1-zeta),
// where the constant 4 is Doob's L2 bound applied to the submartingale
// e^{q M_t / 2}, valid for every q >= 1.
double sup_moment_bound(double q, const LevyTriplet& triplet, double T);

} // namespace lamperti

#endif
