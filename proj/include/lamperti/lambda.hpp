#ifndef LAMPERTI_LAMBDA_HPP
#define LAMPERTI_LAMBDA_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lamperti/rng.hpp"

namespace lamperti {

class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct BetaFamily {
    double beta = 1.5;  // in (0,2)
    double c = 1.0;
};

struct LambdaAtom {
    double zeta = 0.5;
    double mass = 1.0;
};

// Reproduction measure: kingman * delta_0 plus a finite measure on (0,1),
// optionally restricted to a window (lo, hi]. `kingman` is the pairwise
// coagulation rate of the associated coalescent (sigma^2 in the population
// parameterization; the frequency diffusion carries sigma^2/2).
class LambdaSpec {
public:
    enum class Kind { None, Beta, Atoms, Table };

    LambdaSpec() = default;

    static LambdaSpec zero() { return LambdaSpec(); }
    static LambdaSpec kingman_only(double rate);
    static LambdaSpec beta_family(double beta, double c, double kingman = 0.0);
    static LambdaSpec from_atoms(std::vector<LambdaAtom> atoms, double kingman = 0.0);
    // piecewise-linear density of Lambda on (0,1), nodes strictly increasing
    static LambdaSpec from_table(std::vector<std::pair<double, double>> nodes,
                                 double kingman = 0.0);

    Kind kind() const { return kind_; }
    double kingman() const { return kingman_; }
    bool has_continuous() const;
    double window_lo() const { return lo_; }
    double window_hi() const { return hi_; }
    const BetaFamily& beta_params() const { return beta_; }
    const std::vector<LambdaAtom>& atoms() const { return atoms_; }

    // Lambda-density at zeta (continuous kinds only, 0 outside the window)
    double density(double zeta) const;

    // restrict the continuous part to (lo, hi] (intersected with the
    // current window); the kingman atom is unaffected
    LambdaSpec restricted(double lo, double hi) const;

    // integral of g against Lambda(dzeta) over the window; exact for atoms
    double integrate_lambda(const std::function<double(double)>& g,
                            double rel_tol = 1e-9) const;
    // integral of g against zeta^-2 Lambda(dzeta) over the window
    double integrate_rate(const std::function<double(double)>& g,
                          double rel_tol = 1e-9) const;

    double continuous_mass() const;  // ||Lambda|| over the window

private:
    double kingman_ = 0.0;
    Kind kind_ = Kind::None;
    BetaFamily beta_{};
    std::vector<LambdaAtom> atoms_;
    std::vector<std::pair<double, double>> table_;
    double lo_ = 0.0, hi_ = 1.0;
};

// Lambda_eps: continuous part restricted to (eps, 1/2].
LambdaSpec truncate(const LambdaSpec& spec, double eps);

// beta_{j,i} = int zeta^{i-2} (1-zeta)^{j-i} Lambda(dzeta) over the window
// (continuous part only; the kingman atom enters pairwise rates separately).
// Closed form via (incomplete) beta functions for the Beta family.
double merger_rate(int j, int i, const LambdaSpec& spec);

// total intensity int zeta^-2 Lambda(dzeta) over the window; throws
// DivergenceError when infinite
double total_jump_intensity(const LambdaSpec& spec);

// int_{window, zeta<=1/2} |log(1-zeta)| zeta^-2 Lambda(dzeta); throws
// DivergenceError when infinite
double log_jump_compensator(const LambdaSpec& spec);

struct SMHParams {
    double kappa = 0.0;
    double sigma = 0.0;
    LambdaSpec lambda;
};

// kappa - int_{(0,1/2]} |log(1-zeta)| zeta^-2 Lambda(dzeta)
double kappa_hat(const SMHParams& params);

// log-mass Levy characteristics: drift = kappa + d with d = -sigma^2/2
// (pinned by the generator calculus applied to f(|nu|)), gaussian part sigma,
// jumps -log(1-zeta) at intensity zeta^-2 Lambda(dzeta), compensated on
// zeta <= 1/2.
struct LevyTriplet {
    double drift = 0.0;          // kappa + d
    double gaussian_sigma = 0.0;
    LambdaSpec jumps;            // continuous part drives the jumps
};

LevyTriplet levy_triplet(const SMHParams& params);

// Levy exponent with E[e^{i theta xi_t}] = e^{-t Psi(theta)}:
//   Psi(theta) = -i(d+kappa)theta + (sigma^2/2) theta^2
//              + int zeta^-2 Lambda(dzeta)
//                [1 - e^{i theta s} + i theta s 1{zeta<=1/2}],  s = -log(1-zeta).
// Psi(0)=0 and Psi(-theta) = conj(Psi(theta)).
std::complex<double> levy_exponent(double theta, const LevyTriplet& triplet);

// |log(1-zeta)| / zeta, stable down to zeta = 0 (limit 1).
double log_jump_ratio(double zeta);

// Samples zeta from the normalized measure w(zeta) Lambda(dzeta) over the
// window, where weight_exponent e gives w = zeta^e (e = -2 for jump-size
// draws, e = 0 for plain Lambda proposals).
class ZetaSampler {
public:
    ZetaSampler() = default;
    ZetaSampler(const LambdaSpec& spec, int weight_exponent);

    double total() const { return total_; }  // int w dLambda over window
    bool empty() const { return total_ <= 0.0; }
    double sample(Rng& rng) const;

private:
    bool discrete_ = false;
    std::vector<double> values_;  // atom zetas or cell edges
    std::vector<double> cdf_;
    double total_ = 0.0;
};

} // namespace lamperti

#endif
