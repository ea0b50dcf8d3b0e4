#ifndef LAMPERTI_GENERATOR_HPP
#define LAMPERTI_GENERATOR_HPP

#include <functional>

#include "lamperti/lambda.hpp"
#include "lamperti/measure.hpp"
#include "lamperti/partition.hpp"
#include "lamperti/test_function.hpp"

namespace lamperti {

struct GateauxConfig {
    double eps_fd = 1e-5;   // first-derivative step
    double eps_fd2 = 1e-4;  // outer step of the nested second difference
    bool richardson = true;
};

using MeasureFn = std::function<double(const DiscreteMeasure&)>;

// Directional derivative of F at nu in the direction delta_a: central
// difference in the atom mass, Richardson extrapolated; falls back to a
// one-sided stencil when the atom mass cannot go negative. order 2 uses
// nested first differences.
double gateaux(const MeasureFn& F, const DiscreteMeasure& nu, TypePoint a, int order,
               const GateauxConfig& cfg = {});

struct GeneratorTerms {
    double drift = 0.0;
    double diffusion = 0.0;
    double jump = 0.0;
    double total() const { return drift + diffusion + jump; }
};

// |nu|^{-alpha} (kappa int nu(da) F'(nu;a)
//               + (sigma^2/2)|nu| int nu(da) F''(nu;a,a)
//               + int nu(da)/|nu| int zeta^-2 Lambda(dzeta)
//                 {F(nu + |nu| zeta/(1-zeta) delta_a) - F(nu)
//                  - |nu| |log(1-zeta)| 1{zeta<=1/2} F'(nu;a)})
// Derivatives by finite differences; the jump integrand switches to its
// second-order expansion below zeta = 1e-3 where direct evaluation loses all
// relative precision.
GeneratorTerms apply_G_terms(const MeasureFn& F, const DiscreteMeasure& nu,
                             const SMHParams& params, double alpha = 0.0,
                             const GateauxConfig& cfg = {});
double apply_G(const MeasureFn& F, const DiscreteMeasure& nu, const SMHParams& params,
               double alpha = 0.0, const GateauxConfig& cfg = {});

// Bridge operator on G_{p,phi,h}, evaluated with analytic h-derivatives and
// exact sums over subsets of the blocks of pi (weights zeta^l (1-zeta)^{b-l}
// with b = #pi; subsets of fewer than two blocks leave pi unchanged).
GeneratorTerms apply_M_terms(const TestFunction& tf, const DiscreteMeasure& nu,
                             const Partition& pi, double z, const SMHParams& params);
double apply_M(const TestFunction& tf, const DiscreteMeasure& nu, const Partition& pi,
               double z, const SMHParams& params);

struct OperatorDualityReport {
    GeneratorTerms lhs_terms;  // generator applied to G(., pi, z)
    GeneratorTerms rhs_terms;  // bridge operator applied to G(nu, ., .)
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_diff = 0.0;     // |lhs-rhs| / (1+|rhs|)
    bool pass = false;
};

OperatorDualityReport check_operator_duality(const TestFunction& tf,
                                             const DiscreteMeasure& nu,
                                             const Partition& pi, double z,
                                             const SMHParams& params, double tol = 1e-4,
                                             const GateauxConfig& cfg = {});

// scalar test function with analytic derivatives
struct ScalarFunction {
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

// total-mass generator: (d+kappa) x^{1-alpha} f' + (sigma^2/2) x^{2-alpha} f''
// + x^{-alpha} int [f(xu) - f(x) - x f'(x) log(u) 1{u<=2}] Theta(du), with
// Theta the pushforward of zeta^-2 Lambda under zeta -> 1/(1-zeta).
double apply_pssmp_generator(const ScalarFunction& f, double x, double alpha,
                             const SMHParams& params);

// Verifies A f = b^{-alpha} [A (S_b f)](b^{-1} nu) with S_b f(mu) = f(b mu);
// returns the relative difference of the two numeric routes.
double scaling_identity_rel_diff(const MeasureFn& F, const DiscreteMeasure& nu,
                                 const SMHParams& params, double alpha, double b,
                                 const GateauxConfig& cfg = {});

// Parameters whose composed generator at alpha = beta-1 is the stable
// branching generator: sigma = 0, Lambda the (beta, c) family, and
// kappa = -int zeta^-2 Lambda(dzeta) [zeta/(1-zeta) - |log(1-zeta)| 1{zeta<=1/2}].
SMHParams beta_stable_params(double beta, double c);

// c x int_0^infty h^{-1-beta} [f(x+h) - f(x) - h f'(x)] dh (reference route
// for the stable-generator identity; f_support_end bounds the support of f so
// the far tail integrates in closed form)
double stable_branching_generator(const ScalarFunction& f, double x, double beta, double c,
                                  double f_support_end);

// zeta/(1-zeta) + log(1-zeta) = sum_{k>=2} (1-1/k) zeta^k, evaluated stably.
double compensated_fraction_gap(double zeta);

} // namespace lamperti

#endif
