#ifndef LAMPERTI_TEST_FUNCTION_HPP
#define LAMPERTI_TEST_FUNCTION_HPP

#include <functional>
#include <utility>
#include <vector>

#include "lamperti/measure.hpp"
#include "lamperti/partition.hpp"

namespace lamperti {

// Smooth compactly supported bump on (0,infty):
// h(x) = exp(-1/(1-u^2)) for u = (x-c)/w, |u| < 1, else 0. Requires c-w > 0
// so that h(0)=0 and the support avoids the absorbing state. h, xh', x^2 h''
// are bounded; first and second derivatives are available in closed form.
class BumpFunction {
public:
    BumpFunction(double center, double half_width);

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;

    double center() const { return c_; }
    double half_width() const { return w_; }
    double sup_norm() const;  // exp(-1), attained at the center

private:
    double c_, w_;
};

// Bounded test function on p-tuples of type points.
class Phi {
public:
    using Fn = std::function<double(const std::vector<TypePoint>&)>;

    Phi(std::size_t arity, Fn fn, double sup_bound)
        : arity_(arity), fn_(std::move(fn)), bound_(sup_bound) {}

    std::size_t arity() const { return arity_; }
    double sup_bound() const { return bound_; }
    double operator()(const std::vector<TypePoint>& args) const { return fn_(args); }

    static Phi constant(std::size_t p, double value = 1.0);
    static Phi all_equal(std::size_t p);                 // 1{a_1 = ... = a_p}
    static Phi product(std::vector<std::function<double(TypePoint)>> factors,
                       double factor_bound);

private:
    std::size_t arity_;
    Fn fn_;
    double bound_;
};

// phi_pi: identify the p input coordinates of phi along the blocks of pi
// (blocks ordered by least elements); the result takes #pi arguments.
Phi phi_pi(const Phi& phi, const Partition& pi);

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// <phi, rho^{(x) arity}> by exact enumeration over atom tuples. Throws
// ResourceError when the k^p tuple count exceeds the cap.
double monomial(const Phi& phi, const ProbabilityMeasure& rho,
                std::size_t tuple_cap = 1'000'000);

// Monte Carlo fallback for the monomial; returns (estimate, standard error).
std::pair<double, double> monomial_mc(const Phi& phi, const ProbabilityMeasure& rho,
                                      std::size_t samples, std::uint64_t seed);

// H_pi(nu) = <phi_pi, (nu/|nu|)^{(x) #pi}>
double h_pi(const Phi& phi, const Partition& pi, const DiscreteMeasure& nu);

// largest-remainder rounding of a probability measure to n particle counts
std::vector<std::pair<TypePoint, std::size_t>> round_to_counts(
    const ProbabilityMeasure& rho, std::size_t n);

// U-statistic of phi over ordered tuples of DISTINCT particles drawn from a
// count configuration: sum over label tuples weighted by falling factorials.
// This is the sampling-without-replacement counterpart of the monomial; for a
// particle system it is exactly dual to the coalescent on phi.arity() lineages.
double u_statistic(const Phi& phi,
                   const std::vector<std::pair<TypePoint, std::size_t>>& counts);

// Duality test function G_{p,phi,h}(nu, pi, z) = h(|nu| z) H_pi(nu).
struct TestFunction {
    std::size_t p;
    Phi phi;
    BumpFunction h;
};

double eval_G(const TestFunction& tf, const DiscreteMeasure& nu,
              const Partition& pi, double z);

} // namespace lamperti

#endif
