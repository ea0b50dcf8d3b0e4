#include "lamperti/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace lamperti {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(a < b)) return 0.0;
    boost::math::quadrature::tanh_sinh<double> quad(15);
    double error = 0.0, l1 = 0.0;
    double v = quad.integrate(f, a, b, rel_tol, &error, &l1);
    if (!std::isfinite(v))
        throw std::runtime_error("integrate: quadrature failed to converge");
    return v;
}

double regularized_incomplete_beta(double a, double b, double x) {
    return boost::math::ibeta(a, b, x);
}

double beta_function(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

} // namespace lamperti
