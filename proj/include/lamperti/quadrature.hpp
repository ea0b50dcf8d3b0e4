#ifndef LAMPERTI_QUADRATURE_HPP
#define LAMPERTI_QUADRATURE_HPP

#include <functional>

namespace lamperti {

// Adaptive quadrature of f over (a, b), tolerant of integrable endpoint
// singularities. rel_tol is the requested relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9);

// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

// Complete beta function B(a, b).
double beta_function(double a, double b);

} // namespace lamperti

#endif
