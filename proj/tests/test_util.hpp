#ifndef LAMPERTI_TEST_UTIL_HPP
#define LAMPERTI_TEST_UTIL_HPP

#include <cmath>
#include <functional>

#include "lamperti/measure.hpp"

// Independent quadrature oracle for the tests: adaptive Simpson, kept separate
// from the library's quadrature backend on purpose.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double oracle_integrate(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 48) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// integral of f over (0,1) with integrable power singularities at both
// endpoints, removed by the substitutions z = u^2 and z = 1 - v^2
inline double oracle_integrate_01(const std::function<double(double)>& f,
                                  double tol = 1e-11) {
    double left = oracle_integrate(
        [&](double u) { return 2.0 * u * f(u * u); }, 1e-14, std::sqrt(0.5), tol);
    double right = oracle_integrate(
        [&](double v) { return 2.0 * v * f(1.0 - v * v); }, 1e-14, std::sqrt(0.5), tol);
    return left + right;
}

inline lamperti::DiscreteMeasure make_measure(
    std::initializer_list<std::pair<std::uint32_t, double>> atoms) {
    std::vector<lamperti::Atom> v;
    for (const auto& [label, mass] : atoms)
        v.push_back(lamperti::Atom{ lamperti::TypePoint{ label }, mass });
    return lamperti::DiscreteMeasure(std::move(v));
}

#endif
