#include "lamperti/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace lamperti {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_p_value(double d, std::size_t na, std::size_t nb) {
    double n = static_cast<double>(na) * static_cast<double>(nb) /
               static_cast<double>(na + nb);
    double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    // Kolmogorov distribution tail: 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2)
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * t * t);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    double p = 2.0 * sum;
    return std::min(1.0, std::max(0.0, p));
}

} // namespace lamperti
