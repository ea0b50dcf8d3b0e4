#include "lamperti/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lamperti {

namespace {

double jump_size(double zeta) { return -std::log1p(-zeta); }

} // namespace

PathGrid simulate_levy(const LevyTriplet& triplet, double xi0, double T, double dt,
                       Rng& rng, double max_events_per_unit_time) {
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("simulate_levy: need T, dt > 0");

    double rate = 0.0;
    double compensator = 0.0;
    ZetaSampler sampler;
    if (triplet.jumps.has_continuous()) {
        rate = total_jump_intensity(triplet.jumps);
        if (rate > max_events_per_unit_time)
            throw DivergenceError("simulate_levy: truncated intensity exceeds event cap");
        compensator = log_jump_compensator(triplet.jumps);
        sampler = ZetaSampler(triplet.jumps, -2);
    }

    // jump times and sizes
    std::vector<std::pair<double, double>> jumps;
    if (rate > 0.0) {
        double t = exponential(rng, rate);
        while (t < T) {
            jumps.emplace_back(t, jump_size(sampler.sample(rng)));
            t += exponential(rng, rate);
        }
    }

    double b = triplet.drift - compensator;
    double sigma = triplet.gaussian_sigma;

    PathGrid path;
    path.push(0.0, xi0);
    double t = 0.0, xi = xi0;
    std::size_t next_jump = 0;
    std::size_t grid_steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    auto advance_to = [&](double s) {
        double h = s - t;
        if (h <= 0.0) return;
        xi += b * h + sigma * std::sqrt(h) * gaussian(rng);
        t = s;
    };
    for (std::size_t g = 1; g <= grid_steps; ++g) {
        double tg = std::min(static_cast<double>(g) * dt, T);
        while (next_jump < jumps.size() && jumps[next_jump].first <= tg) {
            advance_to(jumps[next_jump].first);
            xi += jumps[next_jump].second;
            path.push(t, xi, true);
            ++next_jump;
        }
        if (t < tg) {
            advance_to(tg);
            path.push(t, xi);
        }
    }
    return path;
}

std::pair<double, double> empirical_sup_moment(double q, const LevyTriplet& triplet,
                                               double T, double dt,
                                               std::size_t replicas, Rng& rng) {
    if (q < 1.0) throw std::invalid_argument("empirical_sup_moment: q must be >= 1");
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
        PathGrid path = simulate_levy(triplet, 0.0, T, dt, rng);
        double m = 0.0;
        for (double v : path.values) m = std::max(m, std::exp(q * v));
        sum += m;
        sumsq += m * m;
    }
    double n = static_cast<double>(replicas);
    double mean = sum / n;
    double var = (sumsq - n * mean * mean) / (n - 1.0);
    return { mean, std::sqrt(std::max(var, 0.0) / n) };
}

double sup_moment_bound(double q, const LevyTriplet& triplet, double T) {
    if (q < 1.0) throw std::invalid_argument("sup_moment_bound: q must be >= 1");
    double s2 = triplet.gaussian_sigma * triplet.gaussian_sigma;
    double exponent = 0.5 * q * q * s2;
    if (triplet.jumps.has_continuous()) {
        auto below = triplet.jumps.restricted(0.0, 0.5);
        auto above = triplet.jumps.restricted(0.5, 1.0);
        exponent += below.integrate_lambda([&](double z) {
            if (z < 1e-4) {
                double r = q * log_jump_ratio(z);
                return 0.5 * r * r;
            }
            double qs = q * jump_size(z);
            return (std::expm1(qs) - qs) / (z * z);
        });
        exponent += above.integrate_lambda(
            [&](double z) { return std::expm1(q * jump_size(z)) / (z * z); });
    }
    return 4.0 * std::exp(std::abs(triplet.drift) * T) * std::exp(T * exponent);
}

} // namespace lamperti
