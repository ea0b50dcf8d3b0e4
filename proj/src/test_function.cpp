#include "lamperti/test_function.hpp"

#include <cmath>
#include <stdexcept>

#include "lamperti/rng.hpp"

namespace lamperti {

BumpFunction::BumpFunction(double center, double half_width) : c_(center), w_(half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("BumpFunction: half_width must be > 0");
    if (!(center - half_width > 0.0))
        throw std::invalid_argument("BumpFunction: support must lie in (0,infty)");
}

double BumpFunction::value(double x) const {
    double u = (x - c_) / w_;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

double BumpFunction::d1(double x) const {
    double u = (x - c_) / w_;
    if (std::abs(u) >= 1.0) return 0.0;
    double q = 1.0 - u * u;
    double phi1 = -2.0 * u / (q * q);
    return value(x) * phi1 / w_;
}

double BumpFunction::d2(double x) const {
    double u = (x - c_) / w_;
    if (std::abs(u) >= 1.0) return 0.0;
    double q = 1.0 - u * u;
    double phi1 = -2.0 * u / (q * q);
    double phi2 = -2.0 / (q * q) - 8.0 * u * u / (q * q * q);
    return value(x) * (phi1 * phi1 + phi2) / (w_ * w_);
}

double BumpFunction::sup_norm() const { return std::exp(-1.0); }

Phi Phi::constant(std::size_t p, double value) {
    return Phi(p, [value](const std::vector<TypePoint>&) { return value; }, std::abs(value));
}

Phi Phi::all_equal(std::size_t p) {
    return Phi(p,
               [](const std::vector<TypePoint>& a) {
                   for (std::size_t i = 1; i < a.size(); ++i)
                       if (!(a[i] == a[0])) return 0.0;
                   return 1.0;
               },
               1.0);
}

Phi Phi::product(std::vector<std::function<double(TypePoint)>> factors, double factor_bound) {
    std::size_t p = factors.size();
    double bound = 1.0;
    for (std::size_t i = 0; i < p; ++i) bound *= factor_bound;
    return Phi(p,
               [fs = std::move(factors)](const std::vector<TypePoint>& a) {
                   double v = 1.0;
                   for (std::size_t i = 0; i < a.size(); ++i) v *= fs[i](a[i]);
                   return v;
               },
               bound);
}

Phi phi_pi(const Phi& phi, const Partition& pi) {
    if (pi.num_elements() != phi.arity())
        throw std::invalid_argument("phi_pi: partition depth must match phi arity");
    std::vector<std::uint32_t> lift = pi.labels();
    std::size_t p = phi.arity();
    return Phi(pi.num_blocks(),
               [phi, lift, p](const std::vector<TypePoint>& block_args) {
                   std::vector<TypePoint> full(p);
                   for (std::size_t i = 0; i < p; ++i) full[i] = block_args[lift[i]];
                   return phi(full);
               },
               phi.sup_bound());
}

double monomial(const Phi& phi, const ProbabilityMeasure& rho, std::size_t tuple_cap) {
    const auto& atoms = rho.atoms();
    std::size_t k = atoms.size();
    std::size_t p = phi.arity();
    if (p == 0) throw std::invalid_argument("monomial: arity must be >= 1");
    double count = std::pow(static_cast<double>(k), static_cast<double>(p));
    if (count > static_cast<double>(tuple_cap))
        throw ResourceError("monomial: tuple count exceeds cap; use monomial_mc");

    std::vector<std::size_t> idx(p, 0);
    std::vector<TypePoint> args(p);
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < p; ++i) {
            args[i] = atoms[idx[i]].location;
            w *= atoms[idx[i]].mass;
        }
        sum += w * phi(args);
        std::size_t j = 0;
        while (j < p && ++idx[j] == k) idx[j++] = 0;
        if (j == p) break;
    }
    return sum;
}

std::pair<double, double> monomial_mc(const Phi& phi, const ProbabilityMeasure& rho,
                                      std::size_t samples, std::uint64_t seed) {
    Rng rng = make_stream(seed, 0x6d6f6e6fULL);
    const auto& atoms = rho.atoms();
    std::vector<double> cdf(atoms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        acc += atoms[i].mass;
        cdf[i] = acc;
    }
    auto draw = [&](double u) {
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] < u) lo = mid + 1; else hi = mid;
        }
        return atoms[lo].location;
    };
    std::vector<TypePoint> args(phi.arity());
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& a : args) a = draw(uniform01(rng) * acc);
        double v = phi(args);
        sum += v;
        sumsq += v * v;
    }
    double n = static_cast<double>(samples);
    double mean = sum / n;
    double var = (sumsq - n * mean * mean) / (n - 1.0);
    return { mean, std::sqrt(var / n) };
}

double h_pi(const Phi& phi, const Partition& pi, const DiscreteMeasure& nu) {
    return monomial(phi_pi(phi, pi), normalize(nu));
}

std::vector<std::pair<TypePoint, std::size_t>> round_to_counts(
    const ProbabilityMeasure& rho, std::size_t n) {
    const auto& atoms = rho.atoms();
    std::vector<std::pair<TypePoint, std::size_t>> counts(atoms.size());
    std::vector<std::pair<double, std::size_t>> rema(atoms.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double exact = atoms[i].mass * static_cast<double>(n);
        counts[i] = { atoms[i].location, static_cast<std::size_t>(exact) };
        rema[i] = { exact - std::floor(exact), i };
        assigned += counts[i].second;
    }
    std::sort(rema.begin(), rema.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned)
        ++counts[rema[k % rema.size()].second].second;
    return counts;
}

double u_statistic(const Phi& phi,
                   const std::vector<std::pair<TypePoint, std::size_t>>& counts) {
    std::size_t p = phi.arity(), k = counts.size();
    std::size_t n = 0;
    for (const auto& [loc, c] : counts) n += c;
    if (n < p) throw std::invalid_argument("u_statistic: fewer particles than arity");

    double denom = 1.0;
    for (std::size_t i = 0; i < p; ++i) denom *= static_cast<double>(n - i);

    std::vector<std::size_t> idx(p, 0), mult(k, 0);
    std::vector<TypePoint> args(p);
    double sum = 0.0;
    while (true) {
        std::fill(mult.begin(), mult.end(), 0);
        double w = 1.0;
        for (std::size_t i = 0; i < p; ++i) {
            args[i] = counts[idx[i]].first;
            w *= static_cast<double>(counts[idx[i]].second) -
                 static_cast<double>(mult[idx[i]]);
            ++mult[idx[i]];
        }
        if (w > 0.0) sum += w * phi(args);
        std::size_t j = 0;
        while (j < p && ++idx[j] == k) idx[j++] = 0;
        if (j == p) break;
    }
    return sum / denom;
}

double eval_G(const TestFunction& tf, const DiscreteMeasure& nu,
              const Partition& pi, double z) {
    if (nu.is_zero()) throw ZeroMeasureError();
    if (!(z > 0.0)) throw std::domain_error("eval_G: z must be positive");
    double hx = tf.h.value(nu.total_mass() * z);
    if (hx == 0.0) return 0.0;
    return hx * h_pi(tf.phi, pi, nu);
}

} // namespace lamperti
