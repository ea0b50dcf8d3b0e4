#include "lamperti/lambda.hpp"

#include <algorithm>
#include <cmath>

#include "lamperti/quadrature.hpp"

namespace lamperti {

namespace {

double jump_size(double zeta) { return -std::log1p(-zeta); }  // = |log(1-zeta)|

// 1 - cos(x), stable for small x
double one_minus_cos(double x) {
    double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

// x - sin(x), stable for small x
double x_minus_sin(double x) {
    if (std::abs(x) < 1e-3) {
        double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return x - std::sin(x);
}

} // namespace

LambdaSpec LambdaSpec::kingman_only(double rate) {
    if (rate < 0.0) throw std::invalid_argument("kingman rate must be >= 0");
    LambdaSpec s;
    s.kingman_ = rate;
    return s;
}

LambdaSpec LambdaSpec::beta_family(double beta, double c, double kingman) {
    if (!(beta > 0.0 && beta < 2.0)) throw std::invalid_argument("beta must lie in (0,2)");
    if (!(c > 0.0)) throw std::invalid_argument("beta family: c must be > 0");
    if (kingman < 0.0) throw std::invalid_argument("kingman rate must be >= 0");
    LambdaSpec s;
    s.kind_ = Kind::Beta;
    s.beta_ = BetaFamily{ beta, c };
    s.kingman_ = kingman;
    return s;
}

LambdaSpec LambdaSpec::from_atoms(std::vector<LambdaAtom> atoms, double kingman) {
    for (const auto& a : atoms) {
        if (!(a.zeta > 0.0 && a.zeta < 1.0))
            throw std::invalid_argument("lambda atom: zeta must lie in (0,1)");
        if (!(a.mass > 0.0)) throw std::invalid_argument("lambda atom: mass must be > 0");
    }
    if (kingman < 0.0) throw std::invalid_argument("kingman rate must be >= 0");
    std::sort(atoms.begin(), atoms.end(),
              [](const LambdaAtom& x, const LambdaAtom& y) { return x.zeta < y.zeta; });
    LambdaSpec s;
    s.kind_ = atoms.empty() ? Kind::None : Kind::Atoms;
    s.atoms_ = std::move(atoms);
    s.kingman_ = kingman;
    return s;
}

LambdaSpec LambdaSpec::from_table(std::vector<std::pair<double, double>> nodes,
                                  double kingman) {
    if (nodes.size() < 2) throw std::invalid_argument("lambda table: need >= 2 nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(nodes[i].first > 0.0 && nodes[i].first < 1.0))
            throw std::invalid_argument("lambda table: nodes must lie in (0,1)");
        if (nodes[i].second < 0.0)
            throw std::invalid_argument("lambda table: density must be >= 0");
        if (i > 0 && !(nodes[i].first > nodes[i - 1].first))
            throw std::invalid_argument("lambda table: nodes must increase");
    }
    LambdaSpec s;
    s.kind_ = Kind::Table;
    s.table_ = std::move(nodes);
    s.kingman_ = kingman;
    return s;
}

bool LambdaSpec::has_continuous() const {
    return kind_ != Kind::None && lo_ < hi_ && continuous_mass() > 0.0;
}

double LambdaSpec::density(double zeta) const {
    if (zeta <= lo_ || zeta > hi_ || zeta <= 0.0 || zeta >= 1.0) return 0.0;
    switch (kind_) {
    case Kind::Beta:
        return beta_.c * std::pow(zeta, 1.0 - beta_.beta) * std::pow(1.0 - zeta, beta_.beta - 1.0);
    case Kind::Table: {
        if (zeta <= table_.front().first || zeta >= table_.back().first) {
            if (zeta == table_.front().first) return table_.front().second;
            if (zeta < table_.front().first || zeta > table_.back().first) return 0.0;
            return table_.back().second;
        }
        auto it = std::lower_bound(table_.begin(), table_.end(), zeta,
                                   [](const auto& n, double z) { return n.first < z; });
        auto prev = it - 1;
        double t = (zeta - prev->first) / (it->first - prev->first);
        return prev->second + t * (it->second - prev->second);
    }
    default:
        return 0.0;
    }
}

LambdaSpec LambdaSpec::restricted(double lo, double hi) const {
    LambdaSpec s = *this;
    s.lo_ = std::max(lo_, lo);
    s.hi_ = std::min(hi_, hi);
    if (s.kind_ == Kind::Atoms) {
        std::vector<LambdaAtom> kept;
        for (const auto& a : atoms_)
            if (a.zeta > s.lo_ && a.zeta <= s.hi_) kept.push_back(a);
        s.atoms_ = std::move(kept);
        if (s.atoms_.empty()) s.kind_ = Kind::None;
    }
    if (s.lo_ >= s.hi_) s.kind_ = Kind::None;
    return s;
}

double LambdaSpec::integrate_lambda(const std::function<double(double)>& g,
                                    double rel_tol) const {
    switch (kind_) {
    case Kind::None:
        return 0.0;
    case Kind::Atoms: {
        double sum = 0.0;
        for (const auto& a : atoms_)
            if (a.zeta > lo_ && a.zeta <= hi_) sum += g(a.zeta) * a.mass;
        return sum;
    }
    default:
        return integrate([&](double z) { return g(z) * density(z); },
                         std::max(lo_, 0.0), std::min(hi_, 1.0), rel_tol);
    }
}

double LambdaSpec::integrate_rate(const std::function<double(double)>& g,
                                  double rel_tol) const {
    return integrate_lambda([&](double z) { return g(z) / (z * z); }, rel_tol);
}

double LambdaSpec::continuous_mass() const {
    if (kind_ == Kind::None) return 0.0;
    return integrate_lambda([](double) { return 1.0; });
}

LambdaSpec truncate(const LambdaSpec& spec, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("truncate: eps out of range");
    return spec.restricted(eps, 0.5);
}

double merger_rate(int j, int i, const LambdaSpec& spec) {
    if (i < 2 || i > j) throw std::domain_error("merger_rate: need 2 <= i <= j");
    if (spec.kind() == LambdaSpec::Kind::Beta) {
        const auto& bp = spec.beta_params();
        double a = static_cast<double>(i) - bp.beta;
        double b = static_cast<double>(j - i) + bp.beta;
        double full = bp.c * beta_function(a, b);
        double w = regularized_incomplete_beta(a, b, std::min(spec.window_hi(), 1.0)) -
                   regularized_incomplete_beta(a, b, std::max(spec.window_lo(), 0.0));
        return full * w;
    }
    return spec.integrate_lambda([&](double z) {
        return std::pow(z, i - 2) * std::pow(1.0 - z, j - i);
    });
}

double total_jump_intensity(const LambdaSpec& spec) {
    if (spec.kind() == LambdaSpec::Kind::Beta && spec.window_lo() <= 0.0)
        throw DivergenceError("total_jump_intensity: zeta^-2 Lambda is infinite; truncate first");
    return spec.integrate_rate([](double) { return 1.0; });
}

double log_jump_compensator(const LambdaSpec& spec) {
    if (spec.kind() == LambdaSpec::Kind::Beta && spec.window_lo() <= 0.0 &&
        spec.beta_params().beta >= 1.0)
        throw DivergenceError("log_jump_compensator: integral diverges; truncate first");
    auto clipped = spec.restricted(0.0, 0.5);
    return clipped.integrate_rate(jump_size);
}

double kappa_hat(const SMHParams& params) {
    return params.kappa - log_jump_compensator(params.lambda);
}

double log_jump_ratio(double zeta) {
    if (zeta < 1e-4) return 1.0 + zeta * (0.5 + zeta / 3.0);
    return -std::log1p(-zeta) / zeta;
}

LevyTriplet levy_triplet(const SMHParams& params) {
    LevyTriplet t;
    t.drift = params.kappa - 0.5 * params.sigma * params.sigma;
    t.gaussian_sigma = params.sigma;
    t.jumps = params.lambda;
    return t;
}

std::complex<double> levy_exponent(double theta, const LevyTriplet& triplet) {
    double s2 = triplet.gaussian_sigma * triplet.gaussian_sigma;
    std::complex<double> psi(0.5 * s2 * theta * theta, -triplet.drift * theta);
    if (triplet.jumps.has_continuous()) {
        // the zeta^-2 weight is folded into the integrands so that the
        // O(zeta^2) cancellations near zero stay finite
        auto below = triplet.jumps.restricted(0.0, 0.5);
        auto above = triplet.jumps.restricted(0.5, 1.0);
        double re = below.integrate_lambda([&](double z) {
            if (z < 1e-4) {
                double r = theta * log_jump_ratio(z);
                return 0.5 * r * r;
            }
            return one_minus_cos(theta * jump_size(z)) / (z * z);
        });
        re += above.integrate_lambda(
            [&](double z) { return one_minus_cos(theta * jump_size(z)) / (z * z); });
        double im = below.integrate_lambda([&](double z) {
            if (z < 1e-4) {
                double r = log_jump_ratio(z);
                return theta * theta * theta * jump_size(z) * r * r / 6.0;
            }
            return x_minus_sin(theta * jump_size(z)) / (z * z);
        });
        im += above.integrate_lambda(
            [&](double z) { return -std::sin(theta * jump_size(z)) / (z * z); });
        psi += std::complex<double>(re, im);
    }
    return psi;
}

ZetaSampler::ZetaSampler(const LambdaSpec& spec, int weight_exponent) {
    auto weight = [weight_exponent](double z) { return std::pow(z, weight_exponent); };
    if (spec.kind() == LambdaSpec::Kind::None) {
        total_ = 0.0;
        return;
    }
    if (spec.kind() == LambdaSpec::Kind::Atoms) {
        discrete_ = true;
        for (const auto& a : spec.atoms()) {
            if (!(a.zeta > spec.window_lo() && a.zeta <= spec.window_hi())) continue;
            total_ += a.mass * weight(a.zeta);
            values_.push_back(a.zeta);
            cdf_.push_back(total_);
        }
        return;
    }
    // continuous: geometric cell grid with 5-point Gauss-Legendre per cell
    double lo = std::max(spec.window_lo(), 1e-14);
    double hi = std::min(spec.window_hi(), 1.0 - 1e-14);
    if (!(lo < hi)) { total_ = 0.0; return; }
    if (weight_exponent < 0 && spec.window_lo() <= 0.0 &&
        spec.kind() == LambdaSpec::Kind::Beta)
        throw DivergenceError("ZetaSampler: infinite intensity; truncate first");
    const std::size_t cells = 4096;
    static const double gx[5] = { -0.9061798459386640, -0.5384693101056831, 0.0,
                                  0.5384693101056831, 0.9061798459386640 };
    static const double gw[5] = { 0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891 };
    double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(cells));
    values_.resize(cells + 1);
    cdf_.resize(cells);
    values_[0] = lo;
    for (std::size_t c = 0; c < cells; ++c) {
        double a = values_[c];
        double b = (c + 1 == cells) ? hi : a * ratio;
        values_[c + 1] = b;
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double m = 0.0;
        for (int k = 0; k < 5; ++k) {
            double z = mid + half * gx[k];
            m += gw[k] * spec.density(z) * weight(z);
        }
        total_ += m * half;
        cdf_[c] = total_;
    }
}

double ZetaSampler::sample(Rng& rng) const {
    if (empty()) throw std::logic_error("ZetaSampler: empty support");
    double u = uniform01(rng) * total_;
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cdf_[mid] < u) lo = mid + 1; else hi = mid;
    }
    if (discrete_) return values_[lo];
    double prev = lo == 0 ? 0.0 : cdf_[lo - 1];
    double frac = (u - prev) / (cdf_[lo] - prev);
    return values_[lo] + frac * (values_[lo + 1] - values_[lo]);
}

} // namespace lamperti
