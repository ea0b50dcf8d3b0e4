#ifndef LAMPERTI_STATS_HPP
#define LAMPERTI_STATS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace lamperti {

// Welford accumulator for mean / variance / standard error.
class RunningStat {
public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const RunningStat& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) { *this = o; return; }
        double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        double d = o.mean_ - mean_;
        mean_ = (na * mean_ + nb * o.mean_) / (na + nb);
        m2_ += o.m2_ + d * d * na * nb / (na + nb);
        n_ += o.n_;
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_dev() const { return std::sqrt(variance()); }
    double std_err() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Welch two-sample z score (independent samples, unequal variances).
inline double welch_z(const RunningStat& a, const RunningStat& b) {
    double se = std::sqrt(a.std_err() * a.std_err() + b.std_err() * b.std_err());
    if (se == 0.0) return a.mean() == b.mean() ? 0.0 : 1e9;
    return (a.mean() - b.mean()) / se;
}

// mean / SE of a complex-valued sample (SE of the complex mean as
// sqrt(Var(Re)+Var(Im))/sqrt(n)).
class ComplexStat {
public:
    void add(std::complex<double> v) { re_.add(v.real()); im_.add(v.imag()); }
    std::complex<double> mean() const { return { re_.mean(), im_.mean() }; }
    double std_err() const {
        return std::sqrt(re_.std_err() * re_.std_err() + im_.std_err() * im_.std_err());
    }
    std::size_t count() const { return re_.count(); }

private:
    RunningStat re_, im_;
};

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_p_value(double d, std::size_t na, std::size_t nb);

} // namespace lamperti

#endif
