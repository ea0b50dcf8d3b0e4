#include "lamperti/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lamperti/levy.hpp"
#include "lamperti/stats.hpp"

namespace lamperti {

namespace {

double jump_size(double zeta) { return -std::log1p(-zeta); }

LambdaSpec dual_jump_spec(const SMHParams& params, double eps_trunc) {
    const LambdaSpec& l = params.lambda;
    if (l.kind() == LambdaSpec::Kind::Beta || l.kind() == LambdaSpec::Kind::Table)
        return truncate(l, eps_trunc);
    return l;
}

} // namespace

DualResult simulate_dual(std::size_t p, const Partition& pi0, double z0,
                         const SMHParams& params, double T, double eps_trunc,
                         double dt, Rng& rng, bool record_path) {
    if (pi0.num_elements() != p) throw std::invalid_argument("simulate_dual: pi0 depth mismatch");
    if (!(z0 > 0.0)) throw std::invalid_argument("simulate_dual: z0 must be positive");

    LambdaSpec jspec = dual_jump_spec(params, eps_trunc);
    double rate = 0.0, compensator = 0.0;
    ZetaSampler sampler;
    if (jspec.has_continuous()) {
        rate = total_jump_intensity(jspec);
        compensator = log_jump_compensator(jspec);
        sampler = ZetaSampler(jspec, -2);
    }
    double sigma = params.sigma;
    double drift = params.kappa - 0.5 * sigma * sigma - compensator;
    double pair_rate = sigma * sigma;

    std::vector<std::pair<double, double>> atoms;
    if (rate > 0.0) {
        double t = exponential(rng, rate);
        while (t < T) {
            atoms.emplace_back(t, sampler.sample(rng));
            t += exponential(rng, rate);
        }
    }

    DualResult out;
    out.absorption_time = pi0.num_blocks() == 1 ? 0.0
                                                : std::numeric_limits<double>::infinity();
    Partition pi = pi0;
    double log_z = std::log(z0);
    double t = 0.0;
    std::size_t next_atom = 0;

    auto advance_to = [&](double s) {
        double h = s - t;
        if (h <= 0.0) return;
        double g = sigma > 0.0 ? gaussian(rng) : 0.0;
        log_z += drift * h + sigma * std::sqrt(h) * g;
        t = s;
    };
    auto record = [&](int kind) {
        if (record_path || kind != 0)
            out.records.push_back(DualRecord{ t, pi.num_blocks(), log_z, kind });
        if (pi.num_blocks() == 1 && std::isinf(out.absorption_time))
            out.absorption_time = t;
    };

    record(0);
    std::size_t grid_steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    for (std::size_t g = 1; g <= grid_steps; ++g) {
        double tg = std::min(static_cast<double>(g) * dt, T);
        while (true) {
            double b = static_cast<double>(pi.num_blocks());
            double k_rate = pair_rate * 0.5 * b * (b - 1.0);
            double t_king = k_rate > 0.0 ? t + exponential(rng, k_rate)
                                         : std::numeric_limits<double>::infinity();
            double t_atom = next_atom < atoms.size() ? atoms[next_atom].first
                                                     : std::numeric_limits<double>::infinity();
            double t_next = std::min(t_king, t_atom);
            if (t_next > tg) break;
            advance_to(t_next);
            if (t_atom <= t_king) {
                double zeta = atoms[next_atom].second;
                ++next_atom;
                log_z += jump_size(zeta);  // Z jumps at every atom
                pi = paintbox_merge(pi, zeta, rng).first;
                record(1);
            } else {
                std::uint32_t b1 = static_cast<std::uint32_t>(uniform_index(rng, pi.num_blocks()));
                std::uint32_t b2 = static_cast<std::uint32_t>(uniform_index(rng, pi.num_blocks() - 1));
                if (b2 >= b1) ++b2;
                pi = pi.coagulate({ std::min(b1, b2), std::max(b1, b2) });
                record(2);
            }
        }
        advance_to(tg);
        record(0);
    }
    out.final_state = DualState{ pi, log_z };
    return out;
}

std::vector<double> nested_sup_distance(std::size_t p, const SMHParams& params,
                                        double T, const std::vector<double>& eps_levels,
                                        Rng& rng) {
    if (eps_levels.size() < 2)
        throw std::invalid_argument("nested_sup_distance: need at least two levels");
    for (std::size_t k = 1; k < eps_levels.size(); ++k)
        if (!(eps_levels[k] < eps_levels[k - 1]))
            throw std::invalid_argument("nested_sup_distance: levels must decrease");

    struct SharedAtom {
        double time;
        double zeta;
        std::uint64_t coin_seed;
        std::size_t level;  // first level index that sees this atom
    };

    // window streams: level k introduces atoms with zeta in (eps_k, eps_{k-1}]
    std::vector<SharedAtom> atoms;
    for (std::size_t k = 0; k < eps_levels.size(); ++k) {
        double hi = k == 0 ? 0.5 : eps_levels[k - 1];
        LambdaSpec window = params.lambda.restricted(eps_levels[k], hi);
        if (!window.has_continuous()) continue;
        double rate = total_jump_intensity(window);
        ZetaSampler sampler(window, -2);
        double t = exponential(rng, rate);
        while (t < T) {
            atoms.push_back(SharedAtom{ t, sampler.sample(rng), rng(), k });
            t += exponential(rng, rate);
        }
    }
    // shared pairwise-merger stream on block-index pairs
    double pair_rate = params.sigma * params.sigma;
    if (pair_rate > 0.0) {
        double total = pair_rate * 0.5 * static_cast<double>(p) * static_cast<double>(p - 1);
        double t = exponential(rng, total);
        while (t < T) {
            atoms.push_back(SharedAtom{ t, -1.0, rng(), SIZE_MAX });  // kingman marker
            t += exponential(rng, total);
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const SharedAtom& a, const SharedAtom& b) { return a.time < b.time; });

    std::vector<Partition> pis(eps_levels.size(), Partition(p));
    std::vector<double> sup_d(eps_levels.size() - 1, 0.0);
    auto update_sup = [&]() {
        for (std::size_t k = 0; k + 1 < pis.size(); ++k)
            sup_d[k] = std::max(sup_d[k], partition_distance(pis[k], pis[k + 1]));
    };
    for (const auto& atom : atoms) {
        if (atom.level == SIZE_MAX) {
            // same index pair applied at every level
            Rng coin(atom.coin_seed);
            std::size_t i = uniform_index(coin, p);
            std::size_t j = uniform_index(coin, p - 1);
            if (j >= i) ++j;
            std::uint32_t lo = static_cast<std::uint32_t>(std::min(i, j));
            std::uint32_t hi = static_cast<std::uint32_t>(std::max(i, j));
            for (auto& pi : pis)
                if (hi < pi.num_blocks()) pi = pi.coagulate({ lo, hi });
        } else {
            // participation coins shared by block index across levels
            Rng coin_master(atom.coin_seed);
            std::vector<double> coins;
            for (std::size_t k = atom.level; k < pis.size(); ++k) {
                while (coins.size() < pis[k].num_blocks()) coins.push_back(uniform01(coin_master));
                std::vector<std::uint32_t> flagged;
                for (std::uint32_t b = 0; b < pis[k].num_blocks(); ++b)
                    if (coins[b] < atom.zeta) flagged.push_back(b);
                if (flagged.size() >= 2) pis[k] = pis[k].coagulate(flagged);
            }
        }
        update_sup();
    }
    return sup_d;
}

DualMarginalReport dual_marginal_check(std::size_t p, const SMHParams& params,
                                       double T, double eps_trunc,
                                       std::size_t replicas, std::uint64_t seed,
                                       const std::vector<double>& thetas) {
    DualMarginalReport rep;
    std::vector<double> dual_abs, coal_abs;
    std::vector<ComplexStat> cf(thetas.size());
    Partition pi0(p);
    SMHParams trunc_params = params;
    trunc_params.lambda = dual_jump_spec(params, eps_trunc);
    for (std::size_t r = 0; r < replicas; ++r) {
        Rng rng = make_stream(seed, 0xd1a1ULL, r);
        DualResult res = simulate_dual(p, pi0, 1.0, params, T, eps_trunc, T, rng);
        if (std::isfinite(res.absorption_time)) dual_abs.push_back(res.absorption_time);
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            double x = thetas[i] * res.final_state.log_z;
            cf[i].add({ std::cos(x), std::sin(x) });
        }
        Rng rng2 = make_stream(seed, 0xc0a1ULL, r);
        CoalescentPath path = simulate_coalescent(p, trunc_params, T, rng2);
        double at = path.absorption_time();
        if (std::isfinite(at)) coal_abs.push_back(at);
    }
    if (dual_abs.size() > 10 && coal_abs.size() > 10) {
        double d = ks_statistic(dual_abs, coal_abs);
        rep.ks_p_absorption = ks_p_value(d, dual_abs.size(), coal_abs.size());
    }
    LevyTriplet triplet = levy_triplet(trunc_params);
    rep.pass = rep.ks_p_absorption > 0.01;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        std::complex<double> predicted = std::exp(-T * levy_exponent(thetas[i], triplet));
        rep.cf_error.push_back(std::abs(cf[i].mean() - predicted));
        rep.cf_tolerance.push_back(3.0 * cf[i].std_err() + 0.01);
        if (rep.cf_error.back() > rep.cf_tolerance.back()) rep.pass = false;
    }
    return rep;
}

} // namespace lamperti
