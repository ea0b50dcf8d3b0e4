#include "lamperti/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lamperti {

Partition CoalescentPath::at(double t) const {
    Partition out = initial;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].time > t) break;
        out = states[i];
    }
    return out;
}

double CoalescentPath::absorption_time() const {
    if (initial.num_blocks() == 1) return 0.0;
    for (std::size_t i = 0; i < events.size(); ++i)
        if (states[i].num_blocks() == 1) return events[i].time;
    return std::numeric_limits<double>::infinity();
}

std::pair<Partition, std::vector<std::uint32_t>>
paintbox_merge(const Partition& pi, double zeta, Rng& rng) {
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::domain_error("paintbox_merge: zeta must lie in (0,1)");
    std::vector<std::uint32_t> flagged;
    for (std::uint32_t b = 0; b < pi.num_blocks(); ++b)
        if (uniform01(rng) < zeta) flagged.push_back(b);
    if (flagged.size() < 2) return { pi, flagged };
    return { pi.coagulate(flagged), flagged };
}

double effective_paintbox_probability(std::size_t j, double zeta) {
    if (j < 2) return 0.0;
    // sum_{k=2}^j C(j,k) zeta^k (1-zeta)^{j-k}: all terms positive
    double term = 0.5 * static_cast<double>(j) * static_cast<double>(j - 1) *
                  zeta * zeta * std::pow(1.0 - zeta, static_cast<double>(j - 2));
    double sum = term;
    for (std::size_t k = 3; k <= j; ++k) {
        term *= static_cast<double>(j - k + 1) / static_cast<double>(k) * zeta / (1.0 - zeta);
        sum += term;
    }
    return std::min(sum, 1.0);
}

namespace {

// participant count from Binom(j, zeta) conditioned on >= 2
std::size_t draw_participant_count(std::size_t j, double zeta, Rng& rng) {
    double term = 0.5 * static_cast<double>(j) * static_cast<double>(j - 1) *
                  zeta * zeta * std::pow(1.0 - zeta, static_cast<double>(j - 2));
    std::vector<double> cum(j - 1);
    double acc = term;
    cum[0] = acc;
    for (std::size_t k = 3; k <= j; ++k) {
        term *= static_cast<double>(j - k + 1) / static_cast<double>(k) * zeta / (1.0 - zeta);
        acc += term;
        cum[k - 2] = acc;
    }
    double u = uniform01(rng) * acc;
    for (std::size_t idx = 0; idx < cum.size(); ++idx)
        if (u <= cum[idx]) return idx + 2;
    return j;
}

std::vector<std::uint32_t> draw_block_subset(std::size_t j, std::size_t i, Rng& rng) {
    std::vector<std::uint32_t> pool(j);
    for (std::size_t b = 0; b < j; ++b) pool[b] = static_cast<std::uint32_t>(b);
    for (std::size_t k = 0; k < i; ++k)
        std::swap(pool[k], pool[k + uniform_index(rng, j - k)]);
    pool.resize(i);
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace

CoalescentPath simulate_coalescent(std::size_t p, const SMHParams& params, double T,
                                   Rng& rng) {
    if (p < 1) throw std::invalid_argument("simulate_coalescent: p must be >= 1");
    CoalescentPath path;
    path.initial = Partition(p);
    Partition pi = path.initial;

    double pair_rate = params.sigma * params.sigma + params.lambda.kingman();
    ZetaSampler proposals(params.lambda, 0);
    double lambda_mass = proposals.total();

    double t = 0.0;
    while (pi.num_blocks() > 1) {
        double j = static_cast<double>(pi.num_blocks());
        double pairs = 0.5 * j * (j - 1.0);
        double kingman_rate = pair_rate * pairs;
        double candidate_rate = pairs * lambda_mass;
        double total = kingman_rate + candidate_rate;
        if (total <= 0.0) break;
        t += exponential(rng, total);
        if (t > T) break;

        CoalescentEvent ev;
        ev.time = t;
        ev.blocks_before = pi.num_blocks();
        if (uniform01(rng) * total < kingman_rate) {
            ev.kind = CoalescentEvent::Kind::Pairwise;
            ev.participants = draw_block_subset(pi.num_blocks(), 2, rng);
        } else {
            double zeta = proposals.sample(rng);
            double accept = effective_paintbox_probability(pi.num_blocks(), zeta) /
                            (pairs * zeta * zeta);
            if (uniform01(rng) >= accept) continue;  // thinned candidate
            ev.kind = CoalescentEvent::Kind::Paintbox;
            ev.zeta = zeta;
            std::size_t i = draw_participant_count(pi.num_blocks(), zeta, rng);
            ev.participants = draw_block_subset(pi.num_blocks(), i, rng);
        }
        pi = pi.coagulate(ev.participants);
        ev.blocks_after = pi.num_blocks();
        path.events.push_back(std::move(ev));
        path.states.push_back(pi);
    }
    return path;
}

} // namespace lamperti
