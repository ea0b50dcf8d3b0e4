#include "lamperti/duality.hpp"

#include <cmath>

#include "lamperti/dual.hpp"
#include "lamperti/ensemble.hpp"
#include "lamperti/stats.hpp"

namespace lamperti {

namespace {

constexpr std::uint64_t kLhsTag = 0x10f5;
constexpr std::uint64_t kRhsTag = 0x20f5;

struct StatAcc {
    RunningStat stat;
    void merge(const StatAcc& o) { stat.merge(o.stat); }
};

} // namespace

DualityReport run_duality(const DualityExperiment& exp, unsigned threads) {
    PopulationScenario scn;
    scn.params = exp.params;
    scn.nu0 = exp.nu0;
    scn.T = exp.T;
    scn.dt = exp.T;
    scn.eps_trunc = exp.eps_trunc;
    scn.n_particles = exp.n_particles;

    // sigma = 0: exact measure-valued dynamics, standard monomial evaluation.
    // sigma > 0: Moran particles; both sides evaluated through U-statistics
    // over distinct particles, the convention under which the particle system
    // is exactly dual to the coalescent at any particle count.
    bool use_u = exp.params.sigma > 0.0;
    double nu0_mass = exp.nu0.total_mass();
    auto counts0 = round_to_counts(normalize(exp.nu0), exp.n_particles);

    StatAcc lhs = run_replicas<StatAcc>(exp.replicas, threads, [&](std::size_t r, StatAcc& acc) {
        Rng rng = make_stream(exp.seed, kLhsTag, r);
        if (!use_u) {
            DiscreteMeasure nu_t = simulate_smh_terminal(scn, rng);
            acc.stat.add(eval_G(exp.tf, nu_t, exp.pi0, exp.z0));
            return;
        }
        SmhTerminal parts = simulate_smh_terminal_parts(scn, rng);
        double hx = exp.tf.h.value(std::exp(parts.xi) * exp.z0);
        if (hx == 0.0) {
            acc.stat.add(0.0);
            return;
        }
        std::vector<std::pair<TypePoint, std::size_t>> counts;
        double n = static_cast<double>(exp.n_particles);
        for (const auto& atom : parts.freq.atoms())
            counts.emplace_back(atom.location,
                                static_cast<std::size_t>(std::llround(atom.mass * n)));
        acc.stat.add(hx * u_statistic(phi_pi(exp.tf.phi, exp.pi0), counts));
    });
    StatAcc rhs = run_replicas<StatAcc>(exp.replicas, threads, [&](std::size_t r, StatAcc& acc) {
        Rng rng = make_stream(exp.seed, kRhsTag, r);
        DualResult res = simulate_dual(exp.tf.p, exp.pi0, exp.z0, exp.params, exp.T,
                                       exp.eps_trunc, exp.T, rng);
        if (!use_u) {
            acc.stat.add(eval_G(exp.tf, exp.nu0, res.final_state.pi,
                                std::exp(res.final_state.log_z)));
            return;
        }
        double hx = exp.tf.h.value(nu0_mass * std::exp(res.final_state.log_z));
        acc.stat.add(hx == 0.0 ? 0.0
                               : hx * u_statistic(phi_pi(exp.tf.phi, res.final_state.pi),
                                                  counts0));
    });

    DualityReport rep;
    rep.id = exp.id;
    rep.lhs_mean = lhs.stat.mean();
    rep.lhs_se = lhs.stat.std_err();
    rep.rhs_mean = rhs.stat.mean();
    rep.rhs_se = rhs.stat.std_err();
    rep.z = welch_z(lhs.stat, rhs.stat);
    rep.pass = std::abs(rep.z) < 3.0;
    return rep;
}

FvDualityReport run_fv_duality(const FvDualityExperiment& exp, unsigned threads) {
    Partition pi0(exp.p);

    // frequency side: kappa is irrelevant to the frequency marginal
    PopulationScenario scn;
    scn.params = exp.params;
    scn.params.kappa = 0.0;
    scn.nu0 = exp.rho0.measure();
    scn.T = exp.T;
    scn.dt = exp.T;
    scn.eps_trunc = exp.eps_trunc;
    scn.n_particles = exp.n_particles;

    StatAcc lhs = run_replicas<StatAcc>(exp.replicas, threads, [&](std::size_t r, StatAcc& acc) {
        Rng rng = make_stream(exp.seed, kLhsTag, r);
        DiscreteMeasure nu_t = simulate_smh_terminal(scn, rng);
        acc.stat.add(h_pi(exp.phi, pi0, nu_t));
    });

    SMHParams coal_params = exp.params;
    if (coal_params.lambda.kind() == LambdaSpec::Kind::Beta ||
        coal_params.lambda.kind() == LambdaSpec::Kind::Table)
        coal_params.lambda = truncate(coal_params.lambda, exp.eps_trunc);
    StatAcc rhs =
        run_replicas<StatAcc>(exp.rhs_replicas, threads, [&](std::size_t r, StatAcc& acc) {
            Rng rng = make_stream(exp.seed, kRhsTag, r);
            CoalescentPath path = simulate_coalescent(exp.p, coal_params, exp.T, rng);
            Partition pi_t = path.states.empty() ? pi0 : path.states.back();
            acc.stat.add(h_pi(exp.phi, pi_t, exp.rho0.measure()));
        });

    FvDualityReport rep;
    rep.id = exp.id;
    rep.lhs_mean = lhs.stat.mean();
    rep.lhs_se = lhs.stat.std_err();
    rep.rhs_mean = rhs.stat.mean();
    rep.rhs_se = rhs.stat.std_err();
    rep.z = welch_z(lhs.stat, rhs.stat);
    rep.pass = std::abs(rep.z) < 3.0;
    return rep;
}

double kingman_pair_duality_value(double r0, double sigma2, double t) {
    double decay = std::exp(-sigma2 * t);
    return decay * r0 + (1.0 - decay);
}

EquivalenceReport run_construction_equivalence(const PopulationScenario& scn,
                                               std::size_t replicas, std::uint64_t seed,
                                               unsigned threads) {
    Phi pair_eq = Phi::all_equal(2);
    Partition single2(2);
    BumpFunction bump(2.0 * scn.nu0.total_mass(), 1.5 * scn.nu0.total_mass());
    TestFunction tf{ 2, pair_eq, bump };
    Partition pi2(2);

    struct Acc {
        std::vector<RunningStat> stats;
        void merge(const Acc& o) {
            if (stats.empty()) { stats = o.stats; return; }
            for (std::size_t i = 0; i < stats.size(); ++i) stats[i].merge(o.stats[i]);
        }
    };
    auto evaluate = [&](const DiscreteMeasure& nu, Acc& acc) {
        if (acc.stats.empty()) acc.stats.resize(4);
        double mass = nu.total_mass();
        acc.stats[0].add(mass);
        acc.stats[1].add(mass * mass);
        acc.stats[2].add(h_pi(pair_eq, single2, nu));
        acc.stats[3].add(eval_G(tf, nu, pi2, 1.0));
    };

    Acc a = run_replicas<Acc>(replicas, threads, [&](std::size_t r, Acc& acc) {
        Rng rng = make_stream(seed, 0xa11aULL, r);
        evaluate(simulate_smh_terminal(scn, rng), acc);
    });
    Acc b = run_replicas<Acc>(replicas, threads, [&](std::size_t r, Acc& acc) {
        Rng rng = make_stream(seed, 0xb22bULL, r);
        evaluate(simulate_poissonian_terminal(scn, rng), acc);
    });

    EquivalenceReport rep;
    rep.id = "construction-equivalence";
    rep.functional_names = { "total_mass", "total_mass_sq", "pair_identity", "bump_G" };
    rep.pass = true;
    for (std::size_t i = 0; i < a.stats.size(); ++i) {
        rep.z_scores.push_back(welch_z(a.stats[i], b.stats[i]));
        if (std::abs(rep.z_scores.back()) >= 3.0) rep.pass = false;
    }
    return rep;
}

} // namespace lamperti
