#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lamperti/duality.hpp"
#include "lamperti/population.hpp"
#include "lamperti/stats.hpp"
#include "test_util.hpp"

using namespace lamperti;

TEST_CASE("pure drift: nu_t = e^{kappa t} nu_0 exactly") {
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 1.0, .sigma = 0.0, .lambda = {} };
    scn.nu0 = make_measure({ { 0, 1.0 }, { 1, 2.0 } });
    scn.T = 1.0;
    scn.dt = 0.25;
    scn.n_particles = 100;
    Rng rng = make_stream(61, 1);
    SmhMapResult res = simulate_smh_map(scn, rng);
    for (std::size_t i = 0; i < res.nu.size(); ++i)
        CHECK(res.nu.states[i].total_mass() ==
              doctest::Approx(3.0 * std::exp(res.nu.times[i])).epsilon(1e-12));

    Rng rng2 = make_stream(61, 1);
    MeasurePath pois = simulate_poissonian(scn, rng2);
    for (std::size_t i = 0; i < pois.size(); ++i)
        CHECK(pois.states[i].total_mass() ==
              doctest::Approx(3.0 * std::exp(pois.times[i])).epsilon(1e-12));
}

TEST_CASE("construction equivalence is pathwise for Lambda = 0 on shared streams") {
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = -0.3, .sigma = 1.0, .lambda = {} };
    scn.nu0 = make_measure({ { 0, 1.0 }, { 1, 1.0 } });
    scn.T = 0.5;
    scn.dt = 0.05;
    scn.n_particles = 50;
    Rng a = make_stream(61, 2);
    Rng b = make_stream(61, 2);
    SmhMapResult map_res = simulate_smh_map(scn, a);
    MeasurePath pois = simulate_poissonian(scn, b);
    REQUIRE(map_res.nu.size() == pois.size());
    for (std::size_t i = 0; i < pois.size(); ++i) {
        CHECK(map_res.nu.states[i].total_mass() ==
              doctest::Approx(pois.states[i].total_mass()).epsilon(1e-12));
        REQUIRE(map_res.nu.states[i].size() == pois.states[i].size());
    }
}

TEST_CASE("mass flow through jumps: |nu_t| = |nu_t-| / (1-zeta)") {
    // sigma = 0 and a single-atom spec: between jumps the drift is
    // deterministic, so the jump ratio is exactly 1/(1-zeta) = 2
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 0.0, .sigma = 0.0,
                            .lambda = LambdaSpec::from_atoms({ { 0.5, 1.0 } }) };
    scn.nu0 = make_measure({ { 0, 1.0 } });
    scn.T = 1.0;
    scn.dt = 1e-3;
    scn.n_particles = 200;
    Rng rng = make_stream(61, 3);
    SmhMapResult res = simulate_smh_map(scn, rng);
    double drift = -4.0 * std::log(2.0);  // kappa_hat for this spec
    int jumps_seen = 0;
    for (std::size_t i = 1; i < res.nu.size(); ++i) {
        double expected = res.nu.states[i - 1].total_mass() *
                          std::exp(drift * (res.nu.times[i] - res.nu.times[i - 1]));
        if (res.nu.jump[i]) {
            ++jumps_seen;
            CHECK(res.nu.states[i].total_mass() ==
                  doctest::Approx(expected * 2.0).epsilon(1e-12));
        } else {
            CHECK(res.nu.states[i].total_mass() ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(jumps_seen >= 1);
}

TEST_CASE("frequency jump is exactly (1-zeta) rho + zeta delta_a when sigma = 0") {
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 0.0, .sigma = 0.0,
                            .lambda = LambdaSpec::from_atoms({ { 0.3, 1.0 } }) };
    scn.nu0 = make_measure({ { 0, 1.0 }, { 1, 1.0 } });
    scn.T = 1.2;
    scn.dt = 1.2;
    scn.n_particles = 100;
    Rng rng = make_stream(61, 4);
    SmhMapResult res = simulate_smh_map(scn, rng);
    int jumps = 0;
    for (std::size_t i = 1; i < res.rho.size(); ++i) {
        if (!res.rho.jump[i]) continue;
        ++jumps;
        const DiscreteMeasure& before = res.rho.states[i - 1];
        const DiscreteMeasure& after = res.rho.states[i];
        // the target label gained zeta; every label shrank by (1-zeta)
        double gained = -1.0;
        for (const auto& atom : before.atoms()) {
            double post = after.mass_at(atom.location);
            double shrunk = 0.7 * atom.mass;
            if (std::abs(post - shrunk) > 1e-12) {
                CHECK(post == doctest::Approx(shrunk + 0.3).epsilon(1e-12));
                gained = post;
            }
        }
        CHECK(gained > 0.0);
    }
    CHECK(jumps >= 1);
}

TEST_CASE("Moran paintbox relabeling tracks the exact jump within sampling noise") {
    // sigma > 0 forces the particle representation; a single large-zeta atom
    // relabels a Binomial(N, zeta) subset
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 0.0, .sigma = 0.2,
                            .lambda = LambdaSpec::from_atoms({ { 0.4, 6.25 } }) };
    scn.nu0 = make_measure({ { 0, 1.0 }, { 1, 1.0 } });
    scn.T = 0.1;
    scn.dt = 0.1;
    scn.n_particles = 3000;
    RunningStat freq_change;
    for (int r = 0; r < 300; ++r) {
        Rng rng = make_stream(61, 4000 + r);
        SmhMapResult res = simulate_smh_map(scn, rng);
        for (std::size_t i = 1; i < res.rho.size(); ++i) {
            if (!res.rho.jump[i]) continue;
            const DiscreteMeasure& before = res.rho.states[i - 1];
            const DiscreteMeasure& after = res.rho.states[i];
            for (const auto& atom : before.atoms()) {
                double post = after.mass_at(atom.location);
                double expected_if_not_target = 0.6 * atom.mass;
                double dev = post - expected_if_not_target;
                if (dev < 0.2) freq_change.add(dev);  // non-target labels
            }
        }
    }
    REQUIRE(freq_change.count() > 50);
    // binomial relabeling noise has sd ~ sqrt(0.24/N) ~ 0.009; mean is 0
    CHECK(std::abs(freq_change.mean()) < 4.0 * freq_change.std_err());
}

TEST_CASE("compensated single-atom spec: total mass is a martingale") {
    // kappa such that drift + compensator + jump mean cancel:
    // kappa = compensator - int (e^s - 1) dr = 4 log 2 - 4
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 4.0 * std::log(2.0) - 4.0, .sigma = 0.0,
                            .lambda = LambdaSpec::from_atoms({ { 0.5, 1.0 } }) };
    scn.nu0 = make_measure({ { 0, 1.0 } });
    scn.T = 1.0;
    scn.dt = 1.0;
    scn.n_particles = 50;
    RunningStat mass;
    for (int r = 0; r < 20000; ++r) {
        Rng rng = make_stream(61, 100 + r);
        mass.add(simulate_smh_terminal(scn, rng).total_mass());
    }
    CHECK(std::abs(mass.mean() - 1.0) < 3.0 * mass.std_err());
}

TEST_CASE("heterozygosity relaxes at the pair-coalescence rate") {
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 0.0, .sigma = 1.0, .lambda = {} };
    scn.nu0 = make_measure({ { 0, 1.0 }, { 1, 1.0 } });
    scn.T = 0.5;
    scn.dt = 0.5;
    scn.n_particles = 500;
    Phi pair = Phi::all_equal(2);
    Partition singles(2);
    RunningStat stat;
    for (int r = 0; r < 3000; ++r) {
        Rng rng = make_stream(61, 300 + r);
        stat.add(h_pi(pair, singles, simulate_smh_terminal(scn, rng)));
    }
    double expected = kingman_pair_duality_value(0.5, 1.0, 0.5);
    CHECK(std::abs(stat.mean() - expected) < 3.0 * stat.std_err() + 2.0 / 500.0);
}

TEST_CASE("branching diffusion: martingale mean and pinned variance") {
    DiscreteMeasure mu0 = make_measure({ { 0, 0.6 }, { 1, 0.4 } });
    double sigma = 1.0, T = 0.5, dt = 1e-3;
    RunningStat mass;
    for (int r = 0; r < 20000; ++r) {
        Rng rng = make_stream(61, 500 + r);
        MeasurePath path = simulate_dw(mu0, sigma, T, dt, 30, rng);
        mass.add(path.states.back().total_mass());
    }
    CHECK(std::abs(mass.mean() - 1.0) < 3.0 * mass.std_err());
    // generator (sigma^2/2) x f'' gives Var = sigma^2 |mu_0| t
    double var_se = mass.variance() * std::sqrt(2.0 / mass.count());
    CHECK(std::abs(mass.variance() - sigma * sigma * 1.0 * T) < 3.0 * var_se + 2.0 * dt);

    Rng rng = make_stream(61, 5);
    MeasurePath frozen = simulate_dw(mu0, 0.0, 0.3, 0.05, 30, rng);
    for (const auto& m : frozen.states)
        CHECK(m.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("alpha = 0 self-similar population equals the homogeneous one") {
    PopulationScenario scn;
    scn.params = SMHParams{ .kappa = 0.2, .sigma = 0.5, .lambda = {} };
    scn.nu0 = make_measure({ { 0, 1.0 } });
    scn.T = 0.5;
    scn.dt = 0.1;
    scn.n_particles = 50;
    scn.alpha = 0.0;
    Rng a = make_stream(61, 6);
    Rng b = make_stream(61, 6);
    MeasurePath mu = simulate_ss_population(scn, a);
    SmhMapResult nu = simulate_smh_map(scn, b);
    REQUIRE(mu.size() == nu.nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(mu.times[i] == doctest::Approx(nu.nu.times[i]).epsilon(1e-12));
        CHECK(mu.states[i].total_mass() ==
              doctest::Approx(nu.nu.states[i].total_mass()).epsilon(1e-12));
    }
}

TEST_CASE("scenario validation flags coarse particle resolution") {
    PopulationScenario scn;
    scn.params.lambda = LambdaSpec::from_atoms({ { 0.01, 1.0 } });
    scn.nu0 = make_measure({ { 0, 1.0 } });
    scn.n_particles = 100;  // 10/zeta_min = 1000
    CHECK(!validate_scenario(scn).empty());
    scn.n_particles = 2000;
    CHECK(validate_scenario(scn).empty());
}
