#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lamperti/measure.hpp"
#include "lamperti/rng.hpp"
#include "lamperti/test_function.hpp"
#include "test_util.hpp"

using namespace lamperti;

TEST_CASE("canonical form merges duplicates and ignores order") {
    DiscreteMeasure a = make_measure({ { 2, 1.0 }, { 1, 0.5 }, { 2, 2.0 }, { 3, 0.0 } });
    DiscreteMeasure b = make_measure({ { 1, 0.5 }, { 2, 3.0 } });
    CHECK(a == b);
    CHECK(a.total_mass() == doctest::Approx(3.5));
    CHECK(a.size() == 2);
    CHECK_THROWS_AS(make_measure({ { 0, -1.0 } }), std::invalid_argument);
}

TEST_CASE("log_polar examples") {
    auto [rho, xi] = log_polar(make_measure({ { 0, 2.0 }, { 1, 2.0 } }));
    CHECK(xi == doctest::Approx(std::log(4.0)));
    CHECK(rho.atoms()[0].mass == doctest::Approx(0.5));
    CHECK(rho.atoms()[1].mass == doctest::Approx(0.5));

    auto [rho1, xi1] = log_polar(make_measure({ { 0, 1.0 } }));
    CHECK(xi1 == doctest::Approx(0.0));
    CHECK(rho1.atoms()[0].mass == doctest::Approx(1.0));

    CHECK_THROWS_AS(log_polar(DiscreteMeasure()), ZeroMeasureError);
}

TEST_CASE("inverse_log_polar examples and round trip") {
    ProbabilityMeasure rho = normalize(make_measure({ { 0, 1.0 } }));
    CHECK(inverse_log_polar(rho, 0.0) == make_measure({ { 0, 1.0 } }));

    ProbabilityMeasure half = normalize(make_measure({ { 0, 1.0 }, { 1, 1.0 } }));
    DiscreteMeasure out = inverse_log_polar(half, std::log(4.0));
    CHECK(out.total_mass() == doctest::Approx(4.0));
    CHECK(out.mass_at(TypePoint{ 0 }) == doctest::Approx(2.0));

    ProbabilityMeasure skew = normalize(make_measure({ { 0, 1.0 }, { 1, 3.0 } }));
    DiscreteMeasure scaled = inverse_log_polar(skew, std::log(2.0));
    CHECK(scaled.mass_at(TypePoint{ 0 }) == doctest::Approx(0.5));
    CHECK(scaled.mass_at(TypePoint{ 1 }) == doctest::Approx(1.5));

    // round trips both ways on random measures
    Rng rng = make_stream(7, 1);
    for (int i = 0; i < 50; ++i) {
        std::vector<Atom> atoms;
        std::size_t n = 1 + uniform_index(rng, 5);
        for (std::size_t k = 0; k < n; ++k)
            atoms.push_back(Atom{ TypePoint{ static_cast<std::uint32_t>(k) },
                                  0.1 + uniform01(rng) });
        DiscreteMeasure mu{ std::vector<Atom>(atoms) };
        auto [rho_i, xi_i] = log_polar(mu);
        DiscreteMeasure back = inverse_log_polar(rho_i, xi_i);
        REQUIRE(back.size() == mu.size());
        for (std::size_t k = 0; k < mu.size(); ++k)
            CHECK(back.atoms()[k].mass ==
                  doctest::Approx(mu.atoms()[k].mass).epsilon(1e-12));
    }
}

TEST_CASE("add_scaled_atom examples") {
    DiscreteMeasure nu = make_measure({ { 0, 1.0 } });
    DiscreteMeasure j1 = add_scaled_atom(nu, TypePoint{ 1 }, 0.5);
    CHECK(j1 == make_measure({ { 0, 1.0 }, { 1, 1.0 } }));

    DiscreteMeasure j2 = add_scaled_atom(make_measure({ { 0, 2.0 } }), TypePoint{ 0 },
                                         1.0 / 3.0);
    CHECK(j2.total_mass() == doctest::Approx(3.0));
    CHECK(j2.size() == 1);

    // normalized view equals (1-zeta) rho + zeta delta_a
    DiscreteMeasure nu2 = make_measure({ { 0, 1.0 }, { 1, 1.0 } });
    DiscreteMeasure j3 = add_scaled_atom(nu2, TypePoint{ 2 }, 0.25);
    ProbabilityMeasure rho3 = normalize(j3);
    CHECK(rho3.measure().mass_at(TypePoint{ 0 }) == doctest::Approx(0.375));
    CHECK(rho3.measure().mass_at(TypePoint{ 1 }) == doctest::Approx(0.375));
    CHECK(rho3.measure().mass_at(TypePoint{ 2 }) == doctest::Approx(0.25));

    CHECK_THROWS_AS(add_scaled_atom(nu, TypePoint{ 1 }, 0.0), std::domain_error);
    CHECK_THROWS_AS(add_scaled_atom(nu, TypePoint{ 1 }, 1.0), std::domain_error);
}

TEST_CASE("normalized jump identity holds for random zeta") {
    Rng rng = make_stream(11, 2);
    for (int i = 0; i < 100; ++i) {
        DiscreteMeasure nu = make_measure({ { 0, 0.3 }, { 1, 1.2 }, { 2, 0.5 } });
        double zeta = 0.01 + 0.98 * uniform01(rng);
        DiscreteMeasure jumped = add_scaled_atom(nu, TypePoint{ 1 }, zeta);
        CHECK(jumped.total_mass() ==
              doctest::Approx(nu.total_mass() / (1.0 - zeta)).epsilon(1e-12));
        ProbabilityMeasure rho = normalize(nu);
        ProbabilityMeasure after = normalize(jumped);
        for (const auto& atom : rho.atoms()) {
            double expected = (1.0 - zeta) * atom.mass +
                              (atom.location == TypePoint{ 1 } ? zeta : 0.0);
            CHECK(after.measure().mass_at(atom.location) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("bump function shape and derivatives") {
    BumpFunction h(2.0, 1.0);
    CHECK(h.value(2.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(h.value(0.0) == 0.0);
    CHECK(h.value(1.0) == 0.0);
    CHECK(h.value(3.1) == 0.0);
    CHECK_THROWS_AS(BumpFunction(1.0, 1.5), std::invalid_argument);

    // finite-difference check of the closed-form derivatives
    for (double x : { 1.3, 1.9, 2.4, 2.9 }) {
        double eps = 1e-6;
        double fd1 = (h.value(x + eps) - h.value(x - eps)) / (2.0 * eps);
        double fd2 = (h.value(x + eps) - 2.0 * h.value(x) + h.value(x - eps)) / (eps * eps);
        CHECK(h.d1(x) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(h.d2(x) == doctest::Approx(fd2).epsilon(1e-4));
    }
}

TEST_CASE("phi_pi identification") {
    // phi(a1,a2,a3) = f(a1) g(a2) k(a3) with distinguishable factors
    auto f = [](TypePoint a) { return 1.0 + a.label; };
    auto g = [](TypePoint a) { return 1.0 / (2.0 + a.label); };
    auto k = [](TypePoint a) { return std::cos(static_cast<double>(a.label)); };
    Phi phi(3,
            [&](const std::vector<TypePoint>& a) { return f(a[0]) * g(a[1]) * k(a[2]); },
            10.0);

    Partition pi = Partition::from_blocks(3, { { 1, 3 }, { 2 } });
    Phi composed = phi_pi(phi, pi);
    CHECK(composed.arity() == 2);
    std::vector<TypePoint> args = { TypePoint{ 4 }, TypePoint{ 7 } };
    CHECK(composed(args) == doctest::Approx(f(args[0]) * g(args[1]) * k(args[0])));

    Phi same = phi_pi(phi, Partition(3));
    std::vector<TypePoint> xyz = { TypePoint{ 1 }, TypePoint{ 2 }, TypePoint{ 3 } };
    CHECK(same(xyz) == doctest::Approx(phi(xyz)));

    Phi merged = phi_pi(phi, Partition::one_block(3));
    std::vector<TypePoint> one = { TypePoint{ 5 } };
    std::vector<TypePoint> rep = { TypePoint{ 5 }, TypePoint{ 5 }, TypePoint{ 5 } };
    CHECK(merged(one) == doctest::Approx(phi(rep)));
}

TEST_CASE("monomial examples") {
    ProbabilityMeasure uniform2 = normalize(make_measure({ { 0, 1.0 }, { 1, 1.0 } }));
    CHECK(monomial(Phi::constant(3), uniform2) == doctest::Approx(1.0));
    CHECK(monomial(Phi::all_equal(2), uniform2) == doctest::Approx(0.5));

    ProbabilityMeasure skew = normalize(make_measure({ { 0, 0.25 }, { 1, 0.75 } }));
    // brute force over the 4 tuples: 0.25^2 + 0.75^2
    CHECK(monomial(Phi::all_equal(2), skew) == doctest::Approx(0.625));

    CHECK_THROWS_AS(monomial(Phi::all_equal(30), uniform2, 100), ResourceError);
    auto [mc, se] = monomial_mc(Phi::all_equal(2), skew, 200000, 5);
    CHECK(std::abs(mc - 0.625) < 4.0 * se);
}

TEST_CASE("monomial lifting identity <phi_pi, rho^#pi> = <phi_pi lift, rho^p>") {
    Rng rng = make_stream(3, 9);
    ProbabilityMeasure rho = normalize(make_measure({ { 0, 0.2 }, { 1, 0.5 }, { 2, 0.3 } }));
    for (int i = 0; i < 20; ++i) {
        std::size_t p = 2 + uniform_index(rng, 3);
        std::vector<std::uint32_t> labels(p);
        for (std::size_t k = 1; k < p; ++k)
            labels[k] = static_cast<std::uint32_t>(uniform_index(rng, k + 1));
        Partition pi{ labels };
        Phi phi = Phi::all_equal(p);
        Phi composed = phi_pi(phi, pi);
        double lhs = monomial(composed, rho);
        // lift back to arity p through the partition labels
        // view phi_pi as a p-variable function through one representative per
        // block; the unused coordinates marginalize out against rho
        Phi lifted(p,
                   [&](const std::vector<TypePoint>& a) {
                       std::vector<TypePoint> blocks(pi.num_blocks());
                       for (std::size_t j = 0; j < p; ++j) blocks[pi.block_of(j)] = a[j];
                       return composed(blocks);
                   },
                   composed.sup_bound());
        double rhs = monomial(lifted, rho);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("eval_G examples") {
    BumpFunction h(2.0, 1.0);
    DiscreteMeasure nu = make_measure({ { 0, 1.0 }, { 1, 1.0 } });

    TestFunction tf_one{ 2, Phi::constant(2), h };
    Partition pi(2);
    double z = 1.0;  // |nu| z = 2 at the bump center
    CHECK(eval_G(tf_one, nu, pi, z) == doctest::Approx(h.value(2.0)));

    CHECK(eval_G(tf_one, nu, pi, 10.0) == 0.0);  // outside the support

    TestFunction tf_eq{ 2, Phi::all_equal(2), h };
    CHECK(eval_G(tf_eq, nu, pi, z) == doctest::Approx(std::exp(-1.0) / 2.0));

    CHECK_THROWS_AS(eval_G(tf_eq, DiscreteMeasure(), pi, 1.0), ZeroMeasureError);
}
