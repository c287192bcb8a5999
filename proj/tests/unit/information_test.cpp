#include <doctest.h>

#include <cmath>
#include <random>

#include "epscap/information.hpp"
#include "test_oracles.hpp"

using namespace epscap;
using oracles::h2;

TEST_CASE("mutual information closed forms") {
    const Distribution u2 = Distribution::uniform(2);
    CHECK(mutual_information(u2, Dmc::bsc(0.5)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mutual_information(u2, Dmc::identity(2)) == doctest::Approx(1.0));
    // 1 - h2(0.1) = 0.5310044064107188
    CHECK(mutual_information(u2, Dmc::bsc(0.1)) ==
          doctest::Approx(1.0 - h2(0.1)).epsilon(1e-12));
    CHECK(mutual_information(u2, Dmc::bsc(0.1)) == doctest::Approx(0.5310044064107188));

    CHECK_THROWS_AS(mutual_information(Distribution::uniform(3), Dmc::bsc(0.1)),
                    std::invalid_argument);
}

TEST_CASE("mutual information is concave in the input law") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Dmc w = oracles::random_dmc(rng, 3, 3);
        const Distribution p1 = oracles::random_distribution(rng, 3);
        const Distribution p2 = oracles::random_distribution(rng, 3);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double lam = unif(rng);
        std::vector<double> mix(3);
        for (std::size_t i = 0; i < 3; ++i) mix[i] = lam * p1[i] + (1.0 - lam) * p2[i];
        const double lhs = mutual_information(Distribution(mix), w);
        const double rhs = lam * mutual_information(p1, w) + (1.0 - lam) * mutual_information(p2, w);
        CHECK(lhs >= rhs - 1e-9);
    }
}

TEST_CASE("component capacity examples") {
    SUBCASE("bsc(0.1): uniform optimal, value 1 - h2(0.1)") {
        const ComponentCapacity cc = component_capacity(Dmc::bsc(0.1));
        CHECK(cc.converged);
        CHECK(cc.bits == doctest::Approx(1.0 - h2(0.1)).epsilon(1e-9));
        CHECK(cc.input[0] == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("identity 3x3: log2 3 at uniform") {
        const ComponentCapacity cc = component_capacity(Dmc::identity(3));
        CHECK(cc.converged);
        CHECK(cc.bits == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
        CHECK(cc.input[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    }
    SUBCASE("column-constant channel is useless") {
        const Dmc flat(2, 3, {0.2, 0.3, 0.5, 0.2, 0.3, 0.5});
        const ComponentCapacity cc = component_capacity(flat);
        CHECK(cc.bits == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("component capacity dominates random input laws") {
    std::mt19937_64 rng(11);
    for (int ch = 0; ch < 4; ++ch) {
        const Dmc w = oracles::random_dmc(rng, 3, 4);
        ComponentCapacityOptions opts;
        opts.tol = 1e-10;
        const ComponentCapacity cc = component_capacity(w, opts);
        for (int trial = 0; trial < 100; ++trial) {
            const Distribution p = oracles::random_distribution(rng, 3);
            CHECK(cc.bits >= mutual_information(p, w) - 1e-9);
        }
        CHECK(cc.upper_bound_bits - cc.bits <= 1e-9);
    }
}

TEST_CASE("information density table") {
    const Distribution u2 = Distribution::uniform(2);
    SUBCASE("deterministic channel: one atom at +1 bit") {
        const InformationDensityTable t(u2, Dmc::bsc(0.0));
        CHECK(t.entries().size() == 2);  // (0,0) and (1,1)
        for (const auto& e : t.entries()) CHECK(e.value_bits == doctest::Approx(1.0));
    }
    SUBCASE("useless channel: value 0 with probability 1") {
        const InformationDensityTable t(u2, Dmc::bsc(0.5));
        for (const auto& e : t.entries()) CHECK(e.value_bits == doctest::Approx(0.0));
    }
    SUBCASE("bsc(0.1): two values log2 1.8 and log2 0.2") {
        const InformationDensityTable t(u2, Dmc::bsc(0.1));
        double p_high = 0.0, p_low = 0.0;
        for (const auto& e : t.entries()) {
            if (e.value_bits > 0) {
                CHECK(e.value_bits == doctest::Approx(std::log2(1.8)));
                p_high += e.joint_prob;
            } else {
                CHECK(e.value_bits == doctest::Approx(std::log2(0.2)));
                p_low += e.joint_prob;
            }
        }
        CHECK(p_high == doctest::Approx(0.9));
        CHECK(p_low == doctest::Approx(0.1));
        CHECK(std::log2(1.8) == doctest::Approx(0.8479969065549501));
        CHECK(std::log2(0.2) == doctest::Approx(-2.321928094887362));
    }
}

TEST_CASE("density table mean equals mutual information, variance bounded") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const Dmc w = oracles::random_dmc(rng, 3, 3);
        const Distribution p = oracles::random_distribution(rng, 3, 0.01);
        const InformationDensityTable t(p, w);
        CHECK(t.mean_bits() == doctest::Approx(mutual_information(p, w)).epsilon(1e-9));
        const double bound = t.max_abs_value_bits() * t.max_abs_value_bits();
        CHECK(t.variance_bits2() <= bound + 1e-12);
        double joint = 0.0;
        for (const auto& e : t.entries()) joint += e.joint_prob;
        CHECK(joint == doctest::Approx(1.0).epsilon(1e-12));
    }
}
