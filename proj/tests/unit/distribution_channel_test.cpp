#include <doctest.h>

#include "epscap/channel.hpp"
#include "epscap/distribution.hpp"

using namespace epscap;

TEST_CASE("distribution validates and normalizes") {
    CHECK_THROWS_AS(Distribution({0.5, -0.1, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution({0.5, 0.4}), std::invalid_argument);  // sums to 0.9
    CHECK_THROWS_AS(Distribution(std::vector<double>{}), std::invalid_argument);

    // sum off by < 1e-12 is renormalized
    Distribution d({0.5, 0.5 + 4e-13});
    CHECK(d[0] + d[1] == doctest::Approx(1.0).epsilon(1e-15));

    const Distribution u = Distribution::uniform(4);
    CHECK(u[2] == doctest::Approx(0.25));
    const Distribution pm = Distribution::point_mass(3, 1);
    CHECK(pm[1] == 1.0);
    CHECK(pm[0] == 0.0);
}

TEST_CASE("distribution expectation and distance") {
    Distribution d({0.25, 0.75});
    std::vector<double> cost{0.0, 1.0};
    CHECK(d.expectation(cost) == doctest::Approx(0.75));
    CHECK(d.l1_distance(Distribution({0.75, 0.25})) == doctest::Approx(1.0));
}

TEST_CASE("dmc validates rows") {
    CHECK_THROWS_AS(Dmc(2, 2, {0.9, 0.2, 0.1, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS(Dmc(2, 2, {0.9, 0.1, 0.1}), std::invalid_argument);

    const Dmc bsc = Dmc::bsc(0.1);
    CHECK(bsc(0, 0) == doctest::Approx(0.9));
    CHECK(bsc(1, 0) == doctest::Approx(0.1));
    const Distribution q = bsc.output_law(Distribution({0.8, 0.2}));
    CHECK(q[0] == doctest::Approx(0.8 * 0.9 + 0.2 * 0.1));

    const Dmc id3 = Dmc::identity(3);
    CHECK(id3(2, 2) == 1.0);
    CHECK(id3(2, 0) == 0.0);
}

TEST_CASE("mixed channel invariants") {
    const Dmc a = Dmc::bsc(0.1);
    const Dmc b = Dmc::bsc(0.2);

    CHECK_THROWS_AS(MixedChannel({{0.5, a}, {0.4, b}}), std::invalid_argument);  // weights < 1
    CHECK_THROWS_AS(MixedChannel({{1.0, a}, {0.0, b}}), std::invalid_argument);  // zero weight
    CHECK_THROWS_AS(MixedChannel({{0.5, a}, {0.5, Dmc::identity(3)}}), std::invalid_argument);
    CHECK_THROWS_AS(MixedChannel({{1.0, a}}, std::vector<double>{0.0, 1.0, 2.0}),
                    std::invalid_argument);  // cost length

    const MixedChannel ch({{0.5, a}, {0.3, b}, {0.2, a}});
    CHECK(ch.component_count() == 3);
    CHECK(ch.subset_weight({0, 2}) == doctest::Approx(0.7));

    const MixedChannel with_cost({{1.0, a}}, std::vector<double>{0.0, 1.0});
    CHECK(with_cost.has_cost());
    CHECK(with_cost.min_cost() == 0.0);
    CHECK(with_cost.max_cost() == 1.0);
}
