#include "hmfp/errors.hpp"
#include "hmfp/grid.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hmfp;
using hmfp::testing::sample;
using std::numbers::pi;

TEST_CASE("make_grid spacing") {
    const auto g = make_grid(8, 8, 4.0);
    CHECK(g.d_theta() == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(g.d_v() == 1.0);
    CHECK(g.v(0) == -3.5);
    CHECK(g.theta(3) == doctest::Approx(3 * pi / 4));
    CHECK(make_grid(256, 256, 8.0).d_v() == 1.0 / 16.0);
    CHECK_THROWS_AS(make_grid(4, 8, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, 4, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, 8, 0.0), InvalidArgument);
    CHECK(g.wrap_theta(8) == 0);
    CHECK(g.wrap_theta(-1) == 7);
}

TEST_CASE("field validation") {
    const auto g = make_grid(8, 8, 1.0);
    CHECK_THROWS_AS(DistributionField(g, std::vector<double>(63, 1.0)), InvalidArgument);
    std::vector<double> bad(64, 1.0);
    bad[5] = -1e-3;
    CHECK_THROWS_AS(DistributionField(g, bad), InvalidArgument);
    bad[5] = NAN;
    CHECK_THROWS_AS(DistributionField(g, bad), InvalidArgument);
}

TEST_CASE("integrate") {
    const auto g = make_grid(16, 32, 4.0);
    CHECK(integrate(sample(g, [](double, double) { return 1.0; })) == doctest::Approx(16 * pi).epsilon(1e-14));
    CHECK(integrate(DistributionField(g)) == 0.0);
    const double c2 = integrate(sample(g, [](double t, double) { return std::cos(t) * std::cos(t); }));
    CHECK(std::abs(c2 - 8 * pi) < 1e-10);
}

TEST_CASE("integrate is linear") {
    const auto g = make_grid(32, 48, 5.0);
    const auto f = hmfp::testing::random_field(g, 1, 2.0);
    const auto h = hmfp::testing::random_field(g, 2, 2.0);
    std::vector<double> comb(g.size());
    for (std::size_t k = 0; k < comb.size(); ++k) comb[k] = 0.3 * f.values()[k] + 1.7 * h.values()[k];
    const double lhs = integrate(DistributionField(g, comb));
    const double rhs = 0.3 * integrate(f) + 1.7 * integrate(h);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("integrate converges at second order in v") {
    auto fn = [](double t, double v) { return (1.0 + 0.5 * std::sin(t)) / (1.0 + v * v); };
    const double exact = two_pi * 2.0 * std::atan(3.0);
    double err[3];
    for (int r = 0; r < 3; ++r) {
        const auto g = make_grid(16u << r, 16u << r, 3.0);
        err[r] = std::abs(integrate(sample(g, fn)) - exact);
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("weighted L1 distance") {
    const auto g = make_grid(16, 64, 1.0);
    const auto one = sample(g, [](double, double) { return 1.0; });
    const DistributionField zero(g);
    CHECK(weighted_l1_distance(one, one) == 0.0);
    // midpoint rule on 1 + v^2 is off by exactly 2pi * 2 * d_v^2 / 12
    const double expect = two_pi * 8.0 / 3.0;
    CHECK(std::abs(weighted_l1_distance(one, zero) - expect) < two_pi * g.d_v() * g.d_v() / 6.0 + 1e-12);

    const auto a = hmfp::testing::random_field(g, 3, 0.5);
    const auto b = hmfp::testing::random_field(g, 4, 0.5);
    const auto c = hmfp::testing::random_field(g, 5, 0.5);
    CHECK(weighted_l1_distance(a, b) == weighted_l1_distance(b, a));
    CHECK(weighted_l1_distance(a, c) <= (weighted_l1_distance(a, b) + weighted_l1_distance(b, c)) * (1 + 1e-12));
    CHECK_THROWS_AS(weighted_l1_distance(a, DistributionField(make_grid(16, 32, 1.0))), GridMismatch);
}

TEST_CASE("cyclic shifts") {
    const auto g = make_grid(8, 8, 1.0);
    const auto f = hmfp::testing::random_field(g, 9, 0.5);
    const auto s = f.shifted(3);
    CHECK(s(0, 2) == f(3, 2));
    CHECK(s(6, 1) == f(1, 1));
    Potential p{{1, 2, 3, 4, 5, 6, 7, 8}, {}};
    CHECK(p.shifted(-1).values[0] == 8);
}
