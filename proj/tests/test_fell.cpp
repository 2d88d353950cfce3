#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "whlab/fell.hpp"

using namespace whlab;

namespace {

GridFrame line(double lo, double hi, double h) { return {Ambient::R, {lo}, {hi}, h}; }

}  // namespace

TEST_CASE("grid frames") {
    CHECK(line(0, 1, 0.25).grid_points().size() == 5);
    CHECK(GridFrame{Ambient::R2, {0, 0}, {1, 2}, 0.5}.grid_points().size() == 15);
    CHECK_THROWS_AS(line(1, 0, 0.1).validate(), InputValidationError);
    CHECK_THROWS_AS((GridFrame{Ambient::Z, {0.5}, {3}, 1}.validate()), InputValidationError);
    CHECK_THROWS_AS((GridFrame{Ambient::R2, {0}, {1}, 1}.validate()), InputValidationError);
}

TEST_CASE("fell_limit of a constant sequence") {
    const auto f = line(-5, 5, 0.125);
    std::vector<ClosedSetModel> seq(6, interval_set(f, -1, 2));
    const auto r = fell_limit(seq);
    REQUIRE(r.converges);
    for (const auto& p : r.grid) CHECK(r.limit->contains(p) == (p[0] >= -1 && p[0] <= 2));
    const auto runs = grid_runs(r);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].first == -1);
    CHECK(runs[0].second == 2);
}

TEST_CASE("fell_limit of escaping rays is the window") {
    const auto f = line(-10, 10, 0.25);
    std::vector<ClosedSetModel> seq;
    for (int n = 0; n < 80; ++n) seq.push_back(ray_set(f, n));
    const auto r = fell_limit(seq);
    REQUIRE(r.converges);
    for (const auto& p : r.grid) CHECK(r.limit->contains(p));
}

TEST_CASE("fell_limit of alternating rays diverges") {
    const auto f = line(-3, 3, 0.125);
    std::vector<ClosedSetModel> seq;
    for (int n = 0; n < 40; ++n) seq.push_back(ray_set(f, n % 2));
    const auto r = fell_limit(seq);
    CHECK_FALSE(r.converges);
    CHECK_FALSE(r.limit.has_value());
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        const double x = r.grid[k][0];
        const bool gap = x > 0 && x <= 1;
        CHECK((r.liminf[k] != r.limsup[k]) == gap);
    }
}

TEST_CASE("fell_limit of converging translates") {
    // P^{-1} a_n with a_n = a + 1/n converges to P^{-1} a
    const double a = 0.75;
    const auto f = line(-2, 3, 0.125);
    std::vector<ClosedSetModel> seq;
    for (int n = 1; n <= 400; ++n) seq.push_back(ray_set(f, a + 1.0 / n));
    const auto r = fell_limit(seq);
    REQUIRE(r.converges);
    for (const auto& p : r.grid) CHECK(r.limit->contains(p) == (p[0] <= a + 1e-12));
}

TEST_CASE("fell_limit in Z and R2") {
    const GridFrame z{Ambient::Z, {-5}, {5}, 1};
    std::vector<ClosedSetModel> seq;
    for (int n = 0; n < 8; ++n) seq.push_back(ray_set(z, 2));
    auto r = fell_limit(seq);
    REQUIRE(r.converges);
    CHECK(r.limit->contains(2.0));
    CHECK_FALSE(r.limit->contains(3.0));

    const GridFrame plane{Ambient::R2, {-2, -2}, {2, 2}, 0.25};
    std::vector<ClosedSetModel> q;
    for (int n = 0; n < 20; ++n) q.push_back(quadrant_set(plane, 1, n));
    r = fell_limit(q);
    REQUIRE(r.converges);
    for (const auto& p : r.grid) CHECK(r.limit->contains(p) == (p[0] <= 1));
}

TEST_CASE("fell_limit errors") {
    CHECK_THROWS_AS(fell_limit({}), InputValidationError);
    CHECK_THROWS_AS(fell_limit({ray_set(line(0, 1, 0.1), 0), ray_set(line(0, 2, 0.1), 0)}), InputValidationError);
}

TEST_CASE("union sets") {
    const auto f = line(-4, 4, 0.5);
    const auto u = union_set(f, {interval_set(f, -3, -2), interval_set(f, 1, 1)});
    CHECK(u.contains(-2.5));
    CHECK(u.contains(1.0));
    CHECK_FALSE(u.contains(0.0));
}

TEST_CASE("omega_qset examples") {
    CHECK(omega_qset(OmegaPoint::halfline(0), 1));
    CHECK_FALSE(omega_qset(OmegaPoint::halfline(2), -3));
    CHECK(omega_qset(OmegaPoint::halfline_inf(), -1e6));
    CHECK(omega_qset(OmegaPoint::discrete_inf(), -7));
    CHECK(omega_qset(OmegaPoint::discrete(3), -3));
    CHECK_FALSE(omega_qset(OmegaPoint::discrete(3), -4));
    CHECK_THROWS_AS(omega_qset(OmegaPoint::halfline(-1), 2), DomainError);
    CHECK_THROWS_AS(omega_qset(OmegaPoint::discrete(1), 0.5), InputValidationError);
}

TEST_CASE("omega_qset agrees with the raw set test on a window") {
    const auto f = line(-6, 6, 0.25);
    for (double x = 0; x <= 5; x += 0.25) {
        const auto pt = OmegaPoint::halfline(x);
        const auto set = omega_as_set(pt, f);
        for (const auto& g : f.grid_points()) CHECK(omega_qset(pt, g[0]) == (set.distance(std::vector<double>{-g[0]}) == 0));
    }
    const double corner[2] = {1.5, 0};
    const auto c = OmegaPoint::cone2d(ExtendedReal::of(corner[0]), ExtendedReal::inf());
    const double g1[2] = {-1.5, -100};
    const double g2[2] = {-1.75, 0};
    CHECK(omega_qset(c, g1));
    CHECK_FALSE(omega_qset(c, g2));
}

TEST_CASE("omega_translate_membership examples") {
    CHECK(omega_translate_membership(OmegaPoint::halfline(-1), 2));
    CHECK_FALSE(omega_translate_membership(OmegaPoint::halfline(-1), 0.5));
    CHECK(omega_translate_membership(OmegaPoint::halfline(0), 0));
}

TEST_CASE("classify_omega") {
    CHECK(classify_omega(OmegaPoint::halfline(0)) == OmegaClass::boundary);
    CHECK(classify_omega(OmegaPoint::halfline(3)) == OmegaClass::interior);
    CHECK(classify_omega(OmegaPoint::halfline_inf()) == OmegaClass::interior);
    CHECK(classify_omega(OmegaPoint::discrete(0)) == OmegaClass::boundary);
    CHECK(classify_omega(OmegaPoint::discrete(1)) == OmegaClass::interior);
    CHECK(classify_omega(OmegaPoint::cone2d(ExtendedReal::of(0), ExtendedReal::inf())) == OmegaClass::boundary);
    CHECK(classify_omega(OmegaPoint::cone2d(ExtendedReal::of(2), ExtendedReal::of(1))) == OmegaClass::interior);
    CHECK(classify_omega(OmegaPoint::cone2d(ExtendedReal::inf(), ExtendedReal::inf())) == OmegaClass::interior);
}

TEST_CASE("Omega is closed under the right P-action") {
    for (int n = 0; n <= 20; ++n)
        for (int a = 0; a <= 20; ++a) CHECK(omega_translate(OmegaPoint::discrete(n), std::vector<double>{double(a)}).in_omega());
    CHECK(omega_translate(OmegaPoint::discrete_inf(), std::vector<double>{5.0}).in_omega());
}
