#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "whlab/fell.hpp"
#include "whlab/groupoid.hpp"
#include "whlab/random.hpp"

using namespace whlab;

namespace {

GroupoidSection random_section(const Window& w, const EndomorphismAction& act, std::int64_t radius, int count, Rng& rng) {
    const Eigen::Index k = act.fiber_dim();
    GroupoidSection s(k, w, act);
    std::uniform_int_distribution<std::int64_t> unit(-1, w.x_max);
    std::uniform_int_distribution<std::int64_t> arrow(-radius, radius);
    int placed = 0;
    while (placed < count) {
        const std::int64_t x = unit(rng);
        const Unit X = x < 0 ? Unit::inf() : Unit::at(x);
        const std::int64_t g = arrow(rng);
        // keep both ends of the arrow inside the window so that involutes fit
        if (!is_groupoid_element(X, g) || !w.contains(GroupoidElement{X, g}.inverse())) continue;
        s.set({X, g}, random_gaussian<double>(k, k, rng));
        ++placed;
    }
    return s;
}

EndomorphismAction make_action(Eigen::Index k, Rng& rng) {
    return k == 1 ? EndomorphismAction::identity(1) : EndomorphismAction::conjugation(random_unitary<double>(k, rng).matrix());
}

}  // namespace

TEST_CASE("groupoid structure") {
    CHECK(is_groupoid_element(Unit::at(3), -3));
    CHECK_FALSE(is_groupoid_element(Unit::at(3), -4));
    CHECK(is_groupoid_element(Unit::inf(), -100));
    const GroupoidElement e{Unit::at(4), -2};
    CHECK(e.source() == Unit::at(2));
    CHECK(e.inverse() == GroupoidElement{Unit::at(2), 2});
    CHECK(e.inverse().inverse() == e);
}

TEST_CASE("groupoid membership matches the Omega model") {
    for (std::int64_t x = 0; x <= 12; ++x)
        for (std::int64_t g = -15; g <= 15; ++g)
            CHECK(is_groupoid_element(Unit::at(x), g) == omega_qset(OmegaPoint::discrete(x), double(g)));
    for (std::int64_t g = -15; g <= 15; ++g)
        CHECK(is_groupoid_element(Unit::inf(), g) == omega_qset(OmegaPoint::discrete_inf(), double(g)));
}

TEST_CASE("section validation") {
    GroupoidSection s(1, {4, 3}, EndomorphismAction::identity(1));
    CHECK_THROWS_AS(s.set({Unit::at(1), -2}, MatrixXc::Identity(1, 1)), DomainError);
    CHECK_THROWS_AS(s.set({Unit::at(5), 0}, MatrixXc::Identity(1, 1)), RangeError);
    CHECK_THROWS_AS(s.set({Unit::at(1), 4}, MatrixXc::Identity(1, 1)), RangeError);
    CHECK_THROWS_AS(s.set({Unit::at(1), 0}, MatrixXc::Identity(2, 2)), InputValidationError);
    CHECK_THROWS_AS(GroupoidSection(2, {4, 3}, EndomorphismAction::from_generator(2, MatrixXc::Zero(4, 4))),
                    InputValidationError);
}

TEST_CASE("unit section acts as identity on its column") {
    Rng rng(1);
    const Window w{8, 8};
    const auto act = make_action(2, rng);
    const auto psi = random_section(w, act, 3, 30, rng);
    for (const Unit X : {Unit::at(2), Unit::inf()}) {
        GroupoidSection delta(2, w, act);
        delta.set({X, 0}, MatrixXc::Identity(2, 2));
        const auto out = convolve(delta, psi);
        for (const auto& [e, v] : psi.values())
            if (e.X == X) CHECK((out.at(e) - v).norm() < 1e-14);
        for (const auto& [e, v] : out.values()) CHECK(e.X == X);
    }
}

TEST_CASE("convolution at infinity is convolution on Z") {
    Rng rng(2);
    const Window w{0, 12};
    const auto act = EndomorphismAction::identity(1);
    GroupoidSection a(1, w, act), b(1, w, act);
    std::vector<cdouble> fa(7), fb(7);
    for (int g = -3; g <= 3; ++g) {
        fa[g + 3] = cdouble(std::normal_distribution<double>()(rng), 0.5 * g);
        fb[g + 3] = cdouble(1.0 / (g + 4), 0.0);
        a.set({Unit::inf(), g}, MatrixXc::Constant(1, 1, fa[g + 3]));
        b.set({Unit::inf(), g}, MatrixXc::Constant(1, 1, fb[g + 3]));
    }
    const auto c = convolve(a, b);
    for (int s = -6; s <= 6; ++s) {
        cdouble expect = 0;
        for (int t = -3; t <= 3; ++t)
            if (s - t >= -3 && s - t <= 3) expect += fa[t + 3] * fb[s - t + 3];
        CHECK(std::abs(c.at({Unit::inf(), s})(0, 0) - expect) < 1e-13);
    }
}

TEST_CASE("convolution overflow is reported") {
    const Window w{5, 2};
    GroupoidSection a(1, w, EndomorphismAction::identity(1));
    a.set({Unit::at(0), 2}, MatrixXc::Identity(1, 1));
    a.set({Unit::at(2), 2}, MatrixXc::Identity(1, 1));
    CHECK_THROWS_AS(convolve(a, a), RangeError);
}

TEST_CASE("associativity, involution, and the I-norm") {
    Rng rng(3);
    const Window w{10, 12};
    for (Eigen::Index k : {1, 2}) {
        const auto act = make_action(k, rng);
        for (int trial = 0; trial < 30; ++trial) {
            const auto a = random_section(w, act, 3, 12, rng);
            const auto b = random_section(w, act, 3, 12, rng);
            const auto c = random_section(w, act, 3, 12, rng);
            CHECK(convolve(convolve(a, b), c).distance(convolve(a, convolve(b, c))) < 1e-11);
            CHECK(involute(involute(a)).distance(a) < 1e-12);
            CHECK(std::abs(i_norm(involute(a)) - i_norm(a)) < 1e-11);
            // (ab)* = b* a*
            CHECK(involute(convolve(a, b)).distance(convolve(involute(b), involute(a))) < 1e-11);
            CHECK(i_norm(convolve(a, b)) <= i_norm(a) * i_norm(b) * (1 + 1e-12));
        }
    }
}

TEST_CASE("involution of the trivial bundle") {
    GroupoidSection a(1, {6, 4}, EndomorphismAction::identity(1));
    a.set({Unit::at(3), -2}, MatrixXc::Constant(1, 1, cdouble(1, 2)));
    a.set({Unit::at(2), 0}, MatrixXc::Constant(1, 1, cdouble(5, 0)));
    const auto s = involute(a);
    CHECK(s.at({Unit::at(1), 2})(0, 0) == cdouble(1, -2));
    CHECK(s.at({Unit::at(2), 0})(0, 0) == cdouble(5, 0));
    CHECK(s.distance(involute(s)) > 0);
}

TEST_CASE("i_norm") {
    GroupoidSection a(1, {6, 4}, EndomorphismAction::identity(1));
    a.set({Unit::at(3), 1}, MatrixXc::Constant(1, 1, 2.0));
    CHECK(i_norm(a) == doctest::Approx(2.0));
    a.set({Unit::at(3), -1}, MatrixXc::Constant(1, 1, -3.0));
    CHECK(i_norm(a) == doctest::Approx(5.0));
    a.set({Unit::at(5), -1}, MatrixXc::Constant(1, 1, 4.0));
    // column over source 4 collects 2 + 4
    CHECK(i_norm(a) == doctest::Approx(6.0));
}

TEST_CASE("lift and hat") {
    const MatrixXc x = MatrixXc::Constant(2, 2, cdouble(0, 1));
    const Window w{6, 4};
    const auto act = EndomorphismAction::identity(2);
    const auto l0 = lift_and_hat(SymbolFunction::delta(0, MatrixXc::Identity(2, 2)), w, act);
    for (const auto& [e, v] : l0.tilde.values()) CHECK(e.g == 0);
    CHECK(l0.hat.support() == std::vector<std::int64_t>{0});
    const auto l2 = lift_and_hat(SymbolFunction::delta(2, x), w, act);
    CHECK(l2.hat.support() == std::vector<std::int64_t>{-2});
    CHECK(l2.tilde.values().size() == 8);  // X = 0..6 and inf
    const auto lm = lift_and_hat(SymbolFunction::delta(-2, x), w, act);
    CHECK(lm.tilde.values().size() == 6);  // X = 2..6 and inf
}

TEST_CASE("central identity") {
    Rng rng(4);
    for (Eigen::Index k : {1, 2}) {
        const auto act = make_action(k, rng);
        for (int trial = 0; trial < 10; ++trial) {
            SymbolFunction f(k);
            for (int g = -8; g <= 8; ++g)
                if (rng() % 2) f.set(g, random_gaussian<double>(k, k, rng));
            const auto lift = lift_and_hat(f, {32, 8}, act);
            const auto diff = lambda_rep(lift.tilde, 32) - wiener_hopf(lift.hat, act, 32);
            CHECK(diff.max_abs_entry() <= 1e-12);
        }
    }
}

TEST_CASE("lambda_rep") {
    const auto act = EndomorphismAction::identity(2);
    GroupoidSection unit(2, {10, 2}, act);
    for (int x = 0; x <= 10; ++x) unit.set({Unit::at(x), 0}, MatrixXc::Identity(2, 2));
    CHECK((lambda_rep(unit, 10) - identity_operator(10, 2)).max_abs_entry() == 0);
    CHECK_THROWS_AS(lambda_rep(unit, 11), RangeError);

    Rng rng(5);
    const Window w{16, 12};
    for (Eigen::Index k : {1, 2}) {
        const auto a2 = make_action(k, rng);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = random_section(w, a2, 3, 15, rng);
            const auto b = random_section(w, a2, 3, 15, rng);
            const std::int64_t N = 12;
            CHECK(lambda_rep(a, N).norm() <= i_norm(a) * (1 + 1e-12));
            CHECK((lambda_rep(involute(a), N) - lambda_rep(a, N).adjoint()).max_abs_entry() < 1e-12);
            const MatrixXc diff = (lambda_rep(convolve(a, b), N) - lambda_rep(a, N) * lambda_rep(b, N)).dense();
            CHECK(diff.topRows((N + 1 - 3) * k).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("shift_R") {
    Rng rng(6);
    const Window w{12, 12};
    const auto act = make_action(2, rng);
    const auto psi = random_section(w, act, 2, 20, rng);
    CHECK(shift_R(0, psi).distance(psi) == 0);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) CHECK(shift_R(a, shift_R(b, psi)).distance(shift_R(a + b, psi)) < 1e-12);

    GroupoidSection t(1, {8, 6}, EndomorphismAction::identity(1));
    t.set({Unit::at(5), -1}, MatrixXc::Constant(1, 1, 7.0));
    t.set({Unit::at(1), 0}, MatrixXc::Constant(1, 1, 3.0));
    t.set({Unit::inf(), 2}, MatrixXc::Constant(1, 1, 4.0));
    const auto r = shift_R(2, t);
    CHECK(r.values().size() == 2);
    CHECK(r.at({Unit::at(3), 1})(0, 0) == cdouble(7.0));
    CHECK(r.at({Unit::inf(), 4})(0, 0) == cdouble(4.0));
    CHECK_THROWS_AS(shift_R(5, t), RangeError);
}
