#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "whlab/homotopy.hpp"

using namespace whlab;

namespace {

using UP = UnitaryPoint<double>;

UP diag_point(std::initializer_list<double> angles) {
    VectorXc d(static_cast<Eigen::Index>(angles.size()));
    Eigen::Index k = 0;
    for (double a : angles) d(k++) = std::polar(1.0, a);
    return UP(UnitaryMatrix(MatrixXc(d.asDiagonal())));
}

}  // namespace

TEST_CASE("uniform grid") {
    const auto g = uniform_grid(65);
    CHECK(g.size() == 65);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[32] == 0.5);
    CHECK_THROWS_AS(uniform_grid(1), InputValidationError);
}

TEST_CASE("half-line homotopy values") {
    CHECK(halfline_phi(0.0, HalfLinePoint::of(3.0)).value == 3.0);
    CHECK(halfline_phi(0.0, HalfLinePoint::inf()).infinite);
    CHECK(halfline_phi(1.0, HalfLinePoint::of(1e6)).value == 0.0);
    CHECK(halfline_phi(1.0, HalfLinePoint::inf()).value == 0.0);
    const auto at_inf = halfline_phi(0.5, HalfLinePoint::inf());
    CHECK_FALSE(at_inf.infinite);
    CHECK(at_inf.value == doctest::Approx(0.5 / std::sqrt(0.75)));
    // the closed form at inf is the limit of finite points
    CHECK(halfline_phi(0.5, HalfLinePoint::of(1e9)).value == doctest::Approx(at_inf.value).epsilon(1e-12));
    CHECK(halfline_chart(HalfLinePoint::of(1.0)) == 0.5);
}

TEST_CASE("condition H holds for the half-line homotopy") {
    Rng rng(1);
    const auto samples = halfline_samples(60, rng);
    const auto report = verify_condition_H(halfline_spec(1e-10), uniform_grid(65), samples, 1e-10);
    CHECK(report.passed());
    CHECK(report.failures.empty());
    CHECK(report.clauses.at("boundary_invariance").checks == 65);
    CHECK(report.clauses.at("orbit_and_order").checks == 60 * 64);
}

TEST_CASE("dropping the normalizer is caught at infinity") {
    Rng rng(2);
    const auto report = verify_condition_H(halfline_spec(1e-10, true), uniform_grid(65), halfline_samples(60, rng), 1e-10);
    CHECK_FALSE(report.passed());
    CHECK_FALSE(report.clauses.at("orbit_and_order").pass);
    CHECK(report.clauses.at("orbit_and_order").violations == 63);
    CHECK(report.clauses.at("boundary_invariance").pass);
    CHECK(report.failures.front().find("X=inf") != std::string::npos);
}

TEST_CASE("verifier input validation") {
    const auto spec = halfline_spec(1e-10);
    CHECK_THROWS_AS(verify_condition_H(spec, {0.0, 0.5}, {HalfLinePoint::of(1.0)}, 1e-10), InputValidationError);
    CHECK_THROWS_AS(verify_condition_H(spec, {0.0, 0.5, 0.5, 1.0}, {HalfLinePoint::of(1.0)}, 1e-10),
                    InputValidationError);
    CHECK_THROWS_AS(verify_condition_H(spec, uniform_grid(5), {HalfLinePoint::of(-1.0)}, 1e-10), InputValidationError);
}

TEST_CASE("angle_log") {
    CHECK(angle_log(UnitaryMatrix(MatrixXc::Identity(2, 2))).matrix().norm() < 1e-15);
    const auto minus = angle_log(UnitaryMatrix(MatrixXc(-MatrixXc::Identity(2, 2))));
    CHECK((minus.matrix() - std::numbers::pi * MatrixXc::Identity(2, 2)).norm() < 1e-14);
    const auto di = angle_log(diag_point({0.0, std::numbers::pi / 2}).u);
    CHECK(std::abs(di.matrix()(0, 0)) < 1e-15);
    CHECK(std::abs(di.matrix()(1, 1) - std::numbers::pi / 2) < 1e-15);
    CHECK_THROWS_WITH_AS(angle_log(diag_point({-0.5}).u), doctest::Contains("not in Z"), DomainError);

    Rng rng(3);
    for (const auto& x : unitary_samples<double>(3, 20, rng)) {
        const auto g = angle_log(x.u);
        CHECK(lambda_min(g) >= -1e-12);
        CHECK(lambda_min(Hermitian<double>(MatrixXc(std::numbers::pi * MatrixXc::Identity(3, 3) - g.matrix()))) >= -1e-12);
        // exp(i g(U)) = U
        const auto back = functional_calculus(hermitian_eig(g), [](cdouble z) { return std::polar(1.0, z.real()); });
        CHECK((back - x.u.matrix()).norm() < 1e-9);
    }
}

TEST_CASE("order containment in a shared frame") {
    Rng rng(4);
    const double t = 0.3;
    for (const auto& x : unitary_samples<double>(3, 20, rng)) {
        const ZPoint<double> u(x.u);
        CHECK(order_containment_unitary(u, u));
        const ZPoint<double> v(unitary_phi(t, x).u);
        CHECK(order_containment_unitary(v, u));
        bool strict = false;
        for (const auto& l : x.dec.eigenvalues) strict |= std::arg(l) < std::numbers::pi - 1e-6;
        if (strict) CHECK_FALSE(order_containment_unitary(u, v));
    }
    // the swap has eigenvectors (1, +-1), which diagonal matrices do not share
    const MatrixXc swap = (MatrixXc(2, 2) << 0, 1, 1, 0).finished();
    const ZPoint<double> frame{UnitaryMatrix(swap)};
    CHECK_THROWS_WITH_AS(order_containment_unitary(diag_point({0.3, 0.7}).u.matrix(), frame.decomposition(), 1e-10),
                         doctest::Contains("not comparable via shared frame"), DomainError);
}

TEST_CASE("unitary homotopy values") {
    const auto x = diag_point({0.0, std::numbers::pi / 2, std::numbers::pi});
    const auto y = unitary_phi(0.5, x);
    CHECK(std::abs(y.u.matrix()(0, 0) - std::polar(1.0, std::numbers::pi / 2)) < 1e-14);
    CHECK(std::abs(y.u.matrix()(1, 1) - std::polar(1.0, 3 * std::numbers::pi / 4)) < 1e-14);
    CHECK(std::abs(y.u.matrix()(2, 2) + 1.0) < 1e-14);
    CHECK((unitary_phi(1.0, x).u.matrix() + MatrixXc::Identity(3, 3)).norm() < 1e-14);
    CHECK((unitary_phi(0.0, x).u.matrix() - x.u.matrix()).norm() < 1e-14);
}

TEST_CASE("condition H holds for the unitary homotopy") {
    Rng rng(5);
    const auto samples = unitary_samples<double>(3, 50, rng);
    const auto spec = unitary_spec<double>(1e-10);
    std::size_t boundary = 0;
    for (const auto& s : samples) boundary += spec.boundary_test(s);
    CHECK(boundary >= 10);
    const auto report = verify_condition_H(spec, uniform_grid(65), samples, 1e-10);
    CHECK(report.passed());
    for (const auto& f : report.failures) MESSAGE(f);
}

TEST_CASE("the wrong-sign unitary homotopy is flagged") {
    Rng rng(6);
    const auto report =
        verify_condition_H(unitary_spec<double>(1e-10, true), uniform_grid(65), unitary_samples<double>(3, 50, rng), 1e-10);
    CHECK_FALSE(report.passed());
    CHECK_FALSE(report.clauses.at("orbit_and_order").pass);
    CHECK_FALSE(report.clauses.at("boundary_invariance").pass);
}
