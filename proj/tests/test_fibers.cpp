#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "whlab/fibers.hpp"
#include "whlab/random.hpp"

using namespace whlab;

namespace {

PiecewiseLinear random_pl(Rng& rng, int pieces) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n;
    std::vector<double> b{0.0, 1.0};
    for (int i = 1; i < pieces; ++i) b.push_back(std::pow(u(rng), 4));  // crowd breaks near 0
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<cdouble> v;
    for (std::size_t i = 0; i < b.size(); ++i) v.emplace_back(n(rng), n(rng));
    return PiecewiseLinear(b, v);
}

// sup |x| on [0, h] from the breaks of x and a dense sample, without alpha.
double direct_sup(const PiecewiseLinear& x, double h) {
    double best = std::abs(x(h));
    for (std::size_t i = 0; i < x.breaks().size(); ++i)
        if (x.breaks()[i] <= h) best = std::max(best, std::abs(x.values()[i]));
    for (int j = 0; j <= 2000; ++j) best = std::max(best, std::abs(x(h * j / 2000.0)));
    return best;
}

TrigPolynomial monomial(std::int64_t k, cdouble c = 1.0) { return TrigPolynomial({{k, c}}); }

}  // namespace

TEST_CASE("piecewise-linear validation and evaluation") {
    CHECK_THROWS_AS(PiecewiseLinear({0.0, 0.5}, {1.0, 2.0}), InputValidationError);
    CHECK_THROWS_AS(PiecewiseLinear({0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0, 4.0}), InputValidationError);
    CHECK_THROWS_AS(PiecewiseLinear({0.0, 1.0}, {1.0}), InputValidationError);
    const PiecewiseLinear f({0.0, 0.5, 1.0}, {0.0, 2.0, cdouble(0, 1)});
    CHECK(f(0.25) == cdouble(1.0));
    CHECK(std::abs(f(0.75) - cdouble(1.0, 0.5)) < 1e-15);
    CHECK(f.sup_abs() == 2.0);
    CHECK(f.sup_abs(0.0, 0.25) == 1.0);
    CHECK_THROWS_AS(f(1.5), DomainError);
}

TEST_CASE("alpha and its section") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_pl(rng, 8);
        for (int n = 0; n <= 4; ++n) {
            const auto an = f.alpha(n);
            for (double t : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) CHECK(std::abs(an(t) - f(std::ldexp(t, -n))) < 1e-13);
        }
        for (int b = 0; b <= 4; ++b) CHECK((f.section(b).alpha(b) - f).sup_abs() < 1e-13);
        CHECK((f.alpha(2).alpha(3) - f.alpha(5)).sup_abs() < 1e-13);
    }
}

TEST_CASE("quotient norm examples") {
    const PiecewiseLinear f({0.0, 1.0}, {1.0, 3.0});  // 1 + 2t
    CHECK(quotient_norm(Unit::at(0), f) == doctest::Approx(3.0));
    CHECK(quotient_norm(Unit::at(1), f) == doctest::Approx(2.0));
    CHECK(quotient_norm(Unit::at(3), f) == doctest::Approx(1.25));
    CHECK(quotient_norm(Unit::inf(), f) == 1.0);
    const PiecewiseLinear hat({0.0, 0.125, 0.25, 1.0}, {0.0, 1.0, 0.0, 0.0});
    CHECK(quotient_norm(Unit::at(2), hat) == 1.0);
    CHECK(quotient_norm(Unit::at(3), hat) == 1.0);
    CHECK(quotient_norm(Unit::at(4), hat) == doctest::Approx(0.5));
    CHECK(quotient_norm(Unit::inf(), hat) == 0.0);
}

TEST_CASE("quotient norm matches a direct sup") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_pl(rng, 10);
        for (int n = 0; n <= 10; ++n) {
            const double q = quotient_norm(Unit::at(n), x);
            const double d = direct_sup(x, std::ldexp(1.0, -n));
            CHECK(std::abs(q - d) <= 1e-12 * std::max(1.0, d));
        }
    }
}

TEST_CASE("kernel of alpha_n is the ideal I_n") {
    Rng rng(3);
    std::uniform_int_distribution<int> level(0, 10);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 100; ++trial) {
        // x vanishes exactly on [0, 2^-n0] and nowhere beyond
        const int n0 = level(rng);
        const double c = std::ldexp(1.0, -n0);
        std::vector<double> b{0.0, c};
        std::vector<cdouble> v{0.0, 0.0};
        if (c < 1.0) {
            b.push_back(1.0);
            v.emplace_back(1.0 + std::abs(nd(rng)), nd(rng));
        } else {
            v.back() = 0.0;
        }
        const PiecewiseLinear x(b, v);
        for (int n = 0; n <= 10; ++n) {
            const bool truth = n >= n0;
            CHECK(in_kernel(n, x) == truth);
            CHECK(ideal_contains(Unit::at(n), x) == truth);
        }
        CHECK(ideal_contains(Unit::inf(), x));
    }
}

TEST_CASE("quotient seminorm is a C*-seminorm") {
    Rng rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = random_pl(rng, 6);
        const auto y = random_pl(rng, 6);
        for (int n = 0; n <= 6; ++n) {
            const double h = std::ldexp(1.0, -n);
            const double nx = quotient_norm(Unit::at(n), x), ny = quotient_norm(Unit::at(n), y);
            CHECK(product_sup(x, y, 0.0, h) <= nx * ny * (1 + 1e-12));
            CHECK(product_sup(x.conj(), x, 0.0, h) == doctest::Approx(nx * nx).epsilon(1e-12));
            CHECK(quotient_norm(Unit::at(n), x + y) <= nx + ny + 1e-12);
            CHECK(quotient_norm(Unit::at(n), x.conj()) == doctest::Approx(nx));
        }
    }
}

TEST_CASE("product_sup finds interior maxima") {
    // x = y = 1 - 2t changes sign; |x y| = (1 - 2t)^2 peaks at the ends
    const PiecewiseLinear x({0.0, 1.0}, {1.0, -1.0});
    CHECK(product_sup(x, x) == doctest::Approx(1.0));
    // t (1 - t) peaks at 1/4
    const PiecewiseLinear a({0.0, 1.0}, {0.0, 1.0});
    const PiecewiseLinear b({0.0, 1.0}, {1.0, 0.0});
    CHECK(product_sup(a, b) == doctest::Approx(0.25).epsilon(1e-14));
    const PiecewiseLinear c({0.0, 1.0}, {cdouble(0, -1), cdouble(0, 1)});
    CHECK(product_sup(c, c.conj(), 0.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("quotient norm is upper semicontinuous in X") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_pl(rng, 8);
        double prev = quotient_norm(Unit::at(0), x);
        for (int n = 1; n <= 40; ++n) {
            const double cur = quotient_norm(Unit::at(n), x);
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
        double lip = 0;
        for (std::size_t i = 1; i < x.breaks().size(); ++i)
            lip = std::max(lip, std::abs(x.values()[i] - x.values()[i - 1]) / (x.breaks()[i] - x.breaks()[i - 1]));
        CHECK(prev - quotient_norm(Unit::inf(), x) <= lip * std::ldexp(1.0, -40) + 1e-15);
        CHECK(prev >= quotient_norm(Unit::inf(), x));
    }
}

TEST_CASE("fiber action is independent of the decomposition") {
    Rng rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const auto y = random_pl(rng, 8);
        for (const Unit X : {Unit::at(0), Unit::at(3), Unit::at(7), Unit::inf()}) {
            for (std::int64_t g = -5; g <= 5; ++g) {
                if (!is_groupoid_element(X, g)) {
                    CHECK_THROWS_AS(fiber_action(X, g, QuotientElement(Unit::at(0), y)), DomainError);
                    continue;
                }
                const QuotientElement q(X.shifted(g), y);
                const auto base = fiber_action(X, g, q);
                CHECK(base.seminorm == doctest::Approx(q.seminorm).epsilon(1e-12));
                for (std::int64_t c = 1; c <= 5; ++c) {
                    const std::int64_t a = std::max<std::int64_t>(g, 0) + c, b = std::max<std::int64_t>(-g, 0) + c;
                    CHECK(fiber_distance(fiber_action(X, g, q, a, b), base) <= 1e-9);
                }
            }
        }
    }
    const QuotientElement q(Unit::at(2), PiecewiseLinear::constant(1.0));
    CHECK_THROWS_AS(fiber_action(Unit::at(2), 1, q), InputValidationError);
    CHECK_THROWS_AS(fiber_action(Unit::at(1), 1, q, 2, 0), InputValidationError);
}

TEST_CASE("fiber action composes along arrows") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto y = random_pl(rng, 8);
        const Unit X = Unit::at(4);
        for (std::int64_t g = -4; g <= 3; ++g)
            for (std::int64_t h = -3; h <= 3; ++h) {
                if (!is_groupoid_element(X.shifted(g), h) || X.n + g + h < 0) continue;
                const QuotientElement q(X.shifted(g + h), y);
                const auto two = fiber_action(X, g, fiber_action(X.shifted(g), h, q));
                CHECK(fiber_distance(two, fiber_action(X, g + h, q)) <= 1e-12);
            }
    }
}

TEST_CASE("trig polynomials and the sup-norm estimate") {
    const TrigPolynomial p({{0, 1.0}, {1, 1.0}});
    CHECK(p.degree() == 1);
    const auto e = sup_norm(p);
    CHECK(e.sampled <= 2.0 + 1e-15);
    CHECK(e.upper >= 2.0);
    CHECK(e.sampled == doctest::Approx(2.0));
    CHECK(e.grid >= 1024);
    CHECK(sup_norm(p.alpha(6)).grid >= 64 * 64);
    CHECK(p.alpha(3).coeffs().count(8) == 1);
    const TrigPolynomial q({{-3, cdouble(0, 2)}, {5, 0.5}});
    for (double t : {0.0, 0.4, 2.0}) CHECK(std::abs(q.alpha(2)(t) - q(4 * t)) < 1e-13);
    CHECK_THROWS_AS(q.alpha(60), RangeError);
}

TEST_CASE("dilation elements") {
    Rng rng(8);
    std::normal_distribution<double> nd;
    std::map<std::int64_t, cdouble> c;
    for (int k = -3; k <= 3; ++k) c[k] = cdouble(nd(rng), nd(rng));
    const TrigPolynomial x(c);
    const auto a = dilation_embed(2, x);
    CHECK(dilation_equal(a, dilation_embed(3, x.alpha(1))));
    CHECK(dilation_equal(a, dilation_embed(5, x.alpha(3))));
    CHECK_FALSE(dilation_equal(a, dilation_embed(3, x)));
    CHECK_THROWS_AS(dilation_promote(a, 1), DomainError);
    // the norm does not depend on the representing level
    const auto n0 = dilation_norm(a), n1 = dilation_norm(dilation_promote(a, 4));
    CHECK(n0.sampled <= n1.upper);
    CHECK(n1.sampled <= n0.upper);
    const auto b = dilation_embed(0, monomial(1));
    CHECK(dilation_equal(dilation_add(a, b), dilation_add(b, a)));
    CHECK(dilation_add(a, b).level == 2);
}

TEST_CASE("fiber sections F") {
    const TrigPolynomial x = monomial(1);
    const std::map<std::int64_t, cdouble> f{{-1, 1.0}, {2, 2.0}};
    const auto c0 = fiber_section_F(x, f, Unit::at(0));
    CHECK(c0.witness.size() == 1);
    CHECK(dilation_equal(c0.element, dilation_embed(0, monomial(2))));
    const auto c2 = fiber_section_F(x, f, Unit::at(2));
    CHECK(c2.witness.size() == 2);
    CHECK(dilation_equal(c2.element, dilation_embed(2, TrigPolynomial({{8, 1.0}, {1, 2.0}}))));
    const auto ci = fiber_section_F(x, f, Unit::inf());
    CHECK(dilation_equal(ci.element, c2.element));
    for (const auto* cert : {&c0, &c2, &ci}) CHECK(cert->reproduces());
    CHECK(c0.valid_over(Unit::at(0)));
    CHECK(c0.valid_over(Unit::at(5)));
    CHECK_FALSE(c2.valid_over(Unit::at(1)));
    CHECK(c2.valid_over(Unit::inf()));
}

TEST_CASE("fiber section certificates are monotone in X") {
    Rng rng(9);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        std::map<std::int64_t, cdouble> f, c;
        for (int g = -4; g <= 4; ++g)
            if (rng() % 2) f[g] = cdouble(nd(rng), nd(rng));
        for (int k = -2; k <= 2; ++k) c[k] = cdouble(nd(rng), nd(rng));
        const TrigPolynomial x(c);
        for (std::int64_t n = 0; n <= 5; ++n) {
            const auto cert = fiber_section_F(x, f, Unit::at(n));
            CHECK(cert.reproduces());
            for (std::int64_t m = n; m <= 6; ++m) CHECK(cert.valid_over(Unit::at(m)));
            CHECK(cert.valid_over(Unit::inf()));
        }
    }
}
