#pragma once

// Condition (H) checker: a homotopy phi_t of Omega should keep the boundary
// invariant, send every point into the orbit tau(P) below itself for t > 0,
// start at the identity and end in the boundary. Two instances: the half-line
// [0, inf] and the unitary model Z with phi_t(U) = exp(i(1 - t)g(U) + i t pi).

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "whlab/fell.hpp"
#include "whlab/moebius.hpp"

namespace whlab {

template <typename Point>
struct HomotopySpec {
    std::string model;
    std::function<Point(double, const Point&)> phi;
    std::function<bool(const Point&)> in_omega;
    std::function<bool(const Point&)> boundary_test;
    std::function<bool(const Point&)> orbit_test;
    // order_test(Y, X): Y is contained in X.
    std::function<bool(const Point&, const Point&)> order_test;
    std::function<double(const Point&, const Point&)> distance;
    std::function<std::string(const Point&)> describe;
    double jump_threshold = 0.25;
};

struct ClauseResult {
    bool pass = true;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double max_error = 0.0;
};

struct HomotopyReport {
    std::string model;
    // boundary_invariance, orbit_and_order, endpoints, continuity
    std::map<std::string, ClauseResult> clauses;
    std::vector<std::string> failures;  // first few, one line each
    std::size_t samples = 0;
    std::size_t grid = 0;

    bool passed() const {
        for (const auto& [name, c] : clauses)
            if (!c.pass) return false;
        return true;
    }
};

inline constexpr std::size_t kMaxListedFailures = 20;

inline std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) throw InputValidationError("t-grid needs at least two points");
    std::vector<double> t(points);
    for (std::size_t j = 0; j < points; ++j) t[j] = static_cast<double>(j) / static_cast<double>(points - 1);
    t.back() = 1.0;
    return t;
}

template <typename Point>
HomotopyReport verify_condition_H(const HomotopySpec<Point>& spec, const std::vector<double>& t_grid,
                                  const std::vector<Point>& samples, double tol) {
    if (t_grid.empty() || t_grid.front() != 0.0 || t_grid.back() != 1.0)
        throw InputValidationError("verify_condition_H: t-grid must run from 0 to 1");
    for (std::size_t j = 1; j < t_grid.size(); ++j)
        if (!(t_grid[j] > t_grid[j - 1])) throw InputValidationError("verify_condition_H: t-grid must increase");
    for (const auto& x : samples)
        if (!spec.in_omega(x))
            throw InputValidationError("verify_condition_H: sample " + spec.describe(x) + " lies outside Omega");

    HomotopyReport report;
    report.model = spec.model;
    report.samples = samples.size();
    report.grid = t_grid.size();
    for (const char* name : {"boundary_invariance", "orbit_and_order", "endpoints", "continuity"})
        report.clauses[name] = ClauseResult{};

    auto record = [&](const char* clause, bool ok, double err, const std::string& what) {
        auto& c = report.clauses[clause];
        ++c.checks;
        c.max_error = std::max(c.max_error, err);
        if (ok) return;
        c.pass = false;
        ++c.violations;
        if (report.failures.size() < kMaxListedFailures) report.failures.push_back(std::string(clause) + ": " + what);
    };
    auto at = [&](double t, const Point& x) {
        std::ostringstream os;
        os << "t=" << t << " X=" << spec.describe(x);
        return os.str();
    };

    for (const auto& x : samples) {
        const bool on_boundary = spec.boundary_test(x);
        std::vector<Point> path;
        path.reserve(t_grid.size());
        bool path_ok = true;
        for (const double t : t_grid) {
            try {
                path.push_back(spec.phi(t, x));
            } catch (const Error& e) {
                record("orbit_and_order", false, 0.0, at(t, x) + " phi failed: " + e.what());
                path_ok = false;
                break;
            }
            const Point& y = path.back();
            if (on_boundary) record("boundary_invariance", spec.boundary_test(y), 0.0, at(t, x) + " left the boundary");
            if (t > 0.0) {
                bool orbit = false, order = false;
                std::string why;
                try {
                    orbit = spec.orbit_test(y);
                    order = spec.order_test(y, x);
                } catch (const Error& e) {
                    why = std::string(" (") + e.what() + ")";
                }
                record("orbit_and_order", orbit && order, 0.0,
                       at(t, x) + (orbit ? "" : " not in the orbit") + (order ? "" : " not below X") + why);
            }
        }
        if (!path_ok) continue;
        const double drift = spec.distance(path.front(), x);
        record("endpoints", drift <= tol, drift, at(0.0, x) + " phi_0 differs from the identity");
        record("endpoints", spec.boundary_test(path.back()), 0.0, at(1.0, x) + " phi_1 misses the boundary");
        for (std::size_t j = 1; j < path.size(); ++j) {
            const double jump = spec.distance(path[j], path[j - 1]);
            record("continuity", jump <= spec.jump_threshold, jump, at(t_grid[j], x) + " jumps");
        }
    }
    return report;
}

// ---------------------------------------------------------------- half-line

using HalfLinePoint = ExtendedReal;

// x / (1 + x), with inf at 1: a metric for the one-point compactification.
inline double halfline_chart(const HalfLinePoint& x) { return x.infinite ? 1.0 : x.value / (1.0 + x.value); }

// (1 - t)x / sqrt((1 - (1 - t)^2)x^2 + 1); at inf the closed-form limit.
inline HalfLinePoint halfline_phi(double t, const HalfLinePoint& x) {
    const double s = 1.0 - t;
    const double c = 1.0 - s * s;
    if (x.infinite) return c > 0.0 ? HalfLinePoint::of(s / std::sqrt(c)) : HalfLinePoint::inf();
    return HalfLinePoint::of(s * x.value / std::sqrt(c * x.value * x.value + 1.0));
}

// Without the normalizer: (1 - t)x, which keeps inf at infinity for t < 1.
inline HalfLinePoint halfline_phi_unnormalized(double t, const HalfLinePoint& x) {
    if (x.infinite) return t < 1.0 ? HalfLinePoint::inf() : HalfLinePoint::of(0.0);
    return HalfLinePoint::of((1.0 - t) * x.value);
}

inline HomotopySpec<HalfLinePoint> halfline_spec(double tol, bool mutated = false) {
    HomotopySpec<HalfLinePoint> s;
    s.model = mutated ? "halfline_unnormalized" : "halfline";
    s.phi = mutated ? halfline_phi_unnormalized : halfline_phi;
    s.in_omega = [](const HalfLinePoint& x) { return x.infinite || (std::isfinite(x.value) && x.value >= 0.0); };
    s.boundary_test = [tol](const HalfLinePoint& x) { return !x.infinite && x.value <= tol; };
    s.orbit_test = [](const HalfLinePoint& x) { return !x.infinite && x.value >= 0.0; };
    s.order_test = [tol](const HalfLinePoint& y, const HalfLinePoint& x) {
        return x.infinite || (!y.infinite && y.value <= x.value + tol);
    };
    s.distance = [](const HalfLinePoint& a, const HalfLinePoint& b) {
        return std::abs(halfline_chart(a) - halfline_chart(b));
    };
    s.describe = [](const HalfLinePoint& x) {
        if (x.infinite) return std::string("inf");
        std::ostringstream os;
        os << x.value;
        return os.str();
    };
    return s;
}

// 0, inf, and count - 2 points spread over several scales.
inline std::vector<HalfLinePoint> halfline_samples(std::size_t count, Rng& rng) {
    std::vector<HalfLinePoint> out{HalfLinePoint::of(0.0), HalfLinePoint::inf()};
    std::uniform_real_distribution<double> exponent(-4.0, 8.0);
    while (out.size() < count) out.push_back(HalfLinePoint::of(std::pow(10.0, exponent(rng))));
    return out;
}

// ------------------------------------------------------------------ unitary

// g(U) for the branch g(e^{i theta}) = theta in [0, pi].
template <typename Real>
Hermitian<Real> angle_log(const Unitary<Real>& u) {
    const auto dec = unitary_eig(u);
    const Real pi = std::numbers::pi_v<Real>;
    for (const auto& lambda : dec.eigenvalues)
        if (lambda.imag() < -u.tol()) {
            std::ostringstream os;
            os << "angle_log: not in Z (eigenvalue " << lambda << ")";
            throw DomainError(os.str());
        }
    return Hermitian<Real>(functional_calculus(dec, [pi](std::complex<Real> z) {
                               const Real theta = detail::principal_arg(z);
                               return theta < 0 ? (theta < -pi / 2 ? pi : Real(0)) : std::min(theta, pi);
                           }),
                           u.tol());
}

// Re of each eigenvalue of U1 on the spectral projections of U2 is at most that of U2.
template <typename Real>
bool order_containment_unitary(const CMatrix<Real>& u1, const SpectralDecomposition<Real>& frame, Real tol) {
    bool below = true;
    for (std::size_t k = 0; k < frame.projections.size(); ++k) {
        const CMatrix<Real>& e = frame.projections[k];
        const std::complex<Real> mu = (e * u1).trace() / e.trace();
        if ((u1 * e - mu * e).norm() > 100 * tol)
            throw DomainError("order_containment_unitary: not comparable via shared frame");
        if (mu.real() > frame.eigenvalues[k].real() + tol) below = false;
    }
    return below;
}

template <typename Real>
bool order_containment_unitary(const ZPoint<Real>& u1, const ZPoint<Real>& u2) {
    return order_containment_unitary(u1.matrix(), u2.decomposition(), std::max(u1.tol(), u2.tol()));
}

// A unitary together with its spectral decomposition.
template <typename Real>
struct UnitaryPoint {
    Unitary<Real> u;
    SpectralDecomposition<Real> dec;

    explicit UnitaryPoint(Unitary<Real> v) : u(std::move(v)), dec(unitary_eig(u)) {}
};

// exp(i(1 - t)g(U) + i t pi), or with the sign of the pi term flipped.
template <typename Real>
UnitaryPoint<Real> unitary_phi(double t, const UnitaryPoint<Real>& x, bool mutated = false) {
    const Real pi = std::numbers::pi_v<Real>;
    const Real s = Real(1) - Real(t);
    const Real shift = mutated ? -Real(t) * pi : Real(t) * pi;
    const CMatrix<Real> m = functional_calculus(x.dec, [&](std::complex<Real> z) {
        Real theta = detail::principal_arg(z);
        if (theta < 0) theta = theta < -pi / 2 ? pi : Real(0);
        return std::polar(Real(1), s * theta + shift);
    });
    return UnitaryPoint<Real>(Unitary<Real>(m, 10 * x.u.tol()));
}

template <typename Real>
HomotopySpec<UnitaryPoint<Real>> unitary_spec(Real tol, bool mutated = false) {
    using P = UnitaryPoint<Real>;
    const Real cluster = Real(kClusterThreshold);
    HomotopySpec<P> s;
    s.model = mutated ? "unitary_wrong_sign" : "unitary";
    s.phi = [mutated](double t, const P& x) { return unitary_phi(t, x, mutated); };
    s.in_omega = [](const P& x) { return classify_spectrum(x.dec, x.u.tol()) != ZClass::outside; };
    s.boundary_test = [cluster](const P& x) {
        for (const auto& l : x.dec.eigenvalues)
            if (std::abs(l + Real(1)) <= cluster) return true;
        return false;
    };
    // tau(P) is the Cayley image of the positive cone: inside Z with no eigenvalue at 1
    s.orbit_test = [cluster](const P& x) {
        if (classify_spectrum(x.dec, x.u.tol()) == ZClass::outside) return false;
        for (const auto& l : x.dec.eigenvalues)
            if (std::abs(l - Real(1)) <= cluster) return false;
        return true;
    };
    s.order_test = [tol](const P& y, const P& x) { return order_containment_unitary(y.u.matrix(), x.dec, tol); };
    s.distance = [](const P& a, const P& b) { return double(operator_norm(CMatrix<Real>(a.u.matrix() - b.u.matrix()))); };
    s.describe = [](const P& x) {
        std::ostringstream os;
        os << "spec{";
        for (std::size_t k = 0; k < x.dec.eigenvalues.size(); ++k)
            os << (k ? "," : "") << detail::principal_arg(x.dec.eigenvalues[k]);
        os << "}";
        return os.str();
    };
    return s;
}

// V diag(e^{i theta}) V* with theta in [0, pi]; includes I, -I, and samples
// with a forced eigenvalue -1 or 1.
template <typename Real>
std::vector<UnitaryPoint<Real>> unitary_samples(Eigen::Index d, std::size_t count, Rng& rng) {
    const Real pi = std::numbers::pi_v<Real>;
    std::vector<UnitaryPoint<Real>> out;
    out.emplace_back(Unitary<Real>(CMatrix<Real>::Identity(d, d)));
    out.emplace_back(Unitary<Real>(CMatrix<Real>(-CMatrix<Real>::Identity(d, d))));
    std::uniform_real_distribution<double> angle(0.0, 1.0);
    while (out.size() < count) {
        const CMatrix<Real> v = random_unitary<Real>(d, rng).matrix();
        Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> diag(d);
        for (Eigen::Index k = 0; k < d; ++k) diag(k) = std::polar(Real(1), Real(angle(rng)) * pi);
        const std::size_t kind = out.size() % 4;
        if (kind == 0) diag(0) = -1;  // boundary
        if (kind == 1) diag(0) = 1;
        out.emplace_back(Unitary<Real>(CMatrix<Real>(v * diag.asDiagonal() * v.adjoint())));
    }
    return out;
}

}  // namespace whlab
