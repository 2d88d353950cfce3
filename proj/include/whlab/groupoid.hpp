#pragma once

// The Wiener-Hopf groupoid of N in Z. Units are X in N u {inf}, where X = n is
// the set (-inf, n]; (X, g) is an arrow when X + g >= 0 or X = inf, with
// r(X, g) = X and s(X, g) = X + g. Sections take values in the constant bundle
// M_k, and the arrow (X, g) acts on fibers by alpha_g.

#include <cstdint>
#include <map>
#include <string>

#include "whlab/toeplitz.hpp"

namespace whlab {

struct Unit {
    std::int64_t n = 0;  // 0 when infinite
    bool infinite = false;

    static Unit at(std::int64_t n) { return {n, false}; }
    static Unit inf() { return {0, true}; }
    Unit shifted(std::int64_t g) const { return infinite ? *this : Unit{n + g, false}; }
    std::string to_string() const { return infinite ? "inf" : std::to_string(n); }
    auto operator<=>(const Unit&) const = default;
};

struct GroupoidElement {
    Unit X;
    std::int64_t g = 0;

    Unit range() const { return X; }
    Unit source() const { return X.shifted(g); }
    GroupoidElement inverse() const { return {X.shifted(g), -g}; }
    std::string to_string() const { return "(" + X.to_string() + "," + std::to_string(g) + ")"; }
    auto operator<=>(const GroupoidElement&) const = default;
};

// (X, g) belongs to the groupoid iff X.g lies in Omega.
bool is_groupoid_element(Unit X, std::int64_t g);

// Finite units 0..x_max plus inf, and |g| <= g_max.
struct Window {
    std::int64_t x_max = 0;
    std::int64_t g_max = 0;

    bool contains(const GroupoidElement& e) const;
    bool operator==(const Window&) const = default;
};

class GroupoidSection {
public:
    GroupoidSection(Eigen::Index k, Window window, EndomorphismAction action);

    Eigen::Index fiber_dim() const noexcept { return k_; }
    const Window& window() const noexcept { return window_; }
    const EndomorphismAction& action() const noexcept { return act_; }
    const std::map<GroupoidElement, MatrixXc>& values() const noexcept { return values_; }

    // Throws DomainError off the groupoid and RangeError outside the window.
    void set(const GroupoidElement& e, const MatrixXc& value);
    void add(const GroupoidElement& e, const MatrixXc& value);
    MatrixXc at(const GroupoidElement& e) const;  // zero off the support

    // Largest entrywise difference over the union of supports.
    double distance(const GroupoidSection& other) const;

private:
    Eigen::Index k_;
    Window window_;
    EndomorphismAction act_;
    std::map<GroupoidElement, MatrixXc> values_;
};

// (phi * psi)(X, s) = sum_t phi(X, t) alpha_t(psi(X + t, s - t)).
GroupoidSection convolve(const GroupoidSection& phi, const GroupoidSection& psi);

// phi*(X, s) = alpha_s(phi(X + s, -s)*).
GroupoidSection involute(const GroupoidSection& phi);

// Max over units of the row sums (fixed range) and column sums (fixed source) of fiber norms.
double i_norm(const GroupoidSection& phi);

struct Lift {
    GroupoidSection tilde;
    SymbolFunction hat;
};

// f~(X, s) = f(s) on every arrow of the window, and the reflected symbol f^.
Lift lift_and_hat(const SymbolFunction& f, const Window& window, const EndomorphismAction& action);

// Lambda at the unit X0 = 0 on l^2({0..N}) (x) C^k: block (m, n) is
// alpha_m(phi(m, n - m)). Needs window.x_max >= N.
TruncatedOperator lambda_rep(const GroupoidSection& phi, std::int64_t N);

// R_a(psi)(X, s) = alpha_a(psi(X + a, s - a)).
GroupoidSection shift_R(std::int64_t a, const GroupoidSection& psi);

}  // namespace whlab
