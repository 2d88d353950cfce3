#pragma once

// Fibers of the Wiener-Hopf bundle for two desk actions of N.
//
// Surjective case: A = continuous piecewise-linear complex functions on [0, 1]
// with alpha_1(f)(t) = f(t / 2). The fiber over X is A / I_X with
// ||x + I_n|| = sup_{[0, 2^-n]} |x| and ||x + I_inf|| = |x(0)|.
//
// Injective case: A = trigonometric polynomials with alpha_1(p)(z) = p(z^2).
// The dilation is represented by level-tagged pairs (n, x) standing for
// alpha_n^{-1}(x).

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "whlab/groupoid.hpp"

namespace whlab {

inline constexpr double kIdealTol = 1e-9;

class PiecewiseLinear {
public:
    // `breaks` strictly increasing from 0 to 1, one value per break.
    PiecewiseLinear(std::vector<double> breaks, std::vector<cdouble> values);

    static PiecewiseLinear constant(cdouble c);

    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const std::vector<cdouble>& values() const noexcept { return values_; }

    cdouble operator()(double t) const;
    // sup |f| over [lo, hi]; exact, since |f| is convex on each linear piece.
    double sup_abs(double lo = 0.0, double hi = 1.0) const;

    // alpha_n(f)(t) = f(t / 2^n).
    PiecewiseLinear alpha(std::int64_t n) const;
    // A preimage under alpha_1: g(s) = f(2s) on [0, 1/2], then constant f(1).
    PiecewiseLinear section() const;
    // A preimage under alpha_b (b-fold section).
    PiecewiseLinear section(std::int64_t b) const;

    PiecewiseLinear conj() const;
    friend PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b);
    friend PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b);
    friend PiecewiseLinear operator*(cdouble s, const PiecewiseLinear& a);

private:
    std::vector<double> breaks_;
    std::vector<cdouble> values_;
};

// sup |x y| over [lo, hi] for the (piecewise quadratic) pointwise product.
double product_sup(const PiecewiseLinear& x, const PiecewiseLinear& y, double lo = 0.0, double hi = 1.0);

// ||x + I_X|| computed as ||alpha_n(x)|| for finite X = n and |x(0)| at inf.
double quotient_norm(Unit X, const PiecewiseLinear& x);
bool ideal_contains(Unit X, const PiecewiseLinear& x, double tol = kIdealTol);
// alpha_n(x) = 0, read off the breakpoint values of alpha_n(x).
bool in_kernel(std::int64_t n, const PiecewiseLinear& x, double tol = kIdealTol);

struct QuotientElement {
    Unit X;
    PiecewiseLinear representative;
    double seminorm;

    QuotientElement(Unit X, PiecewiseLinear rep);
};

// alpha_(X, g)(y + I_{X.g}) = alpha_a(s_b(y)) + I_X for g = a - b, a, b >= 0,
// where s_b is the explicit b-fold section of alpha_b.
QuotientElement fiber_action(Unit X, std::int64_t g, const QuotientElement& q, std::int64_t a, std::int64_t b);
// Canonical decomposition a = max(g, 0), b = max(-g, 0).
QuotientElement fiber_action(Unit X, std::int64_t g, const QuotientElement& q);

// Distance between two elements of the same fiber, in the quotient norm.
double fiber_distance(const QuotientElement& p, const QuotientElement& q);

class TrigPolynomial {
public:
    TrigPolynomial() = default;
    explicit TrigPolynomial(std::map<std::int64_t, cdouble> coeffs);

    const std::map<std::int64_t, cdouble>& coeffs() const noexcept { return coeffs_; }
    std::int64_t degree() const;

    cdouble operator()(double theta) const;
    // alpha_n(p)(z) = p(z^{2^n}): coefficient k moves to index 2^n k.
    TrigPolynomial alpha(std::int64_t n) const;

    friend TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b);
    friend TrigPolynomial operator*(cdouble s, const TrigPolynomial& a);

    // Largest coefficient difference.
    friend double coeff_distance(const TrigPolynomial& a, const TrigPolynomial& b);

private:
    std::map<std::int64_t, cdouble> coeffs_;
};

struct NormEstimate {
    double sampled = 0.0;  // max modulus on the grid, a lower bound
    double upper = 0.0;    // sampled / (1 - pi d / M)
    std::int64_t grid = 0;
};

// Max modulus on an M-point grid with M >= 1024 and M >= 64 d.
NormEstimate sup_norm(const TrigPolynomial& p);

struct DilationElement {
    std::int64_t level = 0;
    TrigPolynomial payload;
};

DilationElement dilation_embed(std::int64_t n, const TrigPolynomial& x);
// (n, x) -> (m, alpha_{m-n}(x)) for m >= n.
DilationElement dilation_promote(const DilationElement& e, std::int64_t m);
bool dilation_equal(const DilationElement& a, const DilationElement& b, double tol = kDefaultTol);
DilationElement dilation_add(const DilationElement& a, const DilationElement& b);
NormEstimate dilation_norm(const DilationElement& e);

struct CertificateTerm {
    std::int64_t g = 0;
    cdouble weight;
    DilationElement generator;  // alpha_g^{-1}(x)
};

struct FiberMembershipCertificate {
    Unit X;
    DilationElement element;
    std::vector<CertificateTerm> witness;

    // Every contributing g lies in Y.
    bool valid_over(Unit Y) const;
    // Rebuilds the element from the witness and compares.
    bool reproduces(double tol = kDefaultTol) const;
};

// F_{x,f}(X) = sum over g in supp f with g <= X of f(g) alpha_g^{-1}(x).
FiberMembershipCertificate fiber_section_F(const TrigPolynomial& x, const std::map<std::int64_t, cdouble>& f, Unit X);

}  // namespace whlab
