#pragma once

// Truncated Wiener-Hopf operators for the discrete model N in Z with fiber M_k.
//
// Operators act between truncated modules l^2({0..R}) (x) C^k. A truncated
// operator carries separate row and column levels so that the isometries
// V_a : l^2({0..N}) -> l^2({0..N+a}) are exact isometries and the usual shift
// identities hold without boundary terms.

#include <cstdint>
#include <map>
#include <string>

#include "whlab/spectra.hpp"

namespace whlab {

// Modular function of Z; all desk groups are unimodular.
inline double modular_function(std::int64_t) { return 1.0; }

// alpha_a = alpha_1^a on M_k, with alpha_1 stored as a k^2 x k^2 matrix acting on
// column-major vectorised matrices. An inverse generator, when present, makes
// alpha_g available for negative g.
class EndomorphismAction {
public:
    static EndomorphismAction identity(Eigen::Index k);
    // alpha_1(x) = u* x u for a unitary u.
    static EndomorphismAction conjugation(const MatrixXc& u, double tol = kDefaultTol);
    // Validates multiplicativity and *-preservation on matrix units.
    static EndomorphismAction from_generator(Eigen::Index k, const MatrixXc& generator, double tol = kDefaultTol);

    Eigen::Index fiber_dim() const noexcept { return k_; }
    const MatrixXc& generator() const noexcept { return gen_; }
    bool injective() const noexcept { return injective_; }
    bool surjective() const noexcept { return surjective_; }
    bool unital() const noexcept { return unital_; }
    bool invertible() const noexcept { return has_inverse_; }
    const std::string& description() const noexcept { return description_; }

    // alpha_a(x) for a >= 0, by a-fold application of the generator.
    MatrixXc apply(const MatrixXc& x, std::int64_t a) const;
    // alpha_g(x) for any integer g; negative g needs an invertible action.
    MatrixXc apply_signed(const MatrixXc& x, std::int64_t g) const;

private:
    EndomorphismAction() = default;
    void finish(double tol);

    Eigen::Index k_ = 1;
    MatrixXc gen_;
    MatrixXc inv_;
    bool has_inverse_ = false;
    bool injective_ = true;
    bool surjective_ = true;
    bool unital_ = true;
    std::string description_;
};

class TruncatedOperator {
public:
    // Zero operator from level `col_level` to level `row_level`.
    TruncatedOperator(std::int64_t row_level, std::int64_t col_level, Eigen::Index k);
    TruncatedOperator(std::int64_t row_level, std::int64_t col_level, Eigen::Index k, MatrixXc dense);

    std::int64_t row_level() const noexcept { return rows_; }
    std::int64_t col_level() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    // The common level N of a square operator.
    std::int64_t level() const noexcept { return rows_; }
    Eigen::Index fiber_dim() const noexcept { return k_; }
    const MatrixXc& dense() const noexcept { return m_; }

    auto block(std::int64_t m, std::int64_t n) { return m_.block(m * k_, n * k_, k_, k_); }
    auto block(std::int64_t m, std::int64_t n) const { return m_.block(m * k_, n * k_, k_, k_); }

    TruncatedOperator adjoint() const;
    double norm() const { return operator_norm(m_); }
    double max_abs_entry() const { return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0; }

    friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);
    friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b);
    friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b);

private:
    std::int64_t rows_;
    std::int64_t cols_;
    Eigen::Index k_;
    MatrixXc m_;
};

TruncatedOperator identity_operator(std::int64_t level, Eigen::Index k);

// Finitely supported M_k-valued function on Z.
class SymbolFunction {
public:
    explicit SymbolFunction(Eigen::Index k) : k_(k) {}

    Eigen::Index fiber_dim() const noexcept { return k_; }
    const std::map<std::int64_t, MatrixXc>& values() const noexcept { return values_; }
    std::vector<std::int64_t> support() const;
    // Largest |g| over the support, 0 for the zero symbol.
    std::int64_t radius() const;

    void set(std::int64_t g, const MatrixXc& value);
    MatrixXc at(std::int64_t g) const;  // zero off the support

    static SymbolFunction delta(std::int64_t g, const MatrixXc& value);

private:
    Eigen::Index k_;
    std::map<std::int64_t, MatrixXc> values_;
};

// pi(x): block diagonal with block alpha_a(x) at position a.
TruncatedOperator rep_pi(const MatrixXc& x, const EndomorphismAction& act, std::int64_t N);

// V_a from level N to level N + a: (V_a xi)(m) = xi(m - a) for m >= a.
TruncatedOperator isometry_V(std::int64_t a, std::int64_t N, Eigen::Index k = 1);

// W_f on level N: block (m, m - g) is alpha_m(f(g)) whenever 0 <= m - g <= N.
TruncatedOperator wiener_hopf(const SymbolFunction& f, const EndomorphismAction& act, std::int64_t N);

// || V_a* pi(x) V_a - pi(alpha_a(x)) || on level N.
double covariance_residual(const MatrixXc& x, std::int64_t a, const EndomorphismAction& act, std::int64_t N);

// (f * h)(g) = sum_t f(t) alpha_{-t}(h(g - t)); W_f W_h = W_{f*h} away from the boundary.
SymbolFunction symbol_convolve(const SymbolFunction& f, const SymbolFunction& h, const EndomorphismAction& act);

// f°(g) = alpha_{-g}(f(-g)*), so that W_f* = W_{f°}.
SymbolFunction adjoint_symbol(const SymbolFunction& f, const EndomorphismAction& act);

// f^(g) = f(-g) Delta(g)^{-1/2}.
SymbolFunction hat(const SymbolFunction& f);

}  // namespace whlab
