#include "whlab/toeplitz.hpp"

#include <sstream>

namespace whlab {

namespace {

MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
    MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

VectorXc vec(const MatrixXc& x) { return Eigen::Map<const VectorXc>(x.data(), x.size()); }

MatrixXc unvec(const VectorXc& v, Eigen::Index k) { return Eigen::Map<const MatrixXc>(v.data(), k, k); }

MatrixXc matrix_unit(Eigen::Index k, Eigen::Index i, Eigen::Index j) {
    MatrixXc e = MatrixXc::Zero(k, k);
    e(i, j) = 1;
    return e;
}

void require_fiber(const MatrixXc& x, Eigen::Index k, const char* who) {
    if (x.rows() != k || x.cols() != k) {
        std::ostringstream os;
        os << who << ": expected a " << k << "x" << k << " matrix, got " << x.rows() << "x" << x.cols();
        throw InputValidationError(os.str());
    }
    if (!all_finite(x)) throw InputValidationError(std::string(who) + ": non-finite entry");
}

}  // namespace

EndomorphismAction EndomorphismAction::identity(Eigen::Index k) {
    if (k < 1) throw InputValidationError("identity action: fiber dimension must be positive");
    EndomorphismAction act;
    act.k_ = k;
    act.gen_ = MatrixXc::Identity(k * k, k * k);
    act.description_ = "identity";
    act.finish(kDefaultTol);
    return act;
}

EndomorphismAction EndomorphismAction::conjugation(const MatrixXc& u, double tol) {
    const Unitary<double> checked(u, tol);
    EndomorphismAction act;
    act.k_ = u.rows();
    // vec(u* x u) = (u^T (x) u*) vec(x)
    act.gen_ = kron(u.transpose(), u.adjoint());
    act.description_ = "conjugation";
    act.finish(tol);
    return act;
}

EndomorphismAction EndomorphismAction::from_generator(Eigen::Index k, const MatrixXc& generator, double tol) {
    if (k < 1 || generator.rows() != k * k || generator.cols() != k * k)
        throw InputValidationError("action generator must be k^2 x k^2");
    if (!all_finite(generator)) throw InputValidationError("action generator: non-finite entry");
    EndomorphismAction act;
    act.k_ = k;
    act.gen_ = generator;
    act.description_ = "generator";
    act.finish(tol);
    return act;
}

void EndomorphismAction::finish(double tol) {
    auto alpha = [&](const MatrixXc& x) { return unvec(gen_ * vec(x), k_); };
    const double scale = std::max(1.0, gen_.norm());
    for (Eigen::Index i = 0; i < k_; ++i)
        for (Eigen::Index j = 0; j < k_; ++j) {
            const MatrixXc eij = alpha(matrix_unit(k_, i, j));
            if ((eij.adjoint() - alpha(matrix_unit(k_, j, i))).norm() > tol * scale)
                throw InputValidationError("action generator is not *-preserving");
            for (Eigen::Index m = 0; m < k_; ++m)
                for (Eigen::Index l = 0; l < k_; ++l) {
                    // E_ij E_ml = delta_jm E_il
                    const MatrixXc prod = eij * alpha(matrix_unit(k_, m, l));
                    const MatrixXc target = j == m ? alpha(matrix_unit(k_, i, l)) : MatrixXc::Zero(k_, k_);
                    if ((prod - target).norm() > tol * scale * scale)
                        throw InputValidationError("action generator is not multiplicative");
                }
        }
    const double smin = min_singular_value(gen_);
    injective_ = smin > tol;
    surjective_ = injective_;
    unital_ = (alpha(MatrixXc::Identity(k_, k_)) - MatrixXc::Identity(k_, k_)).norm() <= tol * scale;
    has_inverse_ = injective_;
    if (has_inverse_) inv_ = gen_.partialPivLu().solve(MatrixXc::Identity(k_ * k_, k_ * k_));
}

MatrixXc EndomorphismAction::apply(const MatrixXc& x, std::int64_t a) const {
    if (a < 0) throw DomainError("alpha_a: a must be nonnegative (use apply_signed)");
    require_fiber(x, k_, "alpha_a");
    VectorXc v = vec(x);
    for (std::int64_t s = 0; s < a; ++s) v = gen_ * v;
    return unvec(v, k_);
}

MatrixXc EndomorphismAction::apply_signed(const MatrixXc& x, std::int64_t g) const {
    if (g >= 0) return apply(x, g);
    if (!has_inverse_) throw DomainError("alpha_g for g < 0 needs an invertible action");
    require_fiber(x, k_, "alpha_g");
    VectorXc v = vec(x);
    for (std::int64_t s = 0; s < -g; ++s) v = inv_ * v;
    return unvec(v, k_);
}

TruncatedOperator::TruncatedOperator(std::int64_t row_level, std::int64_t col_level, Eigen::Index k)
    : rows_(row_level), cols_(col_level), k_(k) {
    if (row_level < 0 || col_level < 0 || k < 1) throw InputValidationError("truncated operator: bad shape");
    m_ = MatrixXc::Zero((rows_ + 1) * k_, (cols_ + 1) * k_);
}

TruncatedOperator::TruncatedOperator(std::int64_t row_level, std::int64_t col_level, Eigen::Index k, MatrixXc dense)
    : TruncatedOperator(row_level, col_level, k) {
    if (dense.rows() != m_.rows() || dense.cols() != m_.cols())
        throw InputValidationError("truncated operator: dense matrix has the wrong size");
    if (!all_finite(dense)) throw InputValidationError("truncated operator: non-finite entry");
    m_ = std::move(dense);
}

TruncatedOperator TruncatedOperator::adjoint() const {
    return TruncatedOperator(cols_, rows_, k_, m_.adjoint());
}

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (a.cols_ != b.rows_ || a.k_ != b.k_) throw InputValidationError("truncated operator product: level mismatch");
    return TruncatedOperator(a.rows_, b.cols_, a.k_, a.m_ * b.m_);
}

TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.k_ != b.k_)
        throw InputValidationError("truncated operator difference: shape mismatch");
    return TruncatedOperator(a.rows_, a.cols_, a.k_, a.m_ - b.m_);
}

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.k_ != b.k_)
        throw InputValidationError("truncated operator sum: shape mismatch");
    return TruncatedOperator(a.rows_, a.cols_, a.k_, a.m_ + b.m_);
}

TruncatedOperator identity_operator(std::int64_t level, Eigen::Index k) {
    return TruncatedOperator(level, level, k, MatrixXc::Identity((level + 1) * k, (level + 1) * k));
}

std::vector<std::int64_t> SymbolFunction::support() const {
    std::vector<std::int64_t> out;
    for (const auto& [g, v] : values_) out.push_back(g);
    return out;
}

std::int64_t SymbolFunction::radius() const {
    std::int64_t r = 0;
    for (const auto& [g, v] : values_) r = std::max(r, g < 0 ? -g : g);
    return r;
}

void SymbolFunction::set(std::int64_t g, const MatrixXc& value) {
    require_fiber(value, k_, "symbol value");
    values_[g] = value;
}

MatrixXc SymbolFunction::at(std::int64_t g) const {
    const auto it = values_.find(g);
    return it == values_.end() ? MatrixXc::Zero(k_, k_) : it->second;
}

SymbolFunction SymbolFunction::delta(std::int64_t g, const MatrixXc& value) {
    SymbolFunction f(value.rows());
    f.set(g, value);
    return f;
}

TruncatedOperator rep_pi(const MatrixXc& x, const EndomorphismAction& act, std::int64_t N) {
    const Eigen::Index k = act.fiber_dim();
    require_fiber(x, k, "rep_pi");
    TruncatedOperator out(N, N, k);
    MatrixXc block = x;
    for (std::int64_t a = 0; a <= N; ++a) {
        out.block(a, a) = block;
        if (a < N) block = act.apply(block, 1);
    }
    return out;
}

TruncatedOperator isometry_V(std::int64_t a, std::int64_t N, Eigen::Index k) {
    if (N < 0) throw InputValidationError("isometry_V: negative truncation level");
    if (a < 0 || a > N) {
        std::ostringstream os;
        os << "isometry_V: shift " << a << " outside [0, " << N << "]";
        throw RangeError(os.str());
    }
    TruncatedOperator out(N + a, N, k);
    for (std::int64_t m = a; m <= N + a; ++m) out.block(m, m - a) = MatrixXc::Identity(k, k);
    return out;
}

TruncatedOperator wiener_hopf(const SymbolFunction& f, const EndomorphismAction& act, std::int64_t N) {
    const Eigen::Index k = act.fiber_dim();
    if (f.fiber_dim() != k) throw InputValidationError("wiener_hopf: symbol and action fiber dimensions differ");
    if (f.radius() > N) {
        std::ostringstream os;
        os << "wiener_hopf: symbol support radius " << f.radius() << " exceeds truncation level " << N;
        throw RangeError(os.str());
    }
    TruncatedOperator out(N, N, k);
    for (const auto& [g, value] : f.values()) {
        for (std::int64_t m = std::max<std::int64_t>(0, g); m <= std::min(N, N + g); ++m)
            out.block(m, m - g) = act.apply(value, m);
    }
    return out;
}

double covariance_residual(const MatrixXc& x, std::int64_t a, const EndomorphismAction& act, std::int64_t N) {
    const TruncatedOperator v = isometry_V(a, N, act.fiber_dim());
    const TruncatedOperator lhs = v.adjoint() * rep_pi(x, act, N + a) * v;
    const TruncatedOperator rhs = rep_pi(act.apply(x, a), act, N);
    return (lhs - rhs).norm();
}

SymbolFunction symbol_convolve(const SymbolFunction& f, const SymbolFunction& h, const EndomorphismAction& act) {
    if (f.fiber_dim() != h.fiber_dim() || f.fiber_dim() != act.fiber_dim())
        throw InputValidationError("symbol_convolve: fiber dimension mismatch");
    SymbolFunction out(f.fiber_dim());
    std::map<std::int64_t, MatrixXc> acc;
    for (const auto& [t, ft] : f.values())
        for (const auto& [u, hu] : h.values()) {
            const MatrixXc term = ft * act.apply_signed(hu, -t);
            auto [it, fresh] = acc.try_emplace(t + u, term);
            if (!fresh) it->second += term;
        }
    for (const auto& [g, v] : acc) out.set(g, v);
    return out;
}

SymbolFunction adjoint_symbol(const SymbolFunction& f, const EndomorphismAction& act) {
    SymbolFunction out(f.fiber_dim());
    for (const auto& [g, v] : f.values()) out.set(-g, act.apply_signed(MatrixXc(v.adjoint()), g));
    return out;
}

SymbolFunction hat(const SymbolFunction& f) {
    SymbolFunction out(f.fiber_dim());
    for (const auto& [g, v] : f.values()) out.set(-g, MatrixXc(v / std::sqrt(modular_function(-g))));
    return out;
}

}  // namespace whlab
