#pragma once

// Dense complex spectral kernel: cyclic Jacobi for Hermitian matrices, unitary
// spectra through the inverse Cayley transform, and functional calculus.
// Everything is templated on the real scalar type; `double` is the working
// precision of the rest of the toolkit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "whlab/errors.hpp"

namespace whlab {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using MatrixXc = CMatrix<double>;
using VectorXc = CVector<double>;
using cdouble = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kClusterThreshold = 1e-8;
inline constexpr std::uint64_t kDefaultPhaseSeed = 0x5eed'c0de'1234ULL;

template <typename Real>
CMatrix<Real> identity(Eigen::Index d) {
    return CMatrix<Real>::Identity(d, d);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(std::real(m(i, j))) || !std::isfinite(std::imag(m(i, j)))) return false;
    return true;
}

namespace detail {

template <typename Real>
struct RawEigen {
    std::vector<Real> values;  // ascending
    CMatrix<Real> vectors;     // columns, orthonormal
    int sweeps = 0;
};

// Cyclic complex Jacobi on a Hermitian matrix. Each (p,q) rotation first removes
// the phase of a_pq with diag(1, e^{-i phi}) and then applies the real rotation.
template <typename Real>
RawEigen<Real> cyclic_jacobi(const CMatrix<Real>& input, int max_sweeps = 100) {
    using C = std::complex<Real>;
    const Eigen::Index n = input.rows();
    CMatrix<Real> a = Real(0.5) * (input + input.adjoint());
    CMatrix<Real> v = CMatrix<Real>::Identity(n, n);
    const Real scale = std::max(a.norm(), std::numeric_limits<Real>::min());
    const Real eps = std::numeric_limits<Real>::epsilon();

    auto off_norm = [&] {
        Real s = 0;
        for (Eigen::Index q = 1; q < n; ++q)
            for (Eigen::Index p = 0; p < q; ++p) s += std::norm(a(p, q));
        return std::sqrt(2 * s);
    };

    int sweep = 0;
    while (off_norm() > eps * scale * Real(std::max<Eigen::Index>(n, 1))) {
        if (sweep >= max_sweeps) throw NumericalError("Jacobi eigensolver did not converge", sweep);
        ++sweep;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Real r = std::abs(a(p, q));
                if (r <= eps * eps * scale) continue;
                const C phase = a(p, q) / r;  // e^{i phi}
                const Real app = std::real(a(p, p));
                const Real aqq = std::real(a(q, q));
                const Real tau = (aqq - app) / (2 * r);
                const Real t = (tau >= 0 ? Real(1) : Real(-1)) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                const Real c = 1 / std::sqrt(1 + t * t);
                const Real s = t * c;
                // G = D R restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                const C gpp = c, gpq = s;
                const C gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const C akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                    const C vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const C apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = a(q, p) = C(0);
                a(p, p) = C(std::real(a(p, p)));
                a(q, q) = C(std::real(a(q, q)));
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index i, Eigen::Index j) { return std::real(a(i, i)) < std::real(a(j, j)); });
    RawEigen<Real> out;
    out.sweeps = sweep;
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values.push_back(std::real(a(order[k], order[k])));
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

// Hermitian part of a square matrix; callers validate first.
template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    CMatrix<Real> h = m;
    return CMatrix<Real>(Real(0.5) * (h + h.adjoint()));
}

}  // namespace detail

// Operator 2-norm, as the square root of the top eigenvalue of M*M.
template <typename Derived>
auto operator_norm(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (m.size() == 0) return Real(0);
    const CMatrix<Real> mm = m.adjoint() * m;
    const auto raw = detail::cyclic_jacobi<Real>(mm);
    return std::sqrt(std::max(raw.values.back(), Real(0)));
}

template <typename Derived>
auto min_singular_value(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const CMatrix<Real> mm = m.adjoint() * m;
    const auto raw = detail::cyclic_jacobi<Real>(mm);
    return std::sqrt(std::max(raw.values.front(), Real(0)));
}

// ||M - M*|| in operator norm. i(M - M*) is Hermitian, so a single Jacobi run gives it.
template <typename Derived>
auto hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const CMatrix<Real> skew = m - m.adjoint();
    if (skew.norm() == Real(0)) return Real(0);
    const CMatrix<Real> h = std::complex<Real>(0, 1) * skew;
    const auto raw = detail::cyclic_jacobi<Real>(h);
    return std::max(std::abs(raw.values.front()), std::abs(raw.values.back()));
}

template <typename Derived>
auto unitary_defect(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const CMatrix<Real> g = m.adjoint() * m - CMatrix<Real>::Identity(m.cols(), m.cols());
    if (g.norm() == Real(0)) return Real(0);
    const auto raw = detail::cyclic_jacobi<Real>(g);
    return std::max(std::abs(raw.values.front()), std::abs(raw.values.back()));
}

// Self-adjoint matrix with a validation tolerance. The stored matrix is the
// exact Hermitian part of the input.
template <typename Real>
class Hermitian {
public:
    Hermitian() = default;

    explicit Hermitian(const CMatrix<Real>& m, Real tol = Real(kDefaultTol)) : tol_(tol) {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw InputValidationError("Hermitian: matrix must be square and non-empty");
        if (!all_finite(m)) throw InputValidationError("Hermitian: non-finite entry");
        const Real bound = tol * std::max(Real(1), m.norm());
        const Real skew = (m - m.adjoint()).norm();
        if (skew > bound && hermitian_defect(m) > bound) {
            std::ostringstream os;
            os << "Hermitian: ||M - M*|| = " << hermitian_defect(m) << " exceeds " << bound;
            throw InputValidationError(os.str());
        }
        m_ = detail::hermitian_part(m);
    }

    const CMatrix<Real>& matrix() const noexcept { return m_; }
    Real tol() const noexcept { return tol_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }

    friend Hermitian operator+(const Hermitian& a, const Hermitian& b) {
        return Hermitian(CMatrix<Real>(a.m_ + b.m_), std::max(a.tol_, b.tol_));
    }
    friend Hermitian operator-(const Hermitian& a, const Hermitian& b) {
        return Hermitian(CMatrix<Real>(a.m_ - b.m_), std::max(a.tol_, b.tol_));
    }
    friend Hermitian operator*(Real s, const Hermitian& a) { return Hermitian(CMatrix<Real>(s * a.m_), a.tol_); }

private:
    CMatrix<Real> m_;
    Real tol_ = Real(kDefaultTol);
};

template <typename Real>
class Unitary {
public:
    Unitary() = default;

    explicit Unitary(const CMatrix<Real>& m, Real tol = Real(kDefaultTol)) : m_(m), tol_(tol) {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw InputValidationError("Unitary: matrix must be square and non-empty");
        if (!all_finite(m)) throw InputValidationError("Unitary: non-finite entry");
        const Real defect = unitary_defect(m);
        if (defect > tol) {
            std::ostringstream os;
            os << "Unitary: ||U*U - I|| = " << defect << " exceeds " << tol;
            throw InputValidationError(os.str());
        }
    }

    const CMatrix<Real>& matrix() const noexcept { return m_; }
    Real tol() const noexcept { return tol_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }

private:
    CMatrix<Real> m_;
    Real tol_ = Real(kDefaultTol);
};

using HermitianMatrix = Hermitian<double>;
using UnitaryMatrix = Unitary<double>;

template <typename Real>
struct SpectralDecomposition {
    std::vector<std::complex<Real>> eigenvalues;
    std::vector<CMatrix<Real>> projections;
    Real tol = Real(kDefaultTol);

    Eigen::Index dim() const { return projections.empty() ? 0 : projections.front().rows(); }

    CMatrix<Real> reconstruct() const {
        CMatrix<Real> out = CMatrix<Real>::Zero(dim(), dim());
        for (std::size_t k = 0; k < projections.size(); ++k) out += eigenvalues[k] * projections[k];
        return out;
    }
};

// Largest violation of the decomposition invariants: resolution of identity,
// orthogonality, self-adjointness of each projection.
template <typename Real>
Real projection_defect(const SpectralDecomposition<Real>& dec) {
    const Eigen::Index d = dec.dim();
    CMatrix<Real> sum = CMatrix<Real>::Zero(d, d);
    Real worst = 0;
    for (std::size_t j = 0; j < dec.projections.size(); ++j) {
        const auto& ej = dec.projections[j];
        sum += ej;
        worst = std::max(worst, operator_norm(ej - ej.adjoint()));
        for (std::size_t k = 0; k < dec.projections.size(); ++k) {
            const CMatrix<Real> prod = ej * dec.projections[k];
            worst = std::max(worst, operator_norm(j == k ? CMatrix<Real>(prod - ej) : prod));
        }
    }
    return std::max(worst, operator_norm(sum - CMatrix<Real>::Identity(d, d)));
}

namespace detail {

// Argument in (-pi, pi]; values a rounding error below the negative real axis
// are read as pi.
template <typename Real>
Real principal_arg(const std::complex<Real>& z) {
    const Real a = std::arg(z);
    const Real pi = std::numbers::pi_v<Real>;
    return a <= -pi + 64 * std::numeric_limits<Real>::epsilon() ? pi : a;
}

template <typename Real>
CMatrix<Real> outer_sum(const CMatrix<Real>& vecs, const std::vector<Eigen::Index>& cols) {
    CMatrix<Real> p = CMatrix<Real>::Zero(vecs.rows(), vecs.rows());
    for (auto c : cols) p += vecs.col(c) * vecs.col(c).adjoint();
    return p;
}

// Groups consecutive entries of an already ordered list whose neighbour gap is
// at most `threshold`. With `circular`, the last group may join the first.
template <typename Real>
std::vector<std::vector<Eigen::Index>> chain_clusters(const std::vector<std::complex<Real>>& values,
                                                      Real threshold, bool circular) {
    const std::size_t n = values.size();
    std::vector<std::vector<Eigen::Index>> groups;
    if (n == 0) return groups;
    std::size_t start = 0;
    if (circular) {
        // Start right after a gap that is wider than the threshold, if any.
        bool found = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(values[(k + 1) % n] - values[k]) > threshold) {
                start = (k + 1) % n;
                found = true;
                break;
            }
        }
        if (!found || n == 1) {
            std::vector<Eigen::Index> all(n);
            std::iota(all.begin(), all.end(), Eigen::Index{0});
            return {all};
        }
    }
    groups.push_back({static_cast<Eigen::Index>(start)});
    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t k = (start + step) % n;
        const std::size_t prev = (start + step - 1) % n;
        if (std::abs(values[k] - values[prev]) <= threshold)
            groups.back().push_back(static_cast<Eigen::Index>(k));
        else
            groups.push_back({static_cast<Eigen::Index>(k)});
    }
    return groups;
}

}  // namespace detail

// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; eigenvalues
// closer than `cluster` are merged into one spectral projection.
template <typename Real>
SpectralDecomposition<Real> hermitian_eig(const Hermitian<Real>& a, Real cluster = Real(kClusterThreshold)) {
    const auto raw = detail::cyclic_jacobi<Real>(a.matrix());
    std::vector<std::complex<Real>> vals(raw.values.begin(), raw.values.end());
    SpectralDecomposition<Real> dec;
    dec.tol = a.tol();
    for (const auto& group : detail::chain_clusters<Real>(vals, cluster, false)) {
        Real mean = 0;
        for (auto k : group) mean += raw.values[static_cast<std::size_t>(k)];
        dec.eigenvalues.emplace_back(mean / Real(group.size()), Real(0));
        dec.projections.push_back(detail::outer_sum<Real>(raw.vectors, group));
    }
    return dec;
}

namespace detail {

// i(U + 1)(U - 1)^{-1} without domain checks.
template <typename Real>
CMatrix<Real> inverse_cayley_raw(const CMatrix<Real>& u) {
    const Eigen::Index d = u.rows();
    const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
    const CMatrix<Real> minus = u - id;
    const CMatrix<Real> plus = u + id;
    // The factors commute, so a left solve is exact in exact arithmetic.
    CMatrix<Real> a = std::complex<Real>(0, 1) * minus.partialPivLu().solve(plus);
    return hermitian_part(a);
}

}  // namespace detail

// Spectral decomposition of a unitary. A phase e^{i theta} is drawn from `seed`
// so that e^{i theta} U stays away from 1; the inverse Cayley transform of the
// rotated matrix is then diagonalised by Jacobi. Eigenvalues are read back as
// Rayleigh quotients against the original U and ordered by argument in (-pi, pi].
template <typename Real>
SpectralDecomposition<Real> unitary_eig(const Unitary<Real>& u, std::uint64_t seed = kDefaultPhaseSeed,
                                        Real cluster = Real(kClusterThreshold)) {
    using C = std::complex<Real>;
    const Eigen::Index d = u.dim();
    const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    // A uniformly random phase lands within arc pi/(4d) of some eigenvalue with
    // probability at most 1/4, so 32 draws essentially never all fail.
    const Real wanted = 2 * std::sin(Real(std::numbers::pi) / (8 * Real(d)));
    Real best_margin = -1;
    C best_phase(1);
    for (int attempt = 0; attempt < 32; ++attempt) {
        const C phase = std::polar(Real(1), Real(angle(rng)));
        const Real margin = min_singular_value(CMatrix<Real>(phase * u.matrix() - id));
        if (margin > best_margin) {
            best_margin = margin;
            best_phase = phase;
        }
        if (margin >= wanted) break;
    }
    if (best_margin <= cluster)
        throw NumericalError("unitary_eig: no admissible phase rotation found", 32);

    const CMatrix<Real> rotated = best_phase * u.matrix();
    const auto raw = detail::cyclic_jacobi<Real>(detail::inverse_cayley_raw<Real>(rotated));

    std::vector<C> lambdas(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        const CVector<Real> v = raw.vectors.col(k);
        lambdas[static_cast<std::size_t>(k)] = (v.adjoint() * u.matrix() * v)(0, 0);
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return detail::principal_arg(lambdas[static_cast<std::size_t>(i)]) <
               detail::principal_arg(lambdas[static_cast<std::size_t>(j)]);
    });
    std::vector<C> sorted;
    CMatrix<Real> vecs(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        sorted.push_back(lambdas[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
        vecs.col(k) = raw.vectors.col(order[static_cast<std::size_t>(k)]);
    }

    SpectralDecomposition<Real> dec;
    dec.tol = u.tol();
    struct Entry {
        C value;
        CMatrix<Real> proj;
    };
    std::vector<Entry> entries;
    for (const auto& group : detail::chain_clusters<Real>(sorted, cluster, true)) {
        CMatrix<Real> p = detail::outer_sum<Real>(vecs, group);
        const C value = (p * u.matrix()).trace() / p.trace();
        entries.push_back({value, std::move(p)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return detail::principal_arg(x.value) < detail::principal_arg(y.value); });
    for (auto& e : entries) {
        dec.eigenvalues.push_back(e.value);
        dec.projections.push_back(std::move(e.proj));
    }
    return dec;
}

// (A + i)(A - i)^{-1}.
template <typename Real>
Unitary<Real> cayley(const Hermitian<Real>& a) {
    const Eigen::Index d = a.dim();
    const std::complex<Real> i(0, 1);
    const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
    const CMatrix<Real> minus = a.matrix() - i * id;
    const Real smin = min_singular_value(minus);
    if (smin < a.tol()) {
        std::ostringstream os;
        os << "cayley: A - i is numerically singular (smallest singular value " << smin << ")";
        throw NumericalError(os.str());
    }
    const CMatrix<Real> plus = a.matrix() + i * id;
    return Unitary<Real>(CMatrix<Real>(minus.partialPivLu().solve(plus)), 10 * a.tol());
}

// Inverse of `cayley` on unitaries without eigenvalue 1.
template <typename Real>
Hermitian<Real> inverse_cayley(const Unitary<Real>& u, Real cluster = Real(kClusterThreshold)) {
    const Eigen::Index d = u.dim();
    const Real gap = min_singular_value(CMatrix<Real>(u.matrix() - CMatrix<Real>::Identity(d, d)));
    if (gap <= cluster) {
        std::ostringstream os;
        os << "inverse_cayley: not in Cayley image (eigenvalue within " << gap << " of 1)";
        throw DomainError(os.str());
    }
    return Hermitian<Real>(detail::inverse_cayley_raw<Real>(u.matrix()), u.tol());
}

// sum_k f(lambda_k) E_k. `f` maps std::complex<Real> to a real or complex scalar.
template <typename Real, typename F>
CMatrix<Real> functional_calculus(const SpectralDecomposition<Real>& dec, F&& f) {
    CMatrix<Real> out = CMatrix<Real>::Zero(dec.dim(), dec.dim());
    for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
        const std::complex<Real> value(f(dec.eigenvalues[k]));
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            std::ostringstream os;
            os << "functional_calculus: f is not finite at eigenvalue " << dec.eigenvalues[k];
            throw EvaluationError(os.str());
        }
        out += value * dec.projections[k];
    }
    return out;
}

template <typename Real>
Real lambda_min(const Hermitian<Real>& a) {
    return detail::cyclic_jacobi<Real>(a.matrix()).values.front();
}

}  // namespace whlab
