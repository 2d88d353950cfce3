#pragma once

// Special Euclidean Jordan algebras: real subspaces of Hermitian matrices that
// contain the identity and are closed under a o b = (ab + ba)/2, together with
// their positive cones.

#include <string_view>
#include <vector>

#include "whlab/spectra.hpp"

namespace whlab {

// Real trace inner product Re tr(A* B).
template <typename Real>
Real trace_inner(const CMatrix<Real>& a, const CMatrix<Real>& b) {
    return std::real(a.cwiseProduct(b.conjugate()).sum());
}

template <typename Real>
CMatrix<Real> jordan_product(const CMatrix<Real>& a, const CMatrix<Real>& b) {
    return Real(0.5) * (a * b + b * a);
}

template <typename Real>
class JordanAlgebra {
public:
    JordanAlgebra(Eigen::Index dim, std::vector<CMatrix<Real>> orthonormal_basis, Real tol)
        : dim_(dim), basis_(std::move(orthonormal_basis)), tol_(tol) {}

    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return basis_.size(); }
    const std::vector<CMatrix<Real>>& basis() const noexcept { return basis_; }
    Real tol() const noexcept { return tol_; }

    CMatrix<Real> project(const CMatrix<Real>& m) const {
        CMatrix<Real> p = CMatrix<Real>::Zero(dim_, dim_);
        for (const auto& b : basis_) p += trace_inner<Real>(b, m) * b;
        return p;
    }

    // Frobenius distance to the span of the basis.
    Real distance(const CMatrix<Real>& m) const { return (m - project(m)).norm(); }

    bool contains(const CMatrix<Real>& m) const {
        if (m.rows() != dim_ || m.cols() != dim_) return false;
        return distance(m) <= tol_ * std::max(Real(1), m.norm());
    }

private:
    Eigen::Index dim_;
    std::vector<CMatrix<Real>> basis_;
    Real tol_;
};

namespace detail {

// Adds `m` to an orthonormal family if it is not already in the span.
template <typename Real>
bool gram_schmidt_push(std::vector<CMatrix<Real>>& basis, CMatrix<Real> m, Real tol) {
    const Real scale = std::max(Real(1), m.norm());
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) m -= trace_inner<Real>(b, m) * b;
    const Real residual = m.norm();
    if (residual <= tol * scale) return false;
    basis.push_back(detail::hermitian_part(CMatrix<Real>(m / residual)));
    return true;
}

}  // namespace detail

// Smallest Jordan algebra containing the identity and `generators`: span
// closure under pairwise Jordan products, iterated until the dimension is
// stable (at most dim^2 rounds).
template <typename Real>
JordanAlgebra<Real> generate_algebra(const std::vector<Hermitian<Real>>& generators, Eigen::Index dim,
                                     Real tol = Real(kDefaultTol)) {
    std::vector<CMatrix<Real>> basis;
    detail::gram_schmidt_push<Real>(basis, CMatrix<Real>::Identity(dim, dim), tol);
    for (const auto& g : generators) {
        if (g.dim() != dim) throw InputValidationError("generate_algebra: generator dimension mismatch");
        detail::gram_schmidt_push<Real>(basis, g.matrix(), tol);
    }
    const Eigen::Index max_rounds = std::max<Eigen::Index>(1, dim * dim);
    for (Eigen::Index round = 0; round < max_rounds; ++round) {
        bool grew = false;
        const std::size_t n = basis.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                grew |= detail::gram_schmidt_push<Real>(basis, jordan_product<Real>(basis[i], basis[j]), tol);
        if (!grew) break;
    }
    return JordanAlgebra<Real>(dim, std::move(basis), tol);
}

template <typename Real = double>
JordanAlgebra<Real> diagonal_algebra(Eigen::Index dim, Real tol = Real(kDefaultTol)) {
    std::vector<Hermitian<Real>> gens;
    for (Eigen::Index k = 0; k < dim; ++k) {
        CMatrix<Real> e = CMatrix<Real>::Zero(dim, dim);
        e(k, k) = 1;
        gens.emplace_back(e, tol);
    }
    return generate_algebra<Real>(gens, dim, tol);
}

// The real span of the elementary Hermitians E_kk, E_jk + E_kj and i(E_jk - E_kj).
template <typename Real = double>
std::vector<Hermitian<Real>> elementary_hermitians(Eigen::Index dim, bool include_imaginary = true) {
    std::vector<Hermitian<Real>> out;
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index k = j; k < dim; ++k) {
            CMatrix<Real> e = CMatrix<Real>::Zero(dim, dim);
            e(j, k) = e(k, j) = 1;
            out.emplace_back(e);
            if (include_imaginary && j != k) {
                CMatrix<Real> f = CMatrix<Real>::Zero(dim, dim);
                f(j, k) = std::complex<Real>(0, 1);
                f(k, j) = std::complex<Real>(0, -1);
                out.emplace_back(f);
            }
        }
    return out;
}

template <typename Real = double>
JordanAlgebra<Real> full_hermitian_algebra(Eigen::Index dim, Real tol = Real(kDefaultTol)) {
    return generate_algebra<Real>(elementary_hermitians<Real>(dim, true), dim, tol);
}

template <typename Real = double>
JordanAlgebra<Real> real_symmetric_algebra(Eigen::Index dim, Real tol = Real(kDefaultTol)) {
    return generate_algebra<Real>(elementary_hermitians<Real>(dim, false), dim, tol);
}

enum class ConeClass { interior, boundary, outside_cone, outside_algebra };

inline std::string_view to_string(ConeClass c) {
    switch (c) {
        case ConeClass::interior: return "interior";
        case ConeClass::boundary: return "boundary";
        case ConeClass::outside_cone: return "outside_cone";
        case ConeClass::outside_algebra: return "outside_algebra";
    }
    return "?";
}

template <typename Real>
ConeClass classify(const JordanAlgebra<Real>& v, const Hermitian<Real>& m) {
    if (m.dim() != v.dim()) throw InputValidationError("classify: dimension mismatch");
    if (!v.contains(m.matrix())) return ConeClass::outside_algebra;
    const Real lmin = lambda_min(m);
    const Real tol = v.tol();
    if (lmin > tol) return ConeClass::interior;
    if (lmin >= -tol) return ConeClass::boundary;
    return ConeClass::outside_cone;
}

template <typename Real>
bool in_cone(const JordanAlgebra<Real>& v, const Hermitian<Real>& m) {
    const auto c = classify(v, m);
    return c == ConeClass::interior || c == ConeClass::boundary;
}

enum class Order { lt, leq, incomparable_or_gt };

inline std::string_view to_string(Order o) {
    switch (o) {
        case Order::lt: return "lt";
        case Order::leq: return "leq";
        case Order::incomparable_or_gt: return "incomparable-or-gt";
    }
    return "?";
}

// A < B when B - A is positive definite beyond tol, A <= B when it is positive
// semidefinite within tol.
template <typename Real>
Order order_compare(const Hermitian<Real>& a, const Hermitian<Real>& b) {
    if (a.dim() != b.dim()) throw InputValidationError("order_compare: dimension mismatch");
    const Real tol = std::max(a.tol(), b.tol());
    const Real lmin = lambda_min(Hermitian<Real>(CMatrix<Real>(b.matrix() - a.matrix()), tol));
    if (lmin > tol) return Order::lt;
    if (lmin >= -tol) return Order::leq;
    return Order::incomparable_or_gt;
}

}  // namespace whlab
