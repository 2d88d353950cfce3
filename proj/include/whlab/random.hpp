#pragma once

// Seeded random matrix generators. All randomness is drawn from an explicit
// engine passed by reference.

#include <random>

#include "whlab/spectra.hpp"

namespace whlab {

using Rng = std::mt19937_64;

template <typename Real>
CMatrix<Real> random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng, Real scale = Real(1)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix<Real> m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = std::complex<Real>(Real(normal(rng)), Real(normal(rng))) * scale;
    return m;
}

template <typename Real = double>
Hermitian<Real> random_hermitian(Eigen::Index d, Rng& rng, Real scale = Real(1)) {
    const CMatrix<Real> g = random_gaussian<Real>(d, d, rng, scale);
    return Hermitian<Real>(CMatrix<Real>(Real(0.5) * (g + g.adjoint())));
}

// G G* / d plus a small shift; strictly positive with probability one.
template <typename Real = double>
Hermitian<Real> random_positive(Eigen::Index d, Rng& rng, Real shift = Real(0)) {
    const CMatrix<Real> g = random_gaussian<Real>(d, d, rng);
    return Hermitian<Real>(CMatrix<Real>(g * g.adjoint() / Real(d) + shift * CMatrix<Real>::Identity(d, d)));
}

// Haar-distributed unitary from the QR factorisation of a Gaussian matrix.
template <typename Real = double>
Unitary<Real> random_unitary(Eigen::Index d, Rng& rng) {
    const CMatrix<Real> g = random_gaussian<Real>(d, d, rng);
    Eigen::HouseholderQR<CMatrix<Real>> qr(g);
    CMatrix<Real> q = qr.householderQ();
    const CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < d; ++k) {
        const auto rk = r(k, k);
        if (std::abs(rk) > Real(0)) q.col(k) *= rk / std::abs(rk);
    }
    return Unitary<Real>(q);
}

// Orthogonal projection onto the span of a random subset of eigenvectors of a
// random Hermitian matrix. Each eigenvector is kept with probability one half.
template <typename Real = double>
CMatrix<Real> random_projection(Eigen::Index d, Rng& rng) {
    const auto raw = detail::cyclic_jacobi<Real>(random_hermitian<Real>(d, rng).matrix());
    std::bernoulli_distribution keep(0.5);
    CMatrix<Real> p = CMatrix<Real>::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        if (keep(rng)) p += raw.vectors.col(k) * raw.vectors.col(k).adjoint();
    return p;
}

}  // namespace whlab
