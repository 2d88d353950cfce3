#pragma once

// The Moebius right action of self-adjoint matrices on the unitary group,
//   U [+] B = ((2i + B)U - B)(BU + 2i - B)^{-1},
// and the geometry of Z = {U : spec(U) in the closed upper half circle}:
// the chart psi onto Z_0, the contraction map A -> A(BA + 1)^{-1}, and the
// (E, A) pair description of points of Z.

#include <cmath>
#include <string>
#include <string_view>

#include "whlab/jordan.hpp"
#include "whlab/random.hpp"
#include "whlab/spectra.hpp"

namespace whlab {

namespace detail {

template <typename Real>
CMatrix<Real> hermitian_inverse(const Hermitian<Real>& b) {
    const Eigen::Index d = b.dim();
    return hermitian_part(CMatrix<Real>(b.matrix().partialPivLu().solve(CMatrix<Real>::Identity(d, d))));
}

template <typename Real>
void require_positive(const Hermitian<Real>& a, const char* who) {
    const Real lmin = lambda_min(a);
    if (lmin < -a.tol() * std::max(Real(1), a.matrix().norm())) {
        std::ostringstream os;
        os << who << ": argument is not positive (lambda_min = " << lmin << ")";
        throw DomainError(os.str());
    }
}

}  // namespace detail

// X M = N with M = BU + 2i - B and N = (2i + B)U - B, solved through
// M* X* = N* column by column.
template <typename Real>
Unitary<Real> boxplus(const Unitary<Real>& u, const Hermitian<Real>& b) {
    if (u.dim() != b.dim()) throw InputValidationError("boxplus: dimension mismatch");
    const std::complex<Real> two_i(0, 2);
    const Eigen::Index d = u.dim();
    const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
    const CMatrix<Real>& um = u.matrix();
    const CMatrix<Real>& bm = b.matrix();
    const CMatrix<Real> denom = bm * um + two_i * id - bm;
    const CMatrix<Real> numer = (two_i * id + bm) * um - bm;
    const Real tol = std::max(u.tol(), b.tol());
    const Real smin = min_singular_value(denom);
    if (smin < tol) {
        std::ostringstream os;
        os << "boxplus: BU + 2i - B is numerically singular (smallest singular value " << smin << ")";
        throw NumericalError(os.str());
    }
    const CMatrix<Real> x = denom.adjoint().partialPivLu().solve(CMatrix<Real>(numer.adjoint())).adjoint();
    return Unitary<Real>(x, 10 * tol);
}

enum class ZClass { interior_orbit, boundary, outside };

inline std::string_view to_string(ZClass c) {
    switch (c) {
        case ZClass::interior_orbit: return "interior_orbit";
        case ZClass::boundary: return "boundary";
        case ZClass::outside: return "outside";
    }
    return "?";
}

template <typename Real>
ZClass classify_spectrum(const SpectralDecomposition<Real>& dec, Real tol, Real cluster = Real(kClusterThreshold)) {
    bool boundary = false;
    for (const auto& lambda : dec.eigenvalues) {
        if (lambda.imag() < -tol) return ZClass::outside;
        if (std::abs(lambda + Real(1)) <= cluster) boundary = true;
    }
    return boundary ? ZClass::boundary : ZClass::interior_orbit;
}

template <typename Real>
ZClass classify_zpoint(const Unitary<Real>& u, std::uint64_t seed = kDefaultPhaseSeed) {
    return classify_spectrum(unitary_eig(u, seed), u.tol());
}

// A unitary with spectrum in the closed upper half circle, with its spectral
// decomposition cached.
template <typename Real>
class ZPoint {
public:
    explicit ZPoint(Unitary<Real> u, std::uint64_t seed = kDefaultPhaseSeed)
        : u_(std::move(u)), dec_(unitary_eig(u_, seed)) {
        for (const auto& lambda : dec_.eigenvalues)
            if (lambda.imag() < -u_.tol()) {
                std::ostringstream os;
                os << "ZPoint: eigenvalue " << lambda << " lies below the real axis";
                throw DomainError(os.str());
            }
    }

    const Unitary<Real>& unitary() const noexcept { return u_; }
    const CMatrix<Real>& matrix() const noexcept { return u_.matrix(); }
    const SpectralDecomposition<Real>& decomposition() const noexcept { return dec_; }
    Real tol() const noexcept { return u_.tol(); }
    ZClass classification() const { return classify_spectrum(dec_, u_.tol()); }

private:
    Unitary<Real> u_;
    SpectralDecomposition<Real> dec_;
};

// psi(A) = (-A + i)(A + i)^{-1}, defined on the positive cone.
template <typename Real>
Unitary<Real> psi(const Hermitian<Real>& a) {
    detail::require_positive(a, "psi");
    const std::complex<Real> i(0, 1);
    const CMatrix<Real> id = CMatrix<Real>::Identity(a.dim(), a.dim());
    const CMatrix<Real> denom = a.matrix() + i * id;
    return Unitary<Real>(CMatrix<Real>(denom.partialPivLu().solve(CMatrix<Real>(-a.matrix() + i * id))),
                         10 * a.tol());
}

// psi^{-1}(U) = i(1 - U)(1 + U)^{-1}, defined when -1 is not an eigenvalue.
template <typename Real>
Hermitian<Real> psi_inv(const Unitary<Real>& u, Real cluster = Real(kClusterThreshold)) {
    const CMatrix<Real> id = CMatrix<Real>::Identity(u.dim(), u.dim());
    const CMatrix<Real> plus = id + u.matrix();
    const Real gap = min_singular_value(plus);
    if (gap <= cluster) {
        std::ostringstream os;
        os << "psi_inv: not in Z0 (eigenvalue within " << gap << " of -1)";
        throw DomainError(os.str());
    }
    const CMatrix<Real> x = std::complex<Real>(0, 1) * plus.partialPivLu().solve(CMatrix<Real>(id - u.matrix()));
    return Hermitian<Real>(detail::hermitian_part(x), u.tol());
}

// A(BA + 1)^{-1} = (AB + 1)^{-1}A for A, B in the positive cone.
template <typename Real>
Hermitian<Real> moebius_contraction(const Hermitian<Real>& a, const Hermitian<Real>& b) {
    if (a.dim() != b.dim()) throw InputValidationError("moebius_contraction: dimension mismatch");
    detail::require_positive(a, "moebius_contraction");
    detail::require_positive(b, "moebius_contraction");
    const CMatrix<Real> id = CMatrix<Real>::Identity(a.dim(), a.dim());
    const CMatrix<Real> m = a.matrix() * b.matrix() + id;
    const Real tol = std::max(a.tol(), b.tol());
    if (min_singular_value(m) < tol) throw NumericalError("moebius_contraction: AB + 1 is numerically singular");
    return Hermitian<Real>(detail::hermitian_part(CMatrix<Real>(m.partialPivLu().solve(a.matrix()))), tol);
}

// Inverse of the contraction on its range {C in Q : C < B^{-1}}: A = (1 - CB)^{-1} C.
template <typename Real>
Hermitian<Real> contraction_inverse(const Hermitian<Real>& c, const Hermitian<Real>& b) {
    if (c.dim() != b.dim()) throw InputValidationError("contraction_inverse: dimension mismatch");
    const Real tol = std::max(c.tol(), b.tol());
    if (lambda_min(b) <= tol) throw DomainError("contraction_inverse: B is not in the interior of the cone");
    detail::require_positive(c, "contraction_inverse");
    const Hermitian<Real> b_inv(detail::hermitian_inverse(b), tol);
    if (order_compare(c, b_inv) != Order::lt)
        throw DomainError("contraction_inverse: C not strictly below B^{-1}");
    const CMatrix<Real> id = CMatrix<Real>::Identity(c.dim(), c.dim());
    const CMatrix<Real> m = id - c.matrix() * b.matrix();
    if (min_singular_value(m) < tol) throw NumericalError("contraction_inverse: 1 - CB is numerically singular");
    return Hermitian<Real>(detail::hermitian_part(CMatrix<Real>(m.partialPivLu().solve(c.matrix()))), tol);
}

// A point of Z described by the projection E onto ker(U - 1) and the inverse
// Cayley transform A of the compression of U to the range of 1 - E.
template <typename Real>
class PairRep {
public:
    PairRep(CMatrix<Real> e, CMatrix<Real> a, Real tol = Real(kDefaultTol)) : e_(std::move(e)), a_(std::move(a)), tol_(tol) {
        const Eigen::Index d = e_.rows();
        if (e_.cols() != d || a_.rows() != d || a_.cols() != d || d == 0)
            throw InputValidationError("PairRep: E and A must be square of equal size");
        const Real scale = std::max(Real(1), a_.norm());
        if ((e_ * e_ - e_).norm() > 10 * tol || (e_ - e_.adjoint()).norm() > 10 * tol)
            throw InputValidationError("PairRep: E is not an orthogonal projection");
        const CMatrix<Real> f = CMatrix<Real>::Identity(d, d) - e_;
        if ((f * a_ * f - a_).norm() > 10 * tol * scale)
            throw InputValidationError("PairRep: (1 - E) A (1 - E) != A");
        const Hermitian<Real> ah(a_, tol);
        if (lambda_min(ah) < -tol * scale) throw InputValidationError("PairRep: A is not positive");
        e_ = detail::hermitian_part(e_);
        a_ = ah.matrix();
    }

    const CMatrix<Real>& E() const noexcept { return e_; }
    const CMatrix<Real>& A() const noexcept { return a_; }
    Real tol() const noexcept { return tol_; }
    Eigen::Index dim() const noexcept { return e_.rows(); }

private:
    CMatrix<Real> e_;
    CMatrix<Real> a_;
    Real tol_;
};

// E + (1 - E) cayley(A) (1 - E) for any projection E and Hermitian A supported on 1 - E.
template <typename Real>
CMatrix<Real> pair_unitary(const CMatrix<Real>& e, const CMatrix<Real>& a, Real tol = Real(kDefaultTol)) {
    const CMatrix<Real> f = CMatrix<Real>::Identity(e.rows(), e.rows()) - e;
    return e + f * cayley(Hermitian<Real>(a, tol)).matrix() * f;
}

template <typename Real>
ZPoint<Real> pair_decode(const PairRep<Real>& p, std::uint64_t seed = kDefaultPhaseSeed) {
    return ZPoint<Real>(Unitary<Real>(pair_unitary(p.E(), p.A(), p.tol()), 10 * p.tol()), seed);
}

template <typename Real>
PairRep<Real> pair_encode(const ZPoint<Real>& z, Real cluster = Real(kClusterThreshold)) {
    const auto& dec = z.decomposition();
    const Eigen::Index d = dec.dim();
    CMatrix<Real> e = CMatrix<Real>::Zero(d, d);
    CMatrix<Real> a = CMatrix<Real>::Zero(d, d);
    for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
        const auto lambda = dec.eigenvalues[k];
        if (std::abs(lambda - Real(1)) <= cluster) {
            e += dec.projections[k];
        } else {
            // inverse Cayley of e^{i theta} is cot(theta / 2)
            const Real theta = std::arg(lambda);
            a += (Real(1) / std::tan(theta / 2)) * dec.projections[k];
        }
    }
    return PairRep<Real>(detail::hermitian_part(e), detail::hermitian_part(a), z.tol());
}

// B belongs to Q_(E,A) iff A + (1 - E) B (1 - E) >= 0.
template <typename Real>
bool qset_contains(const PairRep<Real>& p, const Hermitian<Real>& b, const JordanAlgebra<Real>& v) {
    if (!v.contains(b.matrix())) throw DomainError("qset_contains: B is outside the Jordan algebra");
    const CMatrix<Real> f = CMatrix<Real>::Identity(p.dim(), p.dim()) - p.E();
    const Hermitian<Real> m(CMatrix<Real>(p.A() + f * b.matrix() * f), p.tol());
    return lambda_min(m) >= -p.tol() * std::max(Real(1), m.matrix().norm());
}

enum class SeparationKind { equal, witness, not_found };

template <typename Real>
struct Separation {
    SeparationKind kind = SeparationKind::equal;
    CMatrix<Real> witness;
    std::string probe;
    bool in_first = false;
    bool in_second = false;
};

// Searches for B in V lying in exactly one of Q_(E1,A1), Q_(E2,A2). Probes are
// alpha E1, alpha E2 for alpha in +-{2^-8, ..., 2^8}, then -A1 and -A2.
template <typename Real>
Separation<Real> separate_points(const PairRep<Real>& p1, const PairRep<Real>& p2, const JordanAlgebra<Real>& v) {
    if (p1.dim() != p2.dim()) throw InputValidationError("separate_points: dimension mismatch");
    const Real tol = std::max(p1.tol(), p2.tol());
    const Real scale = std::max({Real(1), p1.A().norm(), p2.A().norm()});
    Separation<Real> out;
    if ((p1.E() - p2.E()).norm() <= 10 * tol && (p1.A() - p2.A()).norm() <= 10 * tol * scale) return out;

    auto try_probe = [&](const CMatrix<Real>& b, std::string label) {
        if (!v.contains(b)) return false;
        const Hermitian<Real> bh(b, tol);
        const bool first = qset_contains(p1, bh, v);
        const bool second = qset_contains(p2, bh, v);
        if (first == second) return false;
        out.kind = SeparationKind::witness;
        out.witness = bh.matrix();
        out.probe = std::move(label);
        out.in_first = first;
        out.in_second = second;
        return true;
    };

    const CMatrix<Real>* projections[] = {&p1.E(), &p2.E()};
    for (int which = 0; which < 2; ++which) {
        if (projections[which]->norm() <= tol) continue;
        for (int exponent = -8; exponent <= 8; ++exponent) {
            for (Real sign : {Real(-1), Real(1)}) {
                const Real alpha = sign * std::ldexp(Real(1), exponent);
                std::ostringstream label;
                label << "alpha*E" << (which + 1) << " alpha=" << alpha;
                if (try_probe(CMatrix<Real>(alpha * *projections[which]), label.str())) return out;
            }
        }
    }
    if (try_probe(CMatrix<Real>(-p1.A()), "-A1")) return out;
    if (try_probe(CMatrix<Real>(-p2.A()), "-A2")) return out;
    out.kind = SeparationKind::not_found;
    return out;
}

// Random element of V with Gaussian coordinates in the orthonormal basis.
template <typename Real>
Hermitian<Real> random_element(const JordanAlgebra<Real>& v, Rng& rng, Real scale = Real(1)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix<Real> m = CMatrix<Real>::Zero(v.dim(), v.dim());
    for (const auto& b : v.basis()) m += Real(normal(rng)) * scale * b;
    return Hermitian<Real>(m, v.tol());
}

// Random (E, A): E a random sum of spectral projections of a random element of
// V, A the compression of a random square of an element of V.
template <typename Real>
PairRep<Real> random_pair(const JordanAlgebra<Real>& v, Rng& rng) {
    const auto dec = hermitian_eig(random_element(v, rng));
    std::bernoulli_distribution keep(0.5);
    const Eigen::Index d = v.dim();
    CMatrix<Real> e = CMatrix<Real>::Zero(d, d);
    for (const auto& p : dec.projections)
        if (keep(rng)) e += p;
    const CMatrix<Real> g = random_element(v, rng).matrix();
    const CMatrix<Real> f = CMatrix<Real>::Identity(d, d) - e;
    return PairRep<Real>(e, detail::hermitian_part(CMatrix<Real>(f * g * g * f)), v.tol());
}

}  // namespace whlab
