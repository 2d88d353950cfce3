#include "whlab/fibers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/Polynomials>

namespace whlab {

namespace {

std::vector<double> merged_breaks(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PiecewiseLinear combine(const PiecewiseLinear& a, const PiecewiseLinear& b, cdouble sb) {
    const auto breaks = merged_breaks(a.breaks(), b.breaks());
    std::vector<cdouble> vals;
    vals.reserve(breaks.size());
    for (double t : breaks) vals.push_back(a(t) + sb * b(t));
    return PiecewiseLinear(breaks, vals);
}

// Real roots in (0, 1) of c0 + c1 u + c2 u^2 + c3 u^3.
std::vector<double> unit_interval_roots(std::array<double, 4> c) {
    const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
    std::vector<double> out;
    if (scale == 0) return out;
    int degree = 3;
    while (degree > 0 && std::abs(c[static_cast<std::size_t>(degree)]) <= 1e-14 * scale) --degree;
    if (degree == 0) return out;
    if (degree == 1) {
        out.push_back(-c[0] / c[1]);
    } else {
        Eigen::VectorXd coeffs(degree + 1);
        for (int k = 0; k <= degree; ++k) coeffs(k) = c[static_cast<std::size_t>(k)];
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        for (Eigen::Index k = 0; k < solver.roots().size(); ++k) {
            const auto r = solver.roots()(k);
            if (std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r.real()))) out.push_back(r.real());
        }
    }
    std::erase_if(out, [](double u) { return !(u > 0 && u < 1); });
    return out;
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> breaks, std::vector<cdouble> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (breaks_.size() < 2 || breaks_.size() != values_.size())
        throw InputValidationError("piecewise-linear: need at least two breaks and one value per break");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
        throw InputValidationError("piecewise-linear: breaks must start at 0 and end at 1");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1])) throw InputValidationError("piecewise-linear: breaks must increase strictly");
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InputValidationError("piecewise-linear: non-finite value");
}

PiecewiseLinear PiecewiseLinear::constant(cdouble c) { return PiecewiseLinear({0.0, 1.0}, {c, c}); }

cdouble PiecewiseLinear::operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
        std::ostringstream os;
        os << "piecewise-linear: evaluation point " << t << " outside [0, 1]";
        throw DomainError(os.str());
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    if (it == breaks_.end()) return values_.back();
    const std::size_t j = static_cast<std::size_t>(it - breaks_.begin());
    const double t0 = breaks_[j - 1], t1 = breaks_[j];
    if (t == t0) return values_[j - 1];
    const double u = (t - t0) / (t1 - t0);
    return values_[j - 1] + u * (values_[j] - values_[j - 1]);
}

double PiecewiseLinear::sup_abs(double lo, double hi) const {
    double best = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
    for (std::size_t i = 0; i < breaks_.size(); ++i)
        if (breaks_[i] > lo && breaks_[i] < hi) best = std::max(best, std::abs(values_[i]));
    return best;
}

PiecewiseLinear PiecewiseLinear::alpha(std::int64_t n) const {
    if (n < 0) throw DomainError("alpha_n: n must lie in N");
    if (n == 0) return *this;
    if (n > 1000) throw RangeError("alpha_n: level too deep for double breakpoints");
    const double s = std::ldexp(1.0, -static_cast<int>(n));
    std::vector<double> b;
    std::vector<cdouble> v;
    for (std::size_t i = 0; i < breaks_.size() && breaks_[i] < s; ++i) {
        b.push_back(std::ldexp(breaks_[i], static_cast<int>(n)));
        v.push_back(values_[i]);
    }
    b.push_back(1.0);
    v.push_back((*this)(s));
    return PiecewiseLinear(std::move(b), std::move(v));
}

PiecewiseLinear PiecewiseLinear::section() const {
    std::vector<double> b;
    std::vector<cdouble> v;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        b.push_back(0.5 * breaks_[i]);
        v.push_back(values_[i]);
    }
    b.push_back(1.0);
    v.push_back(values_.back());
    return PiecewiseLinear(std::move(b), std::move(v));
}

PiecewiseLinear PiecewiseLinear::section(std::int64_t b) const {
    if (b < 0) throw DomainError("section: b must lie in N");
    PiecewiseLinear out = *this;
    for (std::int64_t i = 0; i < b; ++i) out = out.section();
    return out;
}

PiecewiseLinear PiecewiseLinear::conj() const {
    std::vector<cdouble> v;
    for (const auto& x : values_) v.push_back(std::conj(x));
    return PiecewiseLinear(breaks_, std::move(v));
}

PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b) { return combine(a, b, 1.0); }
PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b) { return combine(a, b, -1.0); }

PiecewiseLinear operator*(cdouble s, const PiecewiseLinear& a) {
    std::vector<cdouble> v;
    for (const auto& x : a.values()) v.push_back(s * x);
    return PiecewiseLinear(a.breaks(), std::move(v));
}

double product_sup(const PiecewiseLinear& x, const PiecewiseLinear& y, double lo, double hi) {
    if (!(lo >= 0 && hi <= 1 && lo <= hi)) throw DomainError("product_sup: interval outside [0, 1]");
    std::vector<double> pts{lo};
    for (double t : merged_breaks(x.breaks(), y.breaks()))
        if (t > lo && t < hi) pts.push_back(t);
    pts.push_back(hi);
    double best = std::abs(x(lo) * y(lo));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double t0 = pts[i], t1 = pts[i + 1];
        const cdouble p = x(t0), r = x(t1) - p;
        const cdouble q = y(t0), s = y(t1) - q;
        best = std::max(best, std::abs(x(t1) * y(t1)));
        if (t1 == t0) continue;
        // |x|^2 = a0 + a1 u + a2 u^2 and |y|^2 = b0 + b1 u + b2 u^2 on this piece
        const double a0 = std::norm(p), a1 = 2 * std::real(std::conj(p) * r), a2 = std::norm(r);
        const double b0 = std::norm(q), b1 = 2 * std::real(std::conj(q) * s), b2 = std::norm(s);
        // derivative of the quartic product
        const std::array<double, 4> d{a0 * b1 + a1 * b0, 2 * (a0 * b2 + a1 * b1 + a2 * b0),
                                      3 * (a1 * b2 + a2 * b1), 4 * a2 * b2};
        for (double u : unit_interval_roots(d))
            best = std::max(best, std::abs((p + u * r) * (q + u * s)));
    }
    return best;
}

double quotient_norm(Unit X, const PiecewiseLinear& x) {
    if (X.infinite) return std::abs(x(0.0));
    if (X.n < 0) throw DomainError("quotient_norm: unit must lie in N u {inf}");
    return x.alpha(X.n).sup_abs();
}

bool ideal_contains(Unit X, const PiecewiseLinear& x, double tol) { return quotient_norm(X, x) <= tol; }

bool in_kernel(std::int64_t n, const PiecewiseLinear& x, double tol) {
    const auto image = x.alpha(n);
    return std::all_of(image.values().begin(), image.values().end(), [tol](cdouble v) { return std::abs(v) <= tol; });
}

QuotientElement::QuotientElement(Unit X_, PiecewiseLinear rep)
    : X(X_), representative(std::move(rep)), seminorm(quotient_norm(X_, representative)) {}

QuotientElement fiber_action(Unit X, std::int64_t g, const QuotientElement& q, std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || a - b != g) throw InputValidationError("fiber_action: need g = a - b with a, b in N");
    if (!is_groupoid_element(X, g))
        throw DomainError("fiber_action: (" + X.to_string() + "," + std::to_string(g) + ") is not an arrow");
    if (!(q.X == X.shifted(g)))
        throw InputValidationError("fiber_action: element lives over " + q.X.to_string() + ", expected " +
                                   X.shifted(g).to_string());
    return QuotientElement(X, q.representative.section(b).alpha(a));
}

QuotientElement fiber_action(Unit X, std::int64_t g, const QuotientElement& q) {
    return fiber_action(X, g, q, std::max<std::int64_t>(g, 0), std::max<std::int64_t>(-g, 0));
}

double fiber_distance(const QuotientElement& p, const QuotientElement& q) {
    if (!(p.X == q.X)) throw InputValidationError("fiber_distance: elements live over different units");
    return quotient_norm(p.X, p.representative - q.representative);
}

TrigPolynomial::TrigPolynomial(std::map<std::int64_t, cdouble> coeffs) : coeffs_(std::move(coeffs)) {
    for (const auto& [k, c] : coeffs_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw InputValidationError("trig polynomial: non-finite coefficient");
}

std::int64_t TrigPolynomial::degree() const {
    std::int64_t d = 0;
    for (const auto& [k, c] : coeffs_) d = std::max(d, k < 0 ? -k : k);
    return d;
}

cdouble TrigPolynomial::operator()(double theta) const {
    cdouble s = 0;
    for (const auto& [k, c] : coeffs_) s += c * std::polar(1.0, static_cast<double>(k) * theta);
    return s;
}

TrigPolynomial TrigPolynomial::alpha(std::int64_t n) const {
    if (n < 0) throw DomainError("alpha_n: n must lie in N");
    const std::int64_t d = degree();
    if (n > 52 || (d > 0 && d > (std::int64_t{1} << 52) >> n)) throw RangeError("alpha_n: dilated degree too large");
    std::map<std::int64_t, cdouble> out;
    for (const auto& [k, c] : coeffs_) out[k * (std::int64_t{1} << n)] = c;
    return TrigPolynomial(std::move(out));
}

TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b) {
    auto out = a.coeffs_;
    for (const auto& [k, c] : b.coeffs_) out[k] += c;
    return TrigPolynomial(std::move(out));
}

TrigPolynomial operator*(cdouble s, const TrigPolynomial& a) {
    auto out = a.coeffs_;
    for (auto& [k, c] : out) c *= s;
    return TrigPolynomial(std::move(out));
}

double coeff_distance(const TrigPolynomial& a, const TrigPolynomial& b) {
    double worst = 0;
    for (const auto& [k, c] : a.coeffs_) {
        const auto it = b.coeffs_.find(k);
        worst = std::max(worst, std::abs(c - (it == b.coeffs_.end() ? cdouble(0) : it->second)));
    }
    for (const auto& [k, c] : b.coeffs_)
        if (!a.coeffs_.count(k)) worst = std::max(worst, std::abs(c));
    return worst;
}

NormEstimate sup_norm(const TrigPolynomial& p) {
    const std::int64_t d = p.degree();
    std::int64_t m = 1024;
    while (m < 64 * d) m *= 2;
    NormEstimate out;
    out.grid = m;
    for (std::int64_t j = 0; j < m; ++j)
        out.sampled = std::max(out.sampled, std::abs(p(2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m))));
    out.upper = out.sampled / (1.0 - std::numbers::pi * static_cast<double>(d) / static_cast<double>(m));
    return out;
}

DilationElement dilation_embed(std::int64_t n, const TrigPolynomial& x) {
    if (n < 0) throw DomainError("dilation_embed: level must lie in N");
    return {n, x};
}

DilationElement dilation_promote(const DilationElement& e, std::int64_t m) {
    if (m < e.level) throw DomainError("dilation_promote: target level below the element's level");
    return {m, e.payload.alpha(m - e.level)};
}

bool dilation_equal(const DilationElement& a, const DilationElement& b, double tol) {
    const std::int64_t m = std::max(a.level, b.level);
    const auto pa = dilation_promote(a, m).payload;
    const auto pb = dilation_promote(b, m).payload;
    double scale = 1.0;
    for (const auto& [k, c] : pa.coeffs()) scale = std::max(scale, std::abs(c));
    return coeff_distance(pa, pb) <= tol * scale;
}

DilationElement dilation_add(const DilationElement& a, const DilationElement& b) {
    const std::int64_t m = std::max(a.level, b.level);
    return {m, dilation_promote(a, m).payload + dilation_promote(b, m).payload};
}

NormEstimate dilation_norm(const DilationElement& e) { return sup_norm(e.payload); }

bool FiberMembershipCertificate::valid_over(Unit Y) const {
    return std::all_of(witness.begin(), witness.end(), [&](const CertificateTerm& t) { return Y.infinite || t.g <= Y.n; });
}

bool FiberMembershipCertificate::reproduces(double tol) const {
    DilationElement sum{0, TrigPolynomial()};
    for (const auto& t : witness) sum = dilation_add(sum, {t.generator.level, t.weight * t.generator.payload});
    return dilation_equal(sum, element, tol);
}

FiberMembershipCertificate fiber_section_F(const TrigPolynomial& x, const std::map<std::int64_t, cdouble>& f, Unit X) {
    if (!X.infinite && X.n < 0) throw DomainError("fiber_section_F: unit must lie in N u {inf}");
    FiberMembershipCertificate cert{X, {0, TrigPolynomial()}, {}};
    for (const auto& [g, w] : f) {
        if (!X.infinite && g > X.n) continue;
        // alpha_g^{-1}(x) is (g, x) for g >= 0 and alpha_{|g|}(x) at level 0 otherwise
        const DilationElement gen = g >= 0 ? DilationElement{g, x} : DilationElement{0, x.alpha(-g)};
        cert.witness.push_back({g, w, gen});
        cert.element = dilation_add(cert.element, {gen.level, w * gen.payload});
    }
    return cert;
}

}  // namespace whlab
