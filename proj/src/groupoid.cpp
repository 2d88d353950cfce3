#include "whlab/groupoid.hpp"

#include <set>
#include <sstream>

namespace whlab {

bool is_groupoid_element(Unit X, std::int64_t g) { return X.infinite || (X.n >= 0 && X.n + g >= 0); }

bool Window::contains(const GroupoidElement& e) const {
    if (e.g < -g_max || e.g > g_max) return false;
    return e.X.infinite || (e.X.n >= 0 && e.X.n <= x_max);
}

GroupoidSection::GroupoidSection(Eigen::Index k, Window window, EndomorphismAction action)
    : k_(k), window_(window), act_(std::move(action)) {
    if (window_.x_max < 0 || window_.g_max < 0) throw InputValidationError("groupoid window bounds must be nonnegative");
    if (act_.fiber_dim() != k_) throw InputValidationError("groupoid section: action fiber dimension mismatch");
    if (!act_.invertible()) throw InputValidationError("groupoid section: the fiber action must be invertible");
}

void GroupoidSection::set(const GroupoidElement& e, const MatrixXc& value) {
    if (!is_groupoid_element(e.X, e.g)) throw DomainError("groupoid section: " + e.to_string() + " is not an arrow");
    if (!window_.contains(e)) throw RangeError("groupoid section: " + e.to_string() + " lies outside the window");
    if (value.rows() != k_ || value.cols() != k_ || !all_finite(value))
        throw InputValidationError("groupoid section: bad fiber value at " + e.to_string());
    values_[e] = value;
}

void GroupoidSection::add(const GroupoidElement& e, const MatrixXc& value) {
    const auto it = values_.find(e);
    set(e, it == values_.end() ? value : MatrixXc(it->second + value));
}

MatrixXc GroupoidSection::at(const GroupoidElement& e) const {
    const auto it = values_.find(e);
    return it == values_.end() ? MatrixXc::Zero(k_, k_) : it->second;
}

double GroupoidSection::distance(const GroupoidSection& other) const {
    std::set<GroupoidElement> keys;
    for (const auto& [e, v] : values_) keys.insert(e);
    for (const auto& [e, v] : other.values_) keys.insert(e);
    double worst = 0;
    for (const auto& e : keys) {
        const MatrixXc d = at(e) - other.at(e);
        if (d.size()) worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {

void require_compatible(const GroupoidSection& a, const GroupoidSection& b, const char* who) {
    if (a.fiber_dim() != b.fiber_dim() || !(a.window() == b.window()))
        throw InputValidationError(std::string(who) + ": sections differ in fiber dimension or window");
    if ((a.action().generator() - b.action().generator()).norm() != 0.0)
        throw InputValidationError(std::string(who) + ": sections carry different fiber actions");
}

}  // namespace

GroupoidSection convolve(const GroupoidSection& phi, const GroupoidSection& psi) {
    require_compatible(phi, psi, "convolve");
    GroupoidSection out(phi.fiber_dim(), phi.window(), phi.action());
    // group psi by range unit so that each phi arrow meets only its composable partners
    std::map<Unit, std::vector<std::pair<std::int64_t, const MatrixXc*>>> by_range;
    for (const auto& [e, v] : psi.values()) by_range[e.X].push_back({e.g, &v});
    for (const auto& [e, v] : phi.values()) {
        const auto it = by_range.find(e.source());
        if (it == by_range.end()) continue;
        for (const auto& [u, w] : it->second) {
            const GroupoidElement target{e.X, e.g + u};
            if (!phi.window().contains(target))
                throw RangeError("convolve: product arrow " + target.to_string() + " overflows the window");
            out.add(target, MatrixXc(v * phi.action().apply_signed(*w, e.g)));
        }
    }
    return out;
}

GroupoidSection involute(const GroupoidSection& phi) {
    GroupoidSection out(phi.fiber_dim(), phi.window(), phi.action());
    for (const auto& [e, v] : phi.values()) {
        const GroupoidElement inv = e.inverse();
        if (!phi.window().contains(inv))
            throw RangeError("involute: inverse arrow " + inv.to_string() + " overflows the window");
        out.set(inv, phi.action().apply_signed(MatrixXc(v.adjoint()), inv.g));
    }
    return out;
}

double i_norm(const GroupoidSection& phi) {
    std::map<Unit, double> rows;
    std::map<Unit, double> cols;
    for (const auto& [e, v] : phi.values()) {
        const double n = operator_norm(v);
        rows[e.range()] += n;
        cols[e.source()] += n;
    }
    double worst = 0;
    for (const auto& [u, s] : rows) worst = std::max(worst, s);
    for (const auto& [u, s] : cols) worst = std::max(worst, s);
    return worst;
}

Lift lift_and_hat(const SymbolFunction& f, const Window& window, const EndomorphismAction& action) {
    if (f.fiber_dim() != action.fiber_dim()) throw InputValidationError("lift_and_hat: fiber dimension mismatch");
    if (f.radius() > window.g_max) {
        std::ostringstream os;
        os << "lift_and_hat: symbol support radius " << f.radius() << " exceeds window g_max " << window.g_max;
        throw RangeError(os.str());
    }
    Lift out{GroupoidSection(f.fiber_dim(), window, action), hat(f)};
    for (const auto& [s, v] : f.values()) {
        for (std::int64_t x = 0; x <= window.x_max; ++x)
            if (is_groupoid_element(Unit::at(x), s)) out.tilde.set({Unit::at(x), s}, v);
        out.tilde.set({Unit::inf(), s}, v);
    }
    return out;
}

TruncatedOperator lambda_rep(const GroupoidSection& phi, std::int64_t N) {
    if (N < 0) throw InputValidationError("lambda_rep: negative truncation level");
    if (phi.window().x_max < N) {
        std::ostringstream os;
        os << "lambda_rep: truncation level " << N << " exceeds window x_max " << phi.window().x_max;
        throw RangeError(os.str());
    }
    TruncatedOperator out(N, N, phi.fiber_dim());
    for (const auto& [e, v] : phi.values()) {
        if (e.X.infinite || e.X.n > N) continue;
        const std::int64_t m = e.X.n;
        const std::int64_t n = m + e.g;
        if (n < 0 || n > N) continue;
        out.block(m, n) = phi.action().apply(v, m);
    }
    return out;
}

GroupoidSection shift_R(std::int64_t a, const GroupoidSection& psi) {
    if (a < 0) throw DomainError("shift_R: a must lie in N");
    GroupoidSection out(psi.fiber_dim(), psi.window(), psi.action());
    for (const auto& [e, v] : psi.values()) {
        // psi(Y, u) feeds R_a(psi)(Y - a, u + a); units below a have no preimage in Omega
        if (!e.X.infinite && e.X.n < a) continue;
        const GroupoidElement target{e.X.shifted(-a), e.g + a};
        if (!psi.window().contains(target))
            throw RangeError("shift_R: arrow " + target.to_string() + " overflows the window");
        out.set(target, psi.action().apply(v, a));
    }
    return out;
}

}  // namespace whlab
