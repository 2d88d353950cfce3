#include "whlab/fell.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace whlab {

namespace {

constexpr std::size_t kMaxGridPoints = 4'000'000;

// Euclidean distance from p to {q : q <= corner} with +-inf corners allowed.
double corner_distance(std::span<const double> p, std::span<const double> corner) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double excess = p[i] - corner[i];
        if (excess > 0) s += excess * excess;
    }
    return std::sqrt(s);
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::size_t grid_count(double lo, double hi, double step) {
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

}  // namespace

std::string_view to_string(Ambient a) {
    switch (a) {
        case Ambient::Z: return "Z";
        case Ambient::R: return "R";
        case Ambient::R2: return "R2";
    }
    return "?";
}

Ambient parse_ambient(std::string_view name) {
    if (name == "Z") return Ambient::Z;
    if (name == "R") return Ambient::R;
    if (name == "R2") return Ambient::R2;
    throw InputValidationError("unknown ambient '" + std::string(name) + "' (expected Z, R or R2)");
}

int ambient_dim(Ambient a) { return a == Ambient::R2 ? 2 : 1; }

void GridFrame::validate() const {
    const auto d = static_cast<std::size_t>(ambient_dim(ambient));
    if (lo.size() != d || hi.size() != d) throw InputValidationError("grid frame: window arity does not match ambient");
    if (!(step > 0) || !std::isfinite(step)) throw InputValidationError("grid frame: step must be positive");
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i])
            throw InputValidationError("grid frame: window must be a finite box with lo <= hi");
        if (ambient == Ambient::Z && (!is_integer(lo[i]) || !is_integer(hi[i]) || step != 1.0))
            throw InputValidationError("grid frame: Z requires integer bounds and step 1");
        total *= grid_count(lo[i], hi[i], step);
        if (total > kMaxGridPoints) throw InputValidationError("grid frame: too many grid points");
    }
}

std::vector<std::vector<double>> GridFrame::grid_points() const {
    validate();
    std::vector<std::vector<double>> out;
    if (ambient_dim(ambient) == 1) {
        const std::size_t n = grid_count(lo[0], hi[0], step);
        for (std::size_t k = 0; k < n; ++k) out.push_back({lo[0] + static_cast<double>(k) * step});
    } else {
        const std::size_t nx = grid_count(lo[0], hi[0], step);
        const std::size_t ny = grid_count(lo[1], hi[1], step);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j)
                out.push_back({lo[0] + static_cast<double>(i) * step, lo[1] + static_cast<double>(j) * step});
    }
    return out;
}

ClosedSetModel::ClosedSetModel(GridFrame frame, Distance distance, std::string description)
    : frame_(std::move(frame)), distance_(std::move(distance)), description_(std::move(description)) {
    frame_.validate();
    if (!distance_) throw InputValidationError("closed set: missing distance oracle");
}

ClosedSetModel empty_set(const GridFrame& frame) {
    return ClosedSetModel(frame, [](std::span<const double>) { return HUGE_VAL; }, "empty");
}

ClosedSetModel whole_set(const GridFrame& frame) {
    return ClosedSetModel(frame, [](std::span<const double>) { return 0.0; }, "all");
}

ClosedSetModel ray_set(const GridFrame& frame, double endpoint) {
    if (ambient_dim(frame.ambient) != 1) throw InputValidationError("ray: needs a one-dimensional ambient");
    return ClosedSetModel(
        frame, [endpoint](std::span<const double> p) { return std::max(0.0, p[0] - endpoint); },
        "ray(" + format_double(endpoint) + ")");
}

ClosedSetModel interval_set(const GridFrame& frame, double lo, double hi) {
    if (ambient_dim(frame.ambient) != 1) throw InputValidationError("interval: needs a one-dimensional ambient");
    if (lo > hi) return empty_set(frame);
    return ClosedSetModel(
        frame, [lo, hi](std::span<const double> p) { return std::max({0.0, lo - p[0], p[0] - hi}); },
        "interval(" + format_double(lo) + "," + format_double(hi) + ")");
}

ClosedSetModel quadrant_set(const GridFrame& frame, double cx, double cy) {
    if (frame.ambient != Ambient::R2) throw InputValidationError("quadrant: needs the R2 ambient");
    return ClosedSetModel(
        frame,
        [cx, cy](std::span<const double> p) {
            const double c[2] = {cx, cy};
            return corner_distance(p, c);
        },
        "quadrant(" + format_double(cx) + "," + format_double(cy) + ")");
}

ClosedSetModel union_set(const GridFrame& frame, std::vector<ClosedSetModel> parts) {
    std::string desc = "union(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!(parts[i].frame() == frame)) throw InputValidationError("union: parts must share the frame");
        desc += (i ? "," : "") + parts[i].description();
    }
    desc += ")";
    return ClosedSetModel(
        frame,
        [parts = std::move(parts)](std::span<const double> p) {
            double best = HUGE_VAL;
            for (const auto& s : parts) best = std::min(best, s.distance(p));
            return best;
        },
        desc);
}

ClosedSetModel grid_set(const GridFrame& frame, const std::vector<char>& mask, std::string description) {
    const auto pts = frame.grid_points();
    if (mask.size() != pts.size()) throw InputValidationError("grid set: mask size does not match the grid");
    const std::size_t ny = ambient_dim(frame.ambient) == 2 ? grid_count(frame.lo[1], frame.hi[1], frame.step) : 1;
    const std::size_t nx = pts.size() / ny;
    // Distance 0 when the nearest grid point is flagged, one step otherwise.
    return ClosedSetModel(
        frame,
        [frame, mask, nx, ny](std::span<const double> p) {
            std::size_t idx[2] = {0, 0};
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double k = std::round((p[i] - frame.lo[i]) / frame.step);
                const std::size_t n = i == 0 ? nx : ny;
                if (k < 0 || k > static_cast<double>(n - 1)) return HUGE_VAL;
                idx[i] = static_cast<std::size_t>(k);
            }
            return mask[idx[0] * ny + idx[1]] ? 0.0 : frame.step;
        },
        std::move(description));
}

FellLimit fell_limit(const std::vector<ClosedSetModel>& seq) {
    if (seq.empty()) throw InputValidationError("fell_limit: empty sequence");
    const GridFrame& frame = seq.front().frame();
    for (const auto& s : seq)
        if (!(s.frame() == frame)) throw InputValidationError("fell_limit: sets must share ambient, window and grid");

    FellLimit out;
    out.grid = frame.grid_points();
    const std::size_t n = seq.size();
    const std::size_t tail = std::max(std::min<std::size_t>(2, n), (n + 3) / 4);
    out.tail_start = n - tail;
    out.liminf.assign(out.grid.size(), 1);
    out.limsup.assign(out.grid.size(), 0);
    for (std::size_t k = 0; k < out.grid.size(); ++k) {
        for (std::size_t m = out.tail_start; m < n; ++m) {
            const bool in = seq[m].contains(out.grid[k]);
            if (!in) out.liminf[k] = 0;
            if (in) out.limsup[k] = 1;
        }
        if (out.liminf[k] != out.limsup[k]) ++out.disagreements;
    }
    out.converges = out.disagreements == 0;
    if (out.converges) out.limit = grid_set(frame, out.liminf, "fell_limit");
    return out;
}

std::vector<std::pair<double, double>> grid_runs(const FellLimit& result) {
    std::vector<std::pair<double, double>> runs;
    if (result.grid.empty() || result.grid.front().size() != 1) return runs;
    const auto& mask = result.converges ? result.liminf : result.limsup;
    for (std::size_t k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        if (k > 0 && mask[k - 1])
            runs.back().second = result.grid[k][0];
        else
            runs.emplace_back(result.grid[k][0], result.grid[k][0]);
    }
    return runs;
}

std::string_view to_string(OmegaModel m) {
    switch (m) {
        case OmegaModel::halfline: return "halfline";
        case OmegaModel::discrete: return "discrete";
        case OmegaModel::cone2d: return "cone2d";
    }
    return "?";
}

bool OmegaPoint::is_infinite() const {
    return std::all_of(coords.begin(), coords.end(), [](const ExtendedReal& c) { return c.infinite; });
}

void OmegaPoint::validate_extended() const {
    const std::size_t arity = model == OmegaModel::cone2d ? 2 : 1;
    if (coords.size() != arity) throw InputValidationError("omega point: wrong number of coordinates");
    for (const auto& c : coords) {
        if (c.infinite) continue;
        if (!std::isfinite(c.value)) throw InputValidationError("omega point: non-finite corner");
        if (model == OmegaModel::discrete && !is_integer(c.value))
            throw InputValidationError("omega point: discrete model needs integer corners");
    }
}

bool OmegaPoint::in_omega() const {
    validate_extended();
    return std::all_of(coords.begin(), coords.end(), [](const ExtendedReal& c) { return c.infinite || c.value >= 0; });
}

std::string OmegaPoint::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) s += ",";
        s += coords[i].infinite ? "inf" : format_double(coords[i].value);
    }
    return coords.size() > 1 ? "(" + s + ")" : s;
}

OmegaPoint omega_translate(const OmegaPoint& x, std::span<const double> g) {
    x.validate_extended();
    if (g.size() != x.coords.size()) throw InputValidationError("omega_translate: group element arity mismatch");
    OmegaPoint out = x;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (x.model == OmegaModel::discrete && !is_integer(g[i]))
            throw InputValidationError("omega_translate: discrete model needs an integer group element");
        if (!out.coords[i].infinite) out.coords[i].value += g[i];
    }
    return out;
}

ClosedSetModel omega_as_set(const OmegaPoint& x, const GridFrame& frame) {
    x.validate_extended();
    if (x.model == OmegaModel::cone2d) {
        const double cx = x.coords[0].infinite ? HUGE_VAL : x.coords[0].value;
        const double cy = x.coords[1].infinite ? HUGE_VAL : x.coords[1].value;
        if (x.is_infinite()) return whole_set(frame);
        return quadrant_set(frame, cx, cy);
    }
    if (x.coords[0].infinite) return whole_set(frame);
    return ray_set(frame, x.coords[0].value);
}

namespace {

bool translate_membership_impl(const OmegaPoint& a, std::span<const double> g) {
    const bool via_translate = omega_translate(a, g).in_omega();
    // g^{-1} in A, read off the corner distance of -g to A
    std::vector<double> minus_g(g.begin(), g.end());
    for (auto& v : minus_g) v = -v;
    std::vector<double> corner;
    for (const auto& c : a.coords) corner.push_back(c.infinite ? HUGE_VAL : c.value);
    const bool via_set = corner_distance(minus_g, corner) == 0.0;
    if (via_translate != via_set) {
        std::ostringstream os;
        os << "Q_X = X^{-1} violated at X = " << a.to_string() << ": translate test " << via_translate
           << ", set test " << via_set;
        throw InvariantViolation(os.str());
    }
    return via_translate;
}

}  // namespace

bool omega_qset(const OmegaPoint& x, std::span<const double> g) {
    if (!x.in_omega()) throw DomainError("omega_qset: X = " + x.to_string() + " is not a point of Omega");
    return translate_membership_impl(x, g);
}

bool omega_qset(const OmegaPoint& x, double g) { return omega_qset(x, std::span<const double>(&g, 1)); }

bool omega_translate_membership(const OmegaPoint& a, std::span<const double> g) {
    a.validate_extended();
    return translate_membership_impl(a, g);
}

bool omega_translate_membership(const OmegaPoint& a, double g) {
    return omega_translate_membership(a, std::span<const double>(&g, 1));
}

std::string_view to_string(OmegaClass c) { return c == OmegaClass::interior ? "interior" : "boundary"; }

OmegaClass classify_omega(const OmegaPoint& x) {
    if (!x.in_omega()) throw DomainError("classify_omega: X = " + x.to_string() + " is not a point of Omega");
    // X = {p <= x} meets the interior of P iff every finite corner coordinate is
    // positive; for N the interior is {1, 2, ...}, which gives the same test.
    for (const auto& c : x.coords)
        if (!c.infinite && c.value <= 0) return OmegaClass::boundary;
    return OmegaClass::interior;
}

}  // namespace whlab
