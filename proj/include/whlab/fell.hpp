#pragma once

// Closed subsets of Z, R and R^2 with exact distance oracles, grid-discretised
// Fell limits, and the order compactification Omega of the desk semigroups
// N in Z, [0, inf) in R and the closed quadrant in R^2. A point X of Omega is
// stored by its "corner": X = x stands for the closed set {p : p <= x}
// (coordinatewise), with an infinite coordinate meaning no constraint.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "whlab/errors.hpp"

namespace whlab {

enum class Ambient { Z, R, R2 };

std::string_view to_string(Ambient a);
Ambient parse_ambient(std::string_view name);
int ambient_dim(Ambient a);

// Window and grid shared by all sets of a sequence. For Z the step is 1 and the
// bounds are integers.
struct GridFrame {
    Ambient ambient = Ambient::R;
    std::vector<double> lo;
    std::vector<double> hi;
    double step = 1.0;

    void validate() const;
    std::vector<std::vector<double>> grid_points() const;
    bool operator==(const GridFrame&) const = default;
};

class ClosedSetModel {
public:
    using Distance = std::function<double(std::span<const double>)>;

    ClosedSetModel(GridFrame frame, Distance distance, std::string description);

    const GridFrame& frame() const noexcept { return frame_; }
    const std::string& description() const noexcept { return description_; }
    double distance(std::span<const double> p) const { return distance_(p); }
    // Grid membership: within half a grid step of the set.
    bool contains(std::span<const double> p) const { return distance_(p) <= 0.5 * frame_.step; }
    bool contains(double x) const { return contains(std::span<const double>(&x, 1)); }

private:
    GridFrame frame_;
    Distance distance_;
    std::string description_;
};

// Factories. Infinite endpoints are accepted as +-HUGE_VAL.
ClosedSetModel empty_set(const GridFrame& frame);
ClosedSetModel whole_set(const GridFrame& frame);
ClosedSetModel ray_set(const GridFrame& frame, double endpoint);  // (-inf, endpoint]
ClosedSetModel interval_set(const GridFrame& frame, double lo, double hi);
ClosedSetModel quadrant_set(const GridFrame& frame, double cx, double cy);  // {x <= cx, y <= cy}
ClosedSetModel union_set(const GridFrame& frame, std::vector<ClosedSetModel> parts);
// The set of grid points flagged in `mask`, in grid_points() order.
ClosedSetModel grid_set(const GridFrame& frame, const std::vector<char>& mask, std::string description);

struct FellLimit {
    bool converges = false;
    std::optional<ClosedSetModel> limit;
    std::vector<std::vector<double>> grid;
    std::vector<char> liminf;
    std::vector<char> limsup;
    std::size_t tail_start = 0;
    std::size_t disagreements = 0;
};

// Discretised Fell limit of a finite sequence. The tail is the last
// max(min(2, n), ceil(n / 4)) sets; a grid point is in the liminf when every
// tail set contains it and in the limsup when some tail set does.
FellLimit fell_limit(const std::vector<ClosedSetModel>& seq);

// Maximal runs of consecutive member grid points, for one-dimensional frames.
std::vector<std::pair<double, double>> grid_runs(const FellLimit& result);

struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal inf() { return {0.0, true}; }
    static ExtendedReal of(double v) { return {v, false}; }
    bool operator==(const ExtendedReal&) const = default;
};

enum class OmegaModel { halfline, discrete, cone2d };

std::string_view to_string(OmegaModel m);

// A point of Omega or of its extension by translates (negative corners allowed).
struct OmegaPoint {
    OmegaModel model = OmegaModel::halfline;
    std::vector<ExtendedReal> coords;

    static OmegaPoint halfline(double x) { return {OmegaModel::halfline, {ExtendedReal::of(x)}}; }
    static OmegaPoint halfline_inf() { return {OmegaModel::halfline, {ExtendedReal::inf()}}; }
    static OmegaPoint discrete(std::int64_t n) {
        return {OmegaModel::discrete, {ExtendedReal::of(static_cast<double>(n))}};
    }
    static OmegaPoint discrete_inf() { return {OmegaModel::discrete, {ExtendedReal::inf()}}; }
    static OmegaPoint cone2d(ExtendedReal x, ExtendedReal y) { return {OmegaModel::cone2d, {x, y}}; }

    bool is_infinite() const;
    // Structurally valid as a translate (right arity, integer corners in the discrete model).
    void validate_extended() const;
    bool in_omega() const;
    std::string to_string() const;
    bool operator==(const OmegaPoint&) const = default;
};

// X.g: the translate of X by the group element g (corner shifted by g).
OmegaPoint omega_translate(const OmegaPoint& x, std::span<const double> g);

// The closed set X as a model on `frame`, for the raw membership test.
ClosedSetModel omega_as_set(const OmegaPoint& x, const GridFrame& frame);

// X.g in Omega, asserted equal to g^{-1} in X. Throws DomainError when X is not
// in Omega and InvariantViolation when the two computations disagree.
bool omega_qset(const OmegaPoint& x, std::span<const double> g);
bool omega_qset(const OmegaPoint& x, double g);

// The same statement on the extended space (A any translate of a point of Omega).
bool omega_translate_membership(const OmegaPoint& a, std::span<const double> g);
bool omega_translate_membership(const OmegaPoint& a, double g);

enum class OmegaClass { interior, boundary };

std::string_view to_string(OmegaClass c);

// Omega_0 = {X : X meets Int(P)}. Int(N) is taken to be {1, 2, ...}.
OmegaClass classify_omega(const OmegaPoint& x);

}  // namespace whlab
