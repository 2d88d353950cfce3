#include "whlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "whlab/homotopy.hpp"
#include "whlab/moebius.hpp"
#include "whlab/random.hpp"

namespace whlab {

namespace {

struct Measure {
    double worst = 0.0;
    double least = std::numeric_limits<double>::infinity();
    bool nan = false;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::string first_violation;
    std::string note;

    void error(double e) {
        ++checks;
        if (std::isnan(e)) nan = true;
        worst = std::max(worst, e);
    }
    void margin(double m) {
        ++checks;
        if (std::isnan(m)) nan = true;
        least = std::min(least, m);
    }
    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok && violations++ == 0) first_violation = what;
    }
};

// identity: error <= tolerance and no violations; margin: least >= tolerance;
// mutation: passes when the broken variant is caught.
enum class Kind { identity, margin, mutation };

using Cases = std::vector<CaseResult>;

void add_case(Cases& out, std::string name, double tolerance, Kind kind, const std::function<void(Measure&)>& body) {
    CaseResult r;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.status = "fail";
    try {
        Measure m;
        body(m);
        std::ostringstream os;
        os << m.checks << " checks";
        if (m.violations) os << ", " << m.violations << " violations, first: " << m.first_violation;
        if (!m.note.empty()) os << "; " << m.note;
        bool pass = false;
        switch (kind) {
            case Kind::identity:
                r.max_error = m.nan ? std::numeric_limits<double>::quiet_NaN() : m.worst;
                pass = !m.nan && m.worst <= tolerance && m.violations == 0;
                break;
            case Kind::margin:
                r.max_error = m.nan ? std::numeric_limits<double>::quiet_NaN() : m.least;
                pass = !m.nan && m.least >= tolerance && m.violations == 0;
                os << "; max_error holds the smallest margin";
                break;
            case Kind::mutation: {
                r.max_error = m.worst;
                const bool caught = m.nan || m.worst > tolerance || m.violations > 0;
                pass = caught;
                os << (caught ? "; broken variant caught" : "; broken variant NOT caught");
                break;
            }
        }
        r.status = pass ? "pass" : "fail";
        r.details = os.str();
    } catch (const Error& e) {
        r.details = std::string("error: ") + e.what();
    }
    out.push_back(std::move(r));
}

std::vector<int> dims_or(const SuiteConfig& cfg, int lo, int hi) {
    if (cfg.dim) return {*cfg.dim};
    std::vector<int> d;
    for (int k = lo; k <= hi; ++k) d.push_back(k);
    return d;
}

double opnorm(const MatrixXc& m) { return operator_norm(m); }

// Independent oracle for the smallest eigenvalue.
double eigen_lambda_min(const MatrixXc& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

MatrixXc hermitian_power(const HermitianMatrix& b, double p) {
    return functional_calculus(hermitian_eig(b), [p](cdouble z) { return std::pow(z.real(), p); });
}

// ------------------------------------------------------------------ moebius

// U [+] B with the sign of B flipped.
UnitaryMatrix boxplus_wrong_sign(const UnitaryMatrix& u, const HermitianMatrix& b) {
    return boxplus(u, HermitianMatrix(MatrixXc(-b.matrix())));
}

void moebius_suite(const SuiteConfig& cfg, Rng& rng, Cases& out) {
    const auto dims = dims_or(cfg, 1, 4);
    const int T = cfg.trials;
    const double tol = cfg.tol;

    add_case(out, "action_law_composition", 10 * tol, Kind::identity, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                const auto u = random_unitary<double>(d, rng);
                const auto a = random_hermitian<double>(d, rng);
                const auto b = random_hermitian<double>(d, rng);
                m.error(opnorm(boxplus(boxplus(u, a), b).matrix() - boxplus(u, a + b).matrix()));
            }
    });
    add_case(out, "action_law_cayley_translation", 10 * tol, Kind::identity, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                const auto a = random_hermitian<double>(d, rng);
                const auto b = random_hermitian<double>(d, rng);
                m.error(opnorm(boxplus(cayley(a), b).matrix() - cayley(a + b).matrix()));
            }
    });
    add_case(out, "invertibility_margin", 1e-6, Kind::margin, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < 10 * T; ++t) {
                const MatrixXc u = random_unitary<double>(d, rng).matrix();
                const MatrixXc b = random_hermitian<double>(d, rng).matrix();
                m.margin(min_singular_value(MatrixXc(b * u - b + cdouble(0, 2) * MatrixXc::Identity(d, d))));
            }
    });
    add_case(out, "psi_round_trip", 100 * tol, Kind::identity, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                const auto a = random_positive<double>(d, rng);
                const auto u = psi(a);
                m.check(classify_zpoint(u) == ZClass::interior_orbit, "psi(A) not in the interior orbit");
                m.error((psi_inv(u).matrix() - a.matrix()).norm() / std::max(1.0, a.matrix().norm()));
            }
    });
    add_case(out, "contraction_round_trip", 100 * tol, Kind::identity, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                const auto b = random_positive<double>(d, rng, 0.1);
                const MatrixXc b_half_inv = hermitian_power(b, -0.5);
                const HermitianMatrix b_inv(hermitian_power(b, -1.0));
                for (int j = 0; j < 10; ++j) {
                    // C = B^{-1/2} W B^{-1/2} with spec(W) in [0, 0.95] lies strictly below B^{-1}
                    const MatrixXc v = random_unitary<double>(d, rng).matrix();
                    VectorXc w(d);
                    std::uniform_real_distribution<double> spread(0.0, 0.95);
                    for (int i = 0; i < d; ++i) w(i) = spread(rng);
                    const HermitianMatrix c(MatrixXc(b_half_inv * v * w.asDiagonal() * v.adjoint() * b_half_inv));
                    const auto a = contraction_inverse(c, b);
                    const double scale = std::max(1.0, c.matrix().norm());
                    m.error((moebius_contraction(a, b).matrix() - c.matrix()).norm() / scale);

                    const auto a2 = random_positive<double>(d, rng);
                    const auto c2 = moebius_contraction(a2, b);
                    m.check(order_compare(c2, b_inv) == Order::lt, "contraction image not below B^{-1}");
                    m.error((contraction_inverse(c2, b).matrix() - a2.matrix()).norm() / std::max(1.0, a2.matrix().norm()));
                }
            }
    });
    add_case(out, "pair_round_trip", 100 * tol, Kind::identity, [&](Measure& m) {
        for (int d : dims) {
            const auto v = full_hermitian_algebra(d);
            for (int t = 0; t < T; ++t) {
                const auto p = random_pair(v, rng);
                const auto z = pair_decode(p);
                const auto q = pair_encode(z);
                m.error((q.E() - p.E()).norm());
                m.error((q.A() - p.A()).norm() / std::max(1.0, p.A().norm()));
                m.error(opnorm(pair_decode(q).matrix() - z.matrix()));
            }
        }
    });
    add_case(out, "pair_translation", 100 * tol, Kind::identity, [&](Measure& m) {
        for (int d : dims) {
            const auto v = full_hermitian_algebra(d);
            for (int t = 0; t < T; ++t) {
                const auto p = random_pair(v, rng);
                const auto b = random_element(v, rng);
                const MatrixXc f = MatrixXc::Identity(d, d) - p.E();
                const MatrixXc lhs = boxplus(UnitaryMatrix(pair_unitary(p.E(), p.A())), b).matrix();
                const MatrixXc rhs = pair_unitary(p.E(), MatrixXc(p.A() + f * b.matrix() * f));
                m.error(opnorm(lhs - rhs));
            }
        }
    });
    add_case(out, "qset_reproduces_Q", 0.0, Kind::identity, [&](Measure& m) {
        std::uniform_real_distribution<double> shift(-2.0, 2.0);
        for (int d : dims)
            for (const auto& v : {full_hermitian_algebra(d), real_symmetric_algebra(d), diagonal_algebra(d)}) {
                const PairRep<double> origin(MatrixXc::Zero(d, d), MatrixXc::Zero(d, d));
                for (int t = 0; t < T; ++t) {
                    const MatrixXc x = random_element(v, rng).matrix();
                    const HermitianMatrix b(MatrixXc(x + shift(rng) * MatrixXc::Identity(d, d)));
                    const bool oracle = eigen_lambda_min(b.matrix()) >= -tol * std::max(1.0, b.matrix().norm());
                    m.check(qset_contains(origin, b, v) == oracle, "Q_(0,0) membership differs from positivity");
                }
            }
    });
    add_case(out, "separation_of_distinct_points", 0.0, Kind::identity, [&](Measure& m) {
        for (int d : dims) {
            const auto v = full_hermitian_algebra(d);
            for (int t = 0; t < T; ++t) {
                auto p1 = random_pair(v, rng);
                auto p2 = random_pair(v, rng);
                while ((p1.E() - p2.E()).norm() + (p1.A() - p2.A()).norm() < 1e-6) p2 = random_pair(v, rng);
                const auto s = separate_points(p1, p2, v);
                m.check(s.kind != SeparationKind::equal, "distinct points reported equal");
                m.check(s.kind == SeparationKind::witness, "no separating witness found");
                if (s.kind == SeparationKind::witness) {
                    const HermitianMatrix w(s.witness);
                    m.check(qset_contains(p1, w, v) != qset_contains(p2, w, v), "witness does not separate");
                }
            }
        }
    });
    add_case(out, "mutation_boxplus_wrong_sign", 10 * tol, Kind::mutation, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                const auto a = random_hermitian<double>(d, rng);
                const auto b = random_hermitian<double>(d, rng);
                m.error(opnorm(boxplus_wrong_sign(cayley(a), b).matrix() - cayley(a + b).matrix()));
            }
    });
}

// ------------------------------------------------------------------- jordan

void jordan_suite(const SuiteConfig& cfg, Rng& rng, Cases& out) {
    const auto dims = dims_or(cfg, 1, 4);
    const int T = cfg.trials;
    const double tol = cfg.tol;

    auto closure_defect = [](const JordanAlgebra<double>& v, Measure& m) {
        const Eigen::Index d = v.dim();
        m.error(v.distance(MatrixXc::Identity(d, d)));
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i; j < v.size(); ++j)
                m.error(v.distance(jordan_product<double>(v.basis()[i], v.basis()[j])));
    };

    add_case(out, "generated_algebra_closure", 10 * tol, Kind::identity, [&](Measure& m) {
        std::uniform_int_distribution<int> count(1, 2);
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                std::vector<HermitianMatrix> gens;
                for (int g = count(rng); g > 0; --g) gens.push_back(random_hermitian<double>(d, rng));
                closure_defect(generate_algebra(gens, d, tol), m);
            }
    });
    add_case(out, "known_dimensions", 0.0, Kind::identity, [&](Measure& m) {
        for (int d : dims) {
            const auto sd = static_cast<std::size_t>(d);
            m.check(full_hermitian_algebra(d, tol).size() == sd * sd, "full Hermitian algebra dimension");
            m.check(real_symmetric_algebra(d, tol).size() == sd * (sd + 1) / 2, "real symmetric algebra dimension");
            m.check(diagonal_algebra(d, tol).size() == sd, "diagonal algebra dimension");
            // one generic generator spans the commutative algebra of its spectral projections
            m.check(generate_algebra<double>({random_hermitian<double>(d, rng)}, d, tol).size() == sd,
                    "singly generated algebra dimension");
        }
    });
    add_case(out, "cone_classification", 0.0, Kind::identity, [&](Measure& m) {
        for (int d : dims) {
            const auto v = full_hermitian_algebra(d, tol);
            const MatrixXc id = MatrixXc::Identity(d, d);
            for (int t = 0; t < T; ++t) {
                const MatrixXc x = random_element(v, rng).matrix();
                m.check(in_cone(v, HermitianMatrix(MatrixXc(x * x))), "square outside the cone");
                m.check(classify(v, HermitianMatrix(MatrixXc(x * x + 0.1 * id))) == ConeClass::interior,
                        "shifted square not interior");
                m.check(classify(v, HermitianMatrix(MatrixXc(-x * x - 0.1 * id))) == ConeClass::outside_cone,
                        "negative element inside the cone");
                const double lmin = eigen_lambda_min(x);
                if (std::abs(lmin) > 1e-6) m.check(in_cone(v, HermitianMatrix(x)) == (lmin > 0), "cone test vs eigenvalues");
            }
            if (d >= 2) {
                const auto diag = diagonal_algebra(d, tol);
                for (int t = 0; t < T; ++t)
                    m.check(classify(diag, random_hermitian<double>(d, rng)) == ConeClass::outside_algebra,
                            "non-diagonal element inside the diagonal algebra");
            }
        }
    });
    add_case(out, "order_relation", 0.0, Kind::identity, [&](Measure& m) {
        for (int d : dims)
            for (int t = 0; t < T; ++t) {
                const auto a = random_hermitian<double>(d, rng);
                const auto p = random_positive<double>(d, rng, 0.1);
                const HermitianMatrix q(random_projection<double>(d, rng));
                m.check(order_compare(a, a + p) == Order::lt, "A < A + P");
                m.check(order_compare(a + p, a) == Order::incomparable_or_gt, "A + P not below A");
                const Order o = order_compare(a, a + q);
                m.check(o == Order::leq || (o == Order::lt && eigen_lambda_min(q.matrix()) > tol), "A <= A + projection");
                m.check(order_compare(a, a) == Order::leq, "reflexivity");
            }
    });
    add_case(out, "mutation_dropped_basis_element", 10 * tol, Kind::mutation, [&](Measure& m) {
        for (int d : dims) {
            auto basis = full_hermitian_algebra(d, tol).basis();
            // rotate so the dropped direction is generic, then drop it
            const auto u = random_unitary<double>(d, rng).matrix();
            for (auto& b : basis) b = u * b * u.adjoint();
            basis.pop_back();
            closure_defect(JordanAlgebra<double>(d, basis, tol), m);
        }
    });
}

// --------------------------------------------------------------------- fell

void fell_suite(const SuiteConfig& cfg, Rng&, Cases& out) {
    const double h = cfg.grid_step;

    add_case(out, "omega_qset_discrete", 0.0, Kind::identity, [&](Measure& m) {
        for (std::int64_t x = -1; x <= 16; ++x)
            for (std::int64_t g = -20; g <= 20; ++g) {
                const OmegaPoint X = x < 0 ? OmegaPoint::discrete_inf() : OmegaPoint::discrete(x);
                // g^{-1} = -g lies in (-inf, x]
                const bool oracle = x < 0 || -g <= x;
                m.check(omega_qset(X, double(g)) == oracle, X.to_string() + " g=" + std::to_string(g));
            }
    });
    add_case(out, "omega_qset_halfline", 0.0, Kind::identity, [&](Measure& m) {
        const auto kmax = static_cast<std::int64_t>(std::floor(8.0 / h));
        for (std::int64_t k = -1; k <= kmax; ++k)
            for (std::int64_t j = -kmax - 4; j <= kmax + 4; ++j) {
                const OmegaPoint X = k < 0 ? OmegaPoint::halfline_inf() : OmegaPoint::halfline(double(k) * h);
                const bool oracle = k < 0 || -j <= k;
                m.check(omega_qset(X, double(j) * h) == oracle, X.to_string() + " g=" + std::to_string(double(j) * h));
            }
    });
    add_case(out, "omega_qset_cone2d", 0.0, Kind::identity, [&](Measure& m) {
        auto coord = [](int v) { return v < 0 ? ExtendedReal::inf() : ExtendedReal::of(v); };
        for (int x = -1; x <= 4; ++x)
            for (int y = -1; y <= 4; ++y)
                for (int gx = -5; gx <= 5; ++gx)
                    for (int gy = -5; gy <= 5; ++gy) {
                        const OmegaPoint X = OmegaPoint::cone2d(coord(x), coord(y));
                        const double g[2] = {double(gx), double(gy)};
                        const bool oracle = (x < 0 || -gx <= x) && (y < 0 || -gy <= y);
                        m.check(omega_qset(X, std::span<const double>(g, 2)) == oracle, X.to_string());
                    }
    });

    GridFrame frame{Ambient::R, {-8.0}, {8.0}, h};
    add_case(out, "fell_constant_sequence", 0.0, Kind::identity, [&](Measure& m) {
        const std::vector<ClosedSetModel> seq(12, ray_set(frame, 1.0));
        const auto r = fell_limit(seq);
        m.check(r.converges, "constant sequence does not converge");
        const auto target = ray_set(frame, 1.0);
        for (std::size_t i = 0; i < r.grid.size(); ++i)
            m.check(bool(r.liminf[i]) == target.contains(r.grid[i][0]), "limit differs from the constant set");
    });
    add_case(out, "fell_escaping_sequence", 0.0, Kind::identity, [&](Measure& m) {
        std::vector<ClosedSetModel> seq;
        for (int n = 0; n < 16; ++n) seq.push_back(interval_set(frame, n, n + 1.0));
        const auto r = fell_limit(seq);
        m.check(r.converges, "escaping sequence does not converge");
        m.check(std::none_of(r.liminf.begin(), r.liminf.end(), [](char c) { return c != 0; }), "limit is not empty");
    });
    add_case(out, "fell_alternating_sequence", 0.0, Kind::identity, [&](Measure& m) {
        std::vector<ClosedSetModel> seq;
        for (int n = 0; n < 12; ++n) seq.push_back(ray_set(frame, n % 2 ? 2.0 : 0.0));
        const auto r = fell_limit(seq);
        m.check(!r.converges, "alternating sequence reported convergent");
        m.check(r.disagreements > 0, "no liminf/limsup disagreement");
    });
    add_case(out, "mutation_qset_wrong_shift", 0.0, Kind::mutation, [&](Measure& m) {
        for (std::int64_t x = 0; x <= 8; ++x)
            for (std::int64_t g = -10; g <= 10; ++g)
                // g in X instead of g^{-1} in X
                m.check(omega_qset(OmegaPoint::discrete(x), double(g)) == (g <= x), "shift direction");
    });
}

// ----------------------------------------------------------------- toeplitz

EndomorphismAction make_action(Eigen::Index k, Rng& rng) {
    return k == 1 ? EndomorphismAction::identity(1) : EndomorphismAction::conjugation(random_unitary<double>(k, rng).matrix());
}

SymbolFunction random_symbol(Eigen::Index k, std::int64_t radius, Rng& rng) {
    SymbolFunction f(k);
    for (std::int64_t g = -radius; g <= radius; ++g)
        if (rng() % 2) f.set(g, random_gaussian<double>(k, k, rng));
    if (f.values().empty()) f.set(0, random_gaussian<double>(k, k, rng));
    return f;
}

void toeplitz_suite(const SuiteConfig& cfg, Rng& rng, Cases& out) {
    const std::int64_t N = cfg.N;
    const int T = cfg.trials;
    const double tol = cfg.tol;

    add_case(out, "covariance", 0.01 * tol, Kind::identity, [&](Measure& m) {
        for (Eigen::Index k : {1, 2}) {
            const auto act = make_action(k, rng);
            for (int t = 0; t < std::max(1, T / 5); ++t) {
                const MatrixXc x = random_gaussian<double>(k, k, rng);
                for (std::int64_t a = 0; a <= 8; ++a) m.error(covariance_residual(x, a, act, N));
            }
        }
    });
    add_case(out, "isometry", 0.01 * tol, Kind::identity, [&](Measure& m) {
        for (Eigen::Index k : {1, 2})
            for (std::int64_t a = 0; a <= 8; ++a) {
                const auto v = isometry_V(a, N, k);
                m.error((v.adjoint() * v - identity_operator(N, k)).max_abs_entry());
            }
    });
    add_case(out, "rep_pi_multiplicative", 0.01 * tol, Kind::identity, [&](Measure& m) {
        for (Eigen::Index k : {1, 2}) {
            const auto act = make_action(k, rng);
            for (int t = 0; t < T; ++t) {
                const MatrixXc x = random_gaussian<double>(k, k, rng), y = random_gaussian<double>(k, k, rng);
                m.error((rep_pi(x, act, N) * rep_pi(y, act, N) - rep_pi(MatrixXc(x * y), act, N)).max_abs_entry());
                m.error((rep_pi(x, act, N).adjoint() - rep_pi(MatrixXc(x.adjoint()), act, N)).max_abs_entry());
            }
        }
    });
    add_case(out, "wiener_hopf_adjoint", 0.01 * tol, Kind::identity, [&](Measure& m) {
        for (Eigen::Index k : {1, 2}) {
            const auto act = make_action(k, rng);
            for (int t = 0; t < T; ++t) {
                const auto f = random_symbol(k, std::min<std::int64_t>(8, N), rng);
                m.error((wiener_hopf(adjoint_symbol(f, act), act, N) - wiener_hopf(f, act, N).adjoint()).max_abs_entry());
            }
        }
    });
    add_case(out, "mutation_covariance_wrong_shift", 0.01 * tol, Kind::mutation, [&](Measure& m) {
        const auto act = make_action(2, rng);
        for (int t = 0; t < std::max(1, T / 5); ++t) {
            const MatrixXc x = random_gaussian<double>(2, 2, rng);
            for (std::int64_t a = 1; a <= 8; ++a) {
                const auto v = isometry_V(a, N, 2);
                const auto lhs = v.adjoint() * rep_pi(x, act, N + a) * v;
                m.error((lhs - rep_pi(act.apply_signed(x, -a), act, N)).max_abs_entry());
            }
        }
    });
}

// ----------------------------------------------------------------- groupoid

GroupoidSection random_section(const Window& w, const EndomorphismAction& act, std::int64_t radius, int count, Rng& rng) {
    const Eigen::Index k = act.fiber_dim();
    GroupoidSection s(k, w, act);
    std::uniform_int_distribution<std::int64_t> unit(-1, w.x_max);
    std::uniform_int_distribution<std::int64_t> arrow(-radius, radius);
    for (int placed = 0; placed < count;) {
        const std::int64_t x = unit(rng);
        const Unit X = x < 0 ? Unit::inf() : Unit::at(x);
        const std::int64_t g = arrow(rng);
        if (!is_groupoid_element(X, g) || !w.contains(GroupoidElement{X, g}.inverse())) continue;
        s.set({X, g}, random_gaussian<double>(k, k, rng));
        ++placed;
    }
    return s;
}

// phi*(X, s) = phi(X + s, -s)* without the alpha_s twist.
GroupoidSection involute_untwisted(const GroupoidSection& phi) {
    GroupoidSection out(phi.fiber_dim(), phi.window(), phi.action());
    for (const auto& [e, v] : phi.values()) out.set(e.inverse(), MatrixXc(v.adjoint()));
    return out;
}

void groupoid_suite(const SuiteConfig& cfg, Rng& rng, Cases& out) {
    const int T = cfg.trials;
    const double tol = cfg.tol;
    const Window w{16, 12};
    const std::int64_t Nl = 12;

    struct Triple {
        GroupoidSection a, b, c;
    };
    std::vector<Triple> samples;
    for (Eigen::Index k : {1, 2}) {
        const auto act = make_action(k, rng);
        for (int t = 0; t < T; ++t)
            samples.push_back({random_section(w, act, 3, 12, rng), random_section(w, act, 3, 12, rng),
                               random_section(w, act, 3, 12, rng)});
    }

    add_case(out, "associativity", 0.1 * tol, Kind::identity, [&](Measure& m) {
        for (const auto& s : samples) m.error(convolve(convolve(s.a, s.b), s.c).distance(convolve(s.a, convolve(s.b, s.c))));
    });
    add_case(out, "involution", 0.1 * tol, Kind::identity, [&](Measure& m) {
        for (const auto& s : samples) {
            m.error(involute(involute(s.a)).distance(s.a));
            m.error(std::abs(i_norm(involute(s.a)) - i_norm(s.a)));
            m.error(involute(convolve(s.a, s.b)).distance(convolve(involute(s.b), involute(s.a))));
        }
    });
    add_case(out, "i_norm_submultiplicative", 0.0, Kind::identity, [&](Measure& m) {
        for (const auto& s : samples)
            m.check(i_norm(convolve(s.a, s.b)) <= i_norm(s.a) * i_norm(s.b) * (1 + 1e-12), "||ab||_I > ||a||_I ||b||_I");
    });
    add_case(out, "lambda_norm_bound", 0.0, Kind::identity, [&](Measure& m) {
        for (const auto& s : samples)
            m.check(lambda_rep(s.a, Nl).norm() <= i_norm(s.a) * (1 + 1e-12), "||Lambda(f)|| > ||f||_I");
    });
    add_case(out, "lambda_star_homomorphism", 0.01 * tol, Kind::identity, [&](Measure& m) {
        for (const auto& s : samples) {
            m.error((lambda_rep(involute(s.a), Nl) - lambda_rep(s.a, Nl).adjoint()).max_abs_entry());
            // products agree away from the truncation edge
            const Eigen::Index k = s.a.fiber_dim();
            const MatrixXc diff = (lambda_rep(convolve(s.a, s.b), Nl) - lambda_rep(s.a, Nl) * lambda_rep(s.b, Nl)).dense();
            m.error(diff.topRows((Nl + 1 - 3) * k).cwiseAbs().maxCoeff());
        }
    });
    add_case(out, "central_identity", 0.01 * tol, Kind::identity, [&](Measure& m) {
        const std::int64_t N = cfg.N;
        for (Eigen::Index k : {1, 2}) {
            const auto act = make_action(k, rng);
            for (int t = 0; t < T; ++t) {
                const auto lift = lift_and_hat(random_symbol(k, 8, rng), {N, 8}, act);
                m.error((lambda_rep(lift.tilde, N) - wiener_hopf(lift.hat, act, N)).max_abs_entry());
            }
        }
    });
    add_case(out, "shift_R_semigroup", 0.1 * tol, Kind::identity, [&](Measure& m) {
        const auto act = make_action(2, rng);
        const Window big{24, 24};
        for (int t = 0; t < std::max(1, T / 4); ++t) {
            const auto psi = random_section(big, act, 2, 20, rng);
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; b <= 3; ++b) m.error(shift_R(a, shift_R(b, psi)).distance(shift_R(a + b, psi)));
        }
    });
    add_case(out, "mutation_untwisted_involution", 0.1 * tol, Kind::mutation, [&](Measure& m) {
        for (const auto& s : samples)
            if (s.a.fiber_dim() == 2)
                m.error(involute_untwisted(convolve(s.a, s.b))
                            .distance(convolve(involute_untwisted(s.b), involute_untwisted(s.a))));
    });
}

// ------------------------------------------------------------------- fibers

PiecewiseLinear random_pl(Rng& rng, int pieces) {
    // dyadic breakpoints, crowded towards 0
    std::uniform_int_distribution<int> level(1, 14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n;
    std::vector<double> b{0.0, 1.0};
    for (int i = 1; i < pieces; ++i) {
        const int L = level(rng);
        const double num = std::floor(u(rng) * std::ldexp(1.0, L));
        if (num > 0) b.push_back(std::ldexp(num, -L));
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<cdouble> v;
    for (std::size_t i = 0; i < b.size(); ++i) v.emplace_back(n(rng), n(rng));
    return PiecewiseLinear(b, v);
}

// sup |x| over [0, h] straight from the breakpoints of x plus a dense sample.
double direct_sup(const PiecewiseLinear& x, double h) {
    double best = std::abs(x(h));
    for (std::size_t i = 0; i < x.breaks().size(); ++i)
        if (x.breaks()[i] <= h) best = std::max(best, std::abs(x.values()[i]));
    for (int j = 0; j <= 1000; ++j) best = std::max(best, std::abs(x(h * j / 1000.0)));
    return best;
}

TrigPolynomial random_trig(Rng& rng, int degree) {
    std::normal_distribution<double> n;
    std::map<std::int64_t, cdouble> c;
    for (int k = -degree; k <= degree; ++k) c[k] = cdouble(n(rng), n(rng));
    return TrigPolynomial(c);
}

void fibers_suite(const SuiteConfig& cfg, Rng& rng, Cases& out) {
    const int T = cfg.trials;
    const double tol = cfg.tol;
    std::vector<Unit> units;
    for (int n = 0; n <= 10; ++n) units.push_back(Unit::at(n));
    units.push_back(Unit::inf());

    add_case(out, "quotient_norm_direct_sup", 0.01 * tol, Kind::identity, [&](Measure& m) {
        for (int t = 0; t < 10 * T; ++t) {
            const auto x = random_pl(rng, 10);
            for (const Unit X : units) {
                const double oracle = X.infinite ? std::abs(x.values().front()) : direct_sup(x, std::ldexp(1.0, -int(X.n)));
                m.error(std::abs(quotient_norm(X, x) - oracle) / std::max(1.0, oracle));
            }
        }
    });
    add_case(out, "kernel_identity", 0.0, Kind::identity, [&](Measure& m) {
        std::uniform_int_distribution<int> level(0, 10);
        std::normal_distribution<double> nd;
        for (int t = 0; t < 10 * T; ++t) {
            const int n0 = level(rng);
            const double c = std::ldexp(1.0, -n0);
            std::vector<double> b{0.0, c};
            std::vector<cdouble> v{0.0, 0.0};
            if (c < 1.0) {
                b.push_back(1.0);
                v.emplace_back(1.0 + std::abs(nd(rng)), nd(rng));
            }
            const PiecewiseLinear x(b, v);
            for (int n = 0; n <= 10; ++n) {
                const bool truth = n >= n0;
                m.check(in_kernel(n, x) == truth, "kernel of alpha_n at n=" + std::to_string(n));
                m.check(ideal_contains(Unit::at(n), x) == truth, "ideal I_n at n=" + std::to_string(n));
            }
            const auto y = random_pl(rng, 8);
            for (int n = 0; n <= 10; ++n)
                m.check(in_kernel(n, y) == ideal_contains(Unit::at(n), y), "generic element, n=" + std::to_string(n));
        }
    });
    auto each_arrow = [&](const std::function<void(Unit, std::int64_t, const QuotientElement&)>& fn) {
        for (int t = 0; t < T; ++t) {
            const auto y = random_pl(rng, 8);
            for (const Unit X : {Unit::at(0), Unit::at(2), Unit::at(5), Unit::at(8), Unit::inf()})
                for (std::int64_t g = -5; g <= 5; ++g)
                    if (is_groupoid_element(X, g)) fn(X, g, QuotientElement(X.shifted(g), y));
        }
    };
    add_case(out, "fiber_action_decomposition_independence", 10 * tol, Kind::identity, [&](Measure& m) {
        each_arrow([&](Unit X, std::int64_t g, const QuotientElement& q) {
            const auto base = fiber_action(X, g, q);
            for (std::int64_t c = 1; c <= 5; ++c)
                m.error(fiber_distance(fiber_action(X, g, q, std::max<std::int64_t>(g, 0) + c, std::max<std::int64_t>(-g, 0) + c),
                                       base));
        });
    });
    add_case(out, "fiber_action_isometry", 0.01 * tol, Kind::identity, [&](Measure& m) {
        each_arrow([&](Unit X, std::int64_t g, const QuotientElement& q) {
            m.error(std::abs(fiber_action(X, g, q).seminorm - q.seminorm) / std::max(1.0, q.seminorm));
        });
    });
    add_case(out, "quotient_norm_upper_semicontinuous", 0.0, Kind::identity, [&](Measure& m) {
        for (int t = 0; t < T; ++t) {
            const auto x = random_pl(rng, 8);
            double prev = quotient_norm(Unit::at(0), x);
            for (int n = 1; n <= 40; ++n) {
                const double cur = quotient_norm(Unit::at(n), x);
                m.check(cur <= prev, "norm increased at n=" + std::to_string(n));
                prev = cur;
            }
            m.check(prev >= quotient_norm(Unit::inf(), x), "norm at inf exceeds the finite levels");
        }
    });
    add_case(out, "dilation_level_independence", 0.0, Kind::identity, [&](Measure& m) {
        for (int t = 0; t < T; ++t) {
            const auto x = random_trig(rng, 3);
            for (std::int64_t n = 0; n <= 3; ++n) {
                const auto e = dilation_embed(n, x);
                const auto base = dilation_norm(e);
                for (std::int64_t j = 1; j <= 3; ++j) {
                    const auto up = dilation_embed(n + j, x.alpha(j));
                    m.check(dilation_equal(e, up, tol), "(n, x) != (n + j, alpha_j x)");
                    const auto nu = dilation_norm(up);
                    m.check(nu.sampled <= base.upper && base.sampled <= nu.upper, "norm depends on the level");
                }
            }
        }
    });
    add_case(out, "section_certificates", 0.0, Kind::identity, [&](Measure& m) {
        std::normal_distribution<double> nd;
        for (int t = 0; t < T; ++t) {
            std::map<std::int64_t, cdouble> f;
            for (int g = -4; g <= 4; ++g)
                if (rng() % 2) f[g] = cdouble(nd(rng), nd(rng));
            const auto x = random_trig(rng, 2);
            for (std::int64_t n = 0; n <= 5; ++n) {
                const auto cert = fiber_section_F(x, f, Unit::at(n));
                m.check(cert.reproduces(tol), "certificate does not rebuild the element");
                m.check(cert.element.level <= std::max<std::int64_t>(n, 0), "element above its fiber level");
                for (std::int64_t k = n; k <= 6; ++k) m.check(cert.valid_over(Unit::at(k)), "monotonicity");
                m.check(cert.valid_over(Unit::inf()), "monotonicity at inf");
            }
        }
    });
    add_case(out, "mutation_swapped_decomposition", 10 * tol, Kind::mutation, [&](Measure& m) {
        each_arrow([&](Unit X, std::int64_t g, const QuotientElement& q) {
            const std::int64_t a = std::max<std::int64_t>(g, 0), b = std::max<std::int64_t>(-g, 0);
            const QuotientElement wrong(X, q.representative.section(a).alpha(b));
            m.error(fiber_distance(wrong, fiber_action(X, g, q)));
        });
    });
}

// ----------------------------------------------------------------- homotopy

template <typename Point>
void homotopy_cases(Cases& out, const std::string& model, const HomotopySpec<Point>& spec,
                    const HomotopySpec<Point>& broken, const std::vector<Point>& samples, double tol) {
    const auto grid = uniform_grid(65);
    HomotopyReport report;
    std::string failure;
    try {
        report = verify_condition_H(spec, grid, samples, tol);
    } catch (const Error& e) {
        failure = e.what();
    }
    for (const char* clause : {"boundary_invariance", "orbit_and_order", "endpoints", "continuity"}) {
        CaseResult r;
        r.name = model + "." + clause;
        r.tolerance = std::string(clause) == "continuity" ? spec.jump_threshold : (std::string(clause) == "endpoints" ? tol : 0.0);
        if (!failure.empty()) {
            r.status = "fail";
            r.details = "error: " + failure;
        } else {
            const auto& c = report.clauses.at(clause);
            r.status = c.pass ? "pass" : "fail";
            r.max_error = c.max_error;
            std::ostringstream os;
            os << c.checks << " checks, " << c.violations << " violations over " << report.samples << " samples and "
               << report.grid << " times";
            for (const auto& f : report.failures)
                if (f.rfind(clause, 0) == 0) {
                    os << "; first: " << f;
                    break;
                }
            r.details = os.str();
        }
        out.push_back(std::move(r));
    }
    add_case(out, model + ".mutation_" + broken.model.substr(broken.model.find('_') + 1), 0.0, Kind::mutation,
             [&](Measure& m) {
                 const auto rep = verify_condition_H(broken, grid, samples, tol);
                 for (const auto& [name, c] : rep.clauses) m.check(c.pass, name);
             });
}

void homotopy_suite(const SuiteConfig& cfg, Rng& rng, Cases& out) {
    const std::size_t count = static_cast<std::size_t>(std::max(50, cfg.trials));
    if (cfg.model == "all" || cfg.model == "halfline") {
        const auto samples = halfline_samples(count, rng);
        homotopy_cases(out, "halfline", halfline_spec(cfg.tol), halfline_spec(cfg.tol, true), samples, cfg.tol);
    }
    if (cfg.model == "all" || cfg.model == "unitary") {
        const auto samples = unitary_samples<double>(cfg.dim.value_or(3), count, rng);
        homotopy_cases(out, "unitary", unitary_spec<double>(cfg.tol), unitary_spec<double>(cfg.tol, true), samples, cfg.tol);
    }
}

using SuiteFn = void (*)(const SuiteConfig&, Rng&, Cases&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"fell", fell_suite},         {"fibers", fibers_suite}, {"groupoid", groupoid_suite}, {"homotopy", homotopy_suite},
        {"jordan", jordan_suite},     {"moebius", moebius_suite}, {"toeplitz", toeplitz_suite},
    };
    return r;
}

Rng suite_rng(std::uint64_t seed, const std::string& name) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (char ch : name) words.push_back(static_cast<unsigned char>(ch));
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

}  // namespace

void SuiteConfig::validate() const {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) throw InputValidationError("unknown suite \"" + suite + "\"");
    if (trials < 1) throw InputValidationError("--trials must be at least 1");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw InputValidationError("--tol must be positive");
    if (dim && (*dim < 1 || *dim > 64)) throw InputValidationError("--dim must lie in 1..64");
    if (N < 1 || N > 512) throw InputValidationError("--N must lie in 1..512");
    if (!(grid_step > 0.0) || grid_step > 8.0 || !std::isfinite(grid_step))
        throw InputValidationError("--grid-step must lie in (0, 8]");
    if (model != "all" && model != "halfline" && model != "unitary")
        throw InputValidationError("--model must be halfline, unitary or all");
}

bool SuiteReport::passed() const {
    return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.status != "fail"; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : registry()) n.push_back(name);
        n.push_back("all");
        return n;
    }();
    return names;
}

SuiteReport run(const SuiteConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    SuiteReport report;
    report.suite = config.suite;
    report.config = config;
    for (const auto& [name, fn] : registry()) {
        if (config.suite != "all" && config.suite != name) continue;
        Rng rng = suite_rng(config.seed, name);
        Cases cases;
        fn(config, rng, cases);
        for (auto& c : cases) {
            if (config.suite == "all") c.name = name + "." + c.name;
            report.cases.push_back(std::move(c));
        }
    }
    std::sort(report.cases.begin(), report.cases.end(), [](const CaseResult& a, const CaseResult& b) { return a.name < b.name; });
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

io::Json to_json(const SuiteReport& report, bool with_timing) {
    using io::Json;
    Json cases = Json::array();
    for (const auto& c : report.cases)
        cases.push_back({{"name", c.name}, {"status", c.status}, {"max_error", io::number(c.max_error)},
                         {"tolerance", io::number(c.tolerance)}, {"details", c.details}});
    const auto& cfg = report.config;
    Json config = {{"suite", cfg.suite},           {"dim", cfg.dim ? Json(*cfg.dim) : Json(nullptr)},
                   {"trials", cfg.trials},         {"seed", cfg.seed},
                   {"tol", io::number(cfg.tol)},   {"N", cfg.N},
                   {"grid_step", io::number(cfg.grid_step)}, {"model", cfg.model}};
    Json out = {{"suite", report.suite}, {"config", config}, {"cases", cases}, {"pass", report.passed()}};
    if (with_timing) out["wall_time"] = report.wall_time;
    return out;
}

}  // namespace whlab
