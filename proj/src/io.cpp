#include "whlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace whlab::io {

namespace {

void write_value(std::string& out, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {  // std::map keeps keys sorted
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(key).dump() + ": ";
                write_value(out, value, indent + 2);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                write_value(out, j[i], indent + 2);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += Json(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")).dump();
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

[[noreturn]] void fail(const std::string& what) { throw SchemaError(what); }

const Json& field(const Json& j, const char* key, const char* who) {
    if (!j.is_object()) fail(std::string(who) + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(std::string(who) + ": missing field \"" + key + "\"");
    return *it;
}

double as_double(const Json& j, const char* who) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
    }
    fail(std::string(who) + ": expected a number");
}

std::int64_t as_int(const Json& j, const char* who) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (x == std::floor(x) && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
    }
    fail(std::string(who) + ": expected an integer");
}

std::int64_t key_to_int(const std::string& key, const char* who) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(key, &used);
    } catch (const std::exception&) {
        fail(std::string(who) + ": key \"" + key + "\" is not an integer");
    }
    if (used != key.size()) fail(std::string(who) + ": key \"" + key + "\" is not an integer");
    return v;
}

cdouble as_complex(const Json& j, const char* who) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(std::string(who) + ": expected a number or [re, im]");
}

Json complex_json(cdouble z) { return Json::array({number(z.real()), number(z.imag())}); }

std::vector<double> window_axis(const Json& w, const char* who) {
    if (!w.is_array() || w.size() != 2) fail(std::string(who) + ": window must be [lo, hi]");
    return {as_double(w[0], who), as_double(w[1], who)};
}

ClosedSetModel set_from_json(const GridFrame& frame, const Json& s) {
    const char* who = "set";
    const Json& kind_j = field(s, "kind", who);
    if (!kind_j.is_string()) fail("set: kind must be a string");
    const auto kind = kind_j.get<std::string>();
    if (kind == "empty") return empty_set(frame);
    if (kind == "all") return whole_set(frame);
    if (kind == "ray") return ray_set(frame, as_double(field(s, "endpoint", who), who));
    if (kind == "interval")
        return interval_set(frame, as_double(field(s, "lo", who), who), as_double(field(s, "hi", who), who));
    if (kind == "quadrant") {
        const Json& c = field(s, "corner", who);
        if (!c.is_array() || c.size() != 2) fail("set: quadrant corner must be [x, y]");
        return quadrant_set(frame, as_double(c[0], who), as_double(c[1], who));
    }
    if (kind == "union") {
        const Json& parts = field(s, "parts", who);
        if (!parts.is_array()) fail("set: union parts must be a list");
        std::vector<ClosedSetModel> models;
        for (const auto& p : parts) models.push_back(set_from_json(frame, p));
        return union_set(frame, std::move(models));
    }
    fail("set: unknown kind \"" + kind + "\"");
}

}  // namespace

std::string dump_stable(const Json& j) {
    std::string out;
    write_value(out, j, 0);
    out += "\n";
    return out;
}

Json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return Json::parse(buf.str());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to " + path + " failed");
}

MatrixXc matrix_from_json(const Json& j) {
    const char* who = "matrix";
    const std::int64_t d = as_int(field(j, "d", who), who);
    if (d < 1) fail("matrix: d must be positive");
    const Json& re = field(j, "re", who);
    const Json* im = j.contains("im") ? &j.at("im") : nullptr;
    auto check_rows = [&](const Json& rows) {
        if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != d) fail("matrix: expected d rows");
        for (const auto& r : rows)
            if (!r.is_array() || static_cast<std::int64_t>(r.size()) != d) fail("matrix: expected d entries per row");
    };
    check_rows(re);
    if (im) check_rows(*im);
    MatrixXc m(d, d);
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t k = 0; k < d; ++k) {
            const double a = as_double(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], who);
            const double b = im ? as_double((*im)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], who) : 0.0;
            if (!std::isfinite(a) || !std::isfinite(b)) fail("matrix: non-finite entry");
            m(i, k) = cdouble(a, b);
        }
    return m;
}

Json to_json(const MatrixXc& m) {
    if (m.rows() != m.cols()) throw InputValidationError("matrix JSON holds square matrices only");
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array(), c = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            r.push_back(number(m(i, k).real()));
            c.push_back(number(m(i, k).imag()));
        }
        re.push_back(r);
        im.push_back(c);
    }
    return {{"d", m.rows()}, {"re", re}, {"im", im}};
}

JordanAlgebra<double> algebra_from_json(const Json& j, double tol) {
    const char* who = "algebra";
    const std::int64_t d = as_int(field(j, "d", who), who);
    const Json& basis = field(j, "basis", who);
    if (d < 1 || !basis.is_array()) fail("algebra: need d >= 1 and a basis list");
    std::vector<MatrixXc> ortho;
    for (const auto& b : basis) {
        const MatrixXc m = matrix_from_json(b);
        if (m.rows() != d) fail("algebra: basis element of the wrong size");
        try {
            detail::gram_schmidt_push<double>(ortho, Hermitian<double>(m, tol).matrix(), tol);
        } catch (const InputValidationError& e) {
            fail(std::string("algebra: ") + e.what());
        }
    }
    const JordanAlgebra<double> a(d, ortho, tol);
    if (!a.contains(MatrixXc::Identity(d, d))) fail("algebra: the span does not contain the identity");
    for (std::size_t p = 0; p < ortho.size(); ++p)
        for (std::size_t q = p; q < ortho.size(); ++q)
            if (!a.contains(jordan_product<double>(ortho[p], ortho[q])))
                fail("algebra: the span is not closed under the Jordan product");
    return a;
}

Json to_json(const JordanAlgebra<double>& a) {
    Json basis = Json::array();
    for (const auto& b : a.basis()) basis.push_back(to_json(b));
    return {{"d", a.dim()}, {"basis", basis}};
}

SymbolFunction symbol_from_json(const Json& j) {
    const char* who = "symbol";
    const std::int64_t k = as_int(field(j, "k", who), who);
    if (k < 1) fail("symbol: k must be positive");
    const Json& values = field(j, "values", who);
    if (!values.is_object()) fail("symbol: values must be an object keyed by group element");
    SymbolFunction f(k);
    for (const auto& [key, m] : values.items()) {
        const MatrixXc v = matrix_from_json(m);
        if (v.rows() != k) fail("symbol: value at " + key + " has the wrong size");
        f.set(key_to_int(key, who), v);
    }
    if (j.contains("support")) {
        const Json& s = j.at("support");
        if (!s.is_array()) fail("symbol: support must be a list");
        std::vector<std::int64_t> listed;
        for (const auto& g : s) listed.push_back(as_int(g, who));
        std::sort(listed.begin(), listed.end());
        if (listed != f.support()) fail("symbol: support list does not match the value keys");
    }
    return f;
}

Json to_json(const SymbolFunction& f) {
    Json values = Json::object();
    for (const auto& [g, v] : f.values()) values[std::to_string(g)] = to_json(v);
    return {{"k", f.fiber_dim()}, {"support", f.support()}, {"values", values}};
}

GroupoidSection section_from_json(const Json& j, Eigen::Index k, const Window& window, const EndomorphismAction& action) {
    const char* who = "section";
    if (!j.is_array()) fail("section: expected a list of arrows");
    GroupoidSection s(k, window, action);
    for (const auto& e : j) {
        const Json& xj = field(e, "X", who);
        Unit X;
        if (xj.is_string() && xj.get<std::string>() == "inf")
            X = Unit::inf();
        else
            X = Unit::at(as_int(xj, who));
        const std::int64_t g = as_int(field(e, "g", who), who);
        try {
            s.set({X, g}, matrix_from_json(field(e, "value", who)));
        } catch (const InputValidationError& err) {
            fail(std::string("section: ") + err.what());
        }
    }
    return s;
}

Json to_json(const GroupoidSection& s) {
    Json out = Json::array();
    for (const auto& [e, v] : s.values()) {
        Json x = e.X.infinite ? Json("inf") : Json(e.X.n);
        out.push_back({{"X", x}, {"g", e.g}, {"value", to_json(v)}});
    }
    return out;
}

PiecewiseLinear pl_from_json(const Json& j) {
    const char* who = "piecewise-linear";
    const Json& b = field(j, "breaks", who);
    const Json& v = field(j, "vals", who);
    if (!b.is_array() || !v.is_array()) fail("piecewise-linear: breaks and vals must be lists");
    std::vector<double> breaks;
    std::vector<cdouble> vals;
    for (const auto& x : b) breaks.push_back(as_double(x, who));
    for (const auto& x : v) vals.push_back(as_complex(x, who));
    try {
        return PiecewiseLinear(std::move(breaks), std::move(vals));
    } catch (const InputValidationError& e) {
        fail(e.what());
    }
}

Json to_json(const PiecewiseLinear& f) {
    Json vals = Json::array();
    for (const auto& z : f.values()) vals.push_back(z.imag() == 0.0 ? number(z.real()) : complex_json(z));
    Json breaks = Json::array();
    for (double t : f.breaks()) breaks.push_back(number(t));
    return {{"breaks", breaks}, {"vals", vals}};
}

TrigPolynomial trig_from_json(const Json& j) {
    const char* who = "trig polynomial";
    const Json& c = field(j, "coeffs", who);
    if (!c.is_object()) fail("trig polynomial: coeffs must be an object keyed by frequency");
    std::map<std::int64_t, cdouble> coeffs;
    for (const auto& [key, z] : c.items()) coeffs[key_to_int(key, who)] = as_complex(z, who);
    try {
        return TrigPolynomial(std::move(coeffs));
    } catch (const InputValidationError& e) {
        fail(e.what());
    }
}

Json to_json(const TrigPolynomial& p) {
    Json c = Json::object();
    for (const auto& [k, z] : p.coeffs()) c[std::to_string(k)] = complex_json(z);
    return {{"coeffs", c}};
}

std::vector<ClosedSetModel> set_sequence_from_json(const Json& j) {
    const char* who = "set sequence";
    const Json& amb = field(j, "ambient", who);
    if (!amb.is_string()) fail("set sequence: ambient must be a string");
    GridFrame frame;
    try {
        frame.ambient = parse_ambient(amb.get<std::string>());
    } catch (const InputValidationError& e) {
        fail(e.what());
    }
    const Json& w = field(j, "window", who);
    if (frame.ambient == Ambient::R2 && w.is_array() && w.size() == 2 && w[0].is_array()) {
        const auto x = window_axis(w[0], who), y = window_axis(w[1], who);
        frame.lo = {x[0], y[0]};
        frame.hi = {x[1], y[1]};
    } else {
        const auto axis = window_axis(w, who);
        const int dim = ambient_dim(frame.ambient);
        frame.lo.assign(static_cast<std::size_t>(dim), axis[0]);
        frame.hi.assign(static_cast<std::size_t>(dim), axis[1]);
    }
    frame.step = j.contains("step") ? as_double(j.at("step"), who) : 1.0;
    try {
        frame.validate();
    } catch (const InputValidationError& e) {
        fail(e.what());
    }
    const Json& sets = field(j, "sets", who);
    if (!sets.is_array() || sets.empty()) fail("set sequence: sets must be a non-empty list");
    std::vector<ClosedSetModel> out;
    for (const auto& s : sets) out.push_back(set_from_json(frame, s));
    return out;
}

Json to_json(const FellLimit& r) {
    Json out = {{"converges", r.converges}, {"tail_start", r.tail_start}, {"disagreements", r.disagreements}};
    std::size_t members = 0;
    for (char c : r.limsup) members += c != 0;
    out["limsup_points"] = members;
    members = 0;
    for (char c : r.liminf) members += c != 0;
    out["liminf_points"] = members;
    if (!r.grid.empty() && r.grid.front().size() == 1) {
        Json runs = Json::array();
        for (const auto& [a, b] : grid_runs(r)) runs.push_back(Json::array({number(a), number(b)}));
        out["limit_runs"] = r.converges ? runs : Json(nullptr);
    } else {
        Json pts = Json::array();
        if (r.converges)
            for (std::size_t i = 0; i < r.grid.size(); ++i)
                if (r.liminf[i]) pts.push_back(Json::array({number(r.grid[i][0]), number(r.grid[i][1])}));
        out["limit_points"] = r.converges ? pts : Json(nullptr);
    }
    return out;
}

Json to_json(const HomotopyReport& r) {
    Json clauses = Json::object();
    for (const auto& [name, c] : r.clauses)
        clauses[name] = {{"pass", c.pass}, {"checks", c.checks}, {"violations", c.violations}, {"max_error", number(c.max_error)}};
    return {{"suite", "condition_H"}, {"model", r.model}, {"clauses", clauses}, {"failures", r.failures},
            {"samples", r.samples}, {"grid", r.grid}, {"pass", r.passed()}};
}

}  // namespace whlab::io
