#pragma once

// JSON encodings of the toolkit's objects and a byte-stable writer.
// Malformed input raises SchemaError; file problems raise IoError.

#include <string>

#include <json.hpp>

#include "whlab/fell.hpp"
#include "whlab/fibers.hpp"
#include "whlab/groupoid.hpp"
#include "whlab/homotopy.hpp"
#include "whlab/jordan.hpp"

namespace whlab::io {

using Json = nlohmann::json;

class SchemaError : public InputValidationError {
public:
    using InputValidationError::InputValidationError;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Sorted keys, two-space indent, doubles as %.17g, trailing newline.
std::string dump_stable(const Json& j);

// A double as a JSON value; non-finite values become "inf", "-inf" or "nan".
Json number(double x);

Json read_file(const std::string& path);  // IoError or nlohmann::json::parse_error
void write_file(const std::string& path, const std::string& text);

// {"d": n, "re": [[...]], "im": [[...]]}
MatrixXc matrix_from_json(const Json& j);
Json to_json(const MatrixXc& m);

// {"d": n, "basis": [matrix, ...]}; the basis is orthonormalised on read.
JordanAlgebra<double> algebra_from_json(const Json& j, double tol = kDefaultTol);
Json to_json(const JordanAlgebra<double>& a);

// {"k": k, "support": [...], "values": {"g": matrix, ...}}
SymbolFunction symbol_from_json(const Json& j);
Json to_json(const SymbolFunction& f);

// [{"X": n or "inf", "g": g, "value": matrix}, ...]
GroupoidSection section_from_json(const Json& j, Eigen::Index k, const Window& window, const EndomorphismAction& action);
Json to_json(const GroupoidSection& s);

// {"breaks": [...], "vals": [...]} with each value a number or [re, im].
PiecewiseLinear pl_from_json(const Json& j);
Json to_json(const PiecewiseLinear& f);

// {"coeffs": {"k": [re, im], ...}}
TrigPolynomial trig_from_json(const Json& j);
Json to_json(const TrigPolynomial& p);

// {"ambient": "R", "window": [lo, hi], "step": h, "sets": [...]} with set kinds
// ray {endpoint}, interval {lo, hi}, empty, all, quadrant {corner: [x, y]} and
// union {parts: [...]}. Endpoints may be "inf" or "-inf". For R2 the window is
// either [lo, hi] for both axes or [[xlo, xhi], [ylo, yhi]].
std::vector<ClosedSetModel> set_sequence_from_json(const Json& j);
Json to_json(const FellLimit& r);

Json to_json(const HomotopyReport& r);

}  // namespace whlab::io
