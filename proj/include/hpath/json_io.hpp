#pragma once

#include <string>

#include <json.hpp>

#include "hpath/hilbert.hpp"

namespace hpath::io {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs; vectors are arrays of pairs; matrices
// are row-major arrays of rows.
Json to_json(Complex c);
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);

Complex complex_from_json(const Json& j, const std::string& where);
CVector vector_from_json(const Json& j, const std::string& where);
CMatrix matrix_from_json(const Json& j, const std::string& where);

/// %.17g, the shortest fixed width that round-trips every double.
std::string format_double(double x);

/// Serializes with every floating-point number printed by format_double.
/// Object keys come out sorted. Throws ValidationError on non-finite numbers.
std::string dump(const Json& j, int indent = 2);

}  // namespace hpath::io
