#include "hpath/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hpath::io {

namespace {

void write(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(it.key()).dump() << ": ";
        write(out, it.value(), indent, depth + 1);
      }
      out << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line; [re, im] pairs read better that way.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) out << ", ";
          write(out, j[i], indent, depth + 1);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << ",\n";
        out << pad;
        write(out, j[i], indent, depth + 1);
      }
      out << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      if (!std::isfinite(j.get<double>())) throw ValidationError("non-finite number in JSON output");
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
      return;
  }
}

}  // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(where + ": expected a complex number [re, im]");
  }
  const Complex c(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw ValidationError(where + ": complex number must be finite");
  }
  return c;
}

CVector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a non-empty array");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Index>(k)) = complex_from_json(j[k], where + "[" + std::to_string(k) + "]");
  }
  return v;
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected an array of rows");
  const auto rows = static_cast<Index>(j.size());
  CMatrix m;
  for (Index r = 0; r < rows; ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    const CVector row = vector_from_json(j[static_cast<std::size_t>(r)], row_where);
    if (r == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) throw ValidationError(row_where + ": ragged matrix row");
    m.row(r) = row.transpose();
  }
  return m;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep integral values recognizable as floating point.
  if (std::isfinite(x) && s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j, int indent) {
  std::ostringstream out;
  write(out, j, indent, 0);
  return out.str();
}

}  // namespace hpath::io
