#pragma once

// JSON conversion for integer matrices, forms and group ring matrices.

#include <json.hpp>
#include <string>

#include "z2lat/forms.hpp"
#include "z2lat/hermitian.hpp"

namespace z2lat {

using ordered_json = nlohmann::ordered_json;

inline ordered_json integer_to_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

inline Integer integer_from_json(const ordered_json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer x;
    require(x.set_str(j.get<std::string>(), 10) == 0, ErrorKind::InvalidInput, "malformed integer string");
    return x;
  }
  throw Error(ErrorKind::InvalidInput, "expected an integer");
}

inline ordered_json vector_to_json(const IntVector& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) out.push_back(integer_to_json(x));
  return out;
}

inline ordered_json matrix_to_json(const IntMatrix& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i)));
  return out;
}

/// Rows of integers; an empty array is the 0x0 matrix.
inline IntMatrix matrix_from_json(const ordered_json& j) {
  require(j.is_array(), ErrorKind::InvalidInput, "matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, ErrorKind::InvalidInput, "matrix rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(j[i][k]);
  }
  return m;
}

inline ordered_json form_to_json(const SymBilinearForm& f) { return {{"gram", matrix_to_json(f.gram())}}; }

/// Accepts {"gram": ...} or a document carrying one under "induced" or
/// "input" (exterior and certificate output), or a bare matrix.
inline SymBilinearForm form_from_json(const ordered_json& j) {
  if (j.is_array()) return SymBilinearForm(matrix_from_json(j));
  require(j.is_object(), ErrorKind::InvalidInput, "form must be an object with a gram field");
  if (j.contains("gram")) return SymBilinearForm(matrix_from_json(j["gram"]));
  for (const char* key : {"induced", "input"})
    if (j.contains(key)) return form_from_json(j[key]);
  throw Error(ErrorKind::InvalidInput, "no gram field found");
}

inline ordered_json lambda_matrix_to_json(const LambdaMatrix& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(ordered_json::array({integer_to_json(m(i, k).p), integer_to_json(m(i, k).q)}));
    out.push_back(row);
  }
  return out;
}

/// Entries are [p, q] for p + qT.
inline LambdaMatrix lambda_matrix_from_json(const ordered_json& j) {
  require(j.is_array(), ErrorKind::InvalidInput, "matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  LambdaMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, ErrorKind::InvalidInput, "matrix rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = j[i][k];
      require(e.is_array() && e.size() == 2, ErrorKind::InvalidInput, "group ring entry must be [p, q]");
      m(i, k) = GroupRingElement(integer_from_json(e[0]), integer_from_json(e[1]));
    }
  }
  return m;
}

/// [a, b, c] for Z+^a + Z-^b + L^c.
inline ordered_json module_to_json(const LambdaModule& m) { return ordered_json::array({m.a, m.b, m.c}); }

inline LambdaModule module_from_json(const ordered_json& j) {
  require(j.is_array() && j.size() == 3, ErrorKind::InvalidInput, "module must be [a, b, c]");
  for (const auto& x : j)
    require(x.is_number_unsigned(), ErrorKind::InvalidInput, "module ranks must be non-negative integers");
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>(), j[2].get<std::size_t>()};
}

inline ordered_json hermitian_to_json(const HermitianForm& f) {
  return {{"module", module_to_json(f.module())}, {"gram", lambda_matrix_to_json(f.gram())}};
}

inline HermitianForm hermitian_from_json(const ordered_json& j) {
  require(j.is_object() && j.contains("module") && j.contains("gram"), ErrorKind::InvalidInput,
          "hermitian form needs module and gram");
  return HermitianForm(module_from_json(j["module"]), lambda_matrix_from_json(j["gram"]));
}

}  // namespace z2lat
