#include <gtest/gtest.h>

#include <cstdlib>
#include <limits>

#include "hpath/json_io.hpp"
#include "hpath/rng.hpp"

using namespace hpath;
using io::Json;

TEST(FormatDouble, RoundTripsExactly) {
  ComplexGaussianRng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.next().real() * std::pow(10.0, (k % 40) - 20);
    EXPECT_EQ(std::strtod(io::format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(io::format_double(1.0), "1.0");
  EXPECT_EQ(io::format_double(-3.0), "-3.0");
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Dump, SortedKeysAndFlatScalarArrays) {
  Json j = {{"b", 1.5}, {"a", Json::array({1, 2})}, {"c", {{"z", true}, {"y", "s"}}}};
  EXPECT_EQ(io::dump(j), "{\n  \"a\": [1, 2],\n  \"b\": 1.5,\n  \"c\": {\n    \"y\": \"s\",\n    \"z\": true\n  }\n}");
  EXPECT_THROW(io::dump(Json(std::numeric_limits<double>::quiet_NaN())), ValidationError);
  EXPECT_THROW(io::dump(Json(std::numeric_limits<double>::infinity())), ValidationError);
}

TEST(ComplexJson, RoundTrip) {
  CMatrix m(2, 3);
  m << Complex(1, 2), Complex(0.1, -0.3), 5.0, Complex(0, 1), -2.0, Complex(1e-300, 7);
  const CMatrix back = io::matrix_from_json(Json::parse(io::dump(io::to_json(m))), "m");
  EXPECT_EQ(back, m);
  const CVector v = m.row(0).transpose();
  EXPECT_EQ(io::vector_from_json(io::to_json(v), "v"), v);
  EXPECT_EQ(io::complex_from_json(Json(2.5), "x"), Complex(2.5, 0.0));
}

TEST(ComplexJson, ErrorsCarryPaths) {
  try {
    io::vector_from_json(Json::parse("[[1, 0], [1, 2, 3]]"), "cfg.v");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.v[1]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::matrix_from_json(Json::parse("[[[1, 0]], [[1, 0], [2, 0]]]"), "m"), ValidationError);
  EXPECT_THROW(io::matrix_from_json(Json::parse("[]"), "m"), ValidationError);
  EXPECT_THROW(io::complex_from_json(Json("1"), "x"), ValidationError);
}
