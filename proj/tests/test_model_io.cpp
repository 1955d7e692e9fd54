#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ciphase/model_io.hpp"

using namespace ciphase;

namespace {

const char* kBerryDoc = R"({
  "kind": "berry",
  "b": 0.25,
  "alpha": 1.5,
  "beta": 2.0,
  "active_axis": "z_carries_b"
})";

const char* kCartesianDoc = R"({
  "kind": "cartesian",
  "coeffs_A": [[2, 0, 1.0], [0, 0, -1.0]],
  "coeffs_B": [[0, 1, 1.0]]
})";

const char* kQuarticDoc = R"({ "kind": "complex", "K": 1.0, "mu": 0.3, "lambda": 0.003 })";

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("berry documents parse with both axis conventions") {
  AnyModel m = model_from_json(kBerryDoc);
  const auto& b = std::get<BerryModel>(m);
  CHECK(b.b == 0.25);
  CHECK(b.alpha == 1.5);
  CHECK(b.beta == 2.0);
  CHECK(b.axis == ActiveAxis::z_carries_b);

  AnyModel my = model_from_json(
      R"({"kind":"berry","b":1.0,"alpha":1.0,"beta":1.0,"active_axis":"y_carries_b"})");
  CHECK(std::get<BerryModel>(my).axis == ActiveAxis::y_carries_b);
}

TEST_CASE("cartesian documents produce the stated polynomials") {
  AnyModel m = model_from_json(kCartesianDoc);
  const auto& c = std::get<CartesianCoupling>(m);
  // A = X^2 - 1, B = Y
  CHECK(c.A(2.0, 7.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(c.A(1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.B(5.0, -0.5) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(c.Ax(3.0, 0.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(c.By(0.0, 9.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("complex documents accept exactly one coefficient form") {
  const auto q = std::get<ComplexCoupling>(model_from_json(kQuarticDoc));
  CHECK(q.quartic());
  CHECK(q.K() == 1.0);
  CHECK(q.mu() == 0.3);
  CHECK(q.lambda() == 0.003);

  const auto s = std::get<ComplexCoupling>(model_from_json(
      R"({"kind":"complex","K":2.0,"q_plus":[[-0.3]],"q_minus":[[0.003]]})"));
  CHECK(!s.quartic());
  CHECK(s.K() == 2.0);
  REQUIRE(s.plus_series().size() == 1);
  CHECK(s.plus_series()[0][0] == -0.3);
  CHECK(s.minus_series()[0][0] == 0.003);
  // the two coefficient forms describe the same bracket when matched
  const auto qq = std::get<ComplexCoupling>(model_from_json(kQuarticDoc));
  const auto ss = std::get<ComplexCoupling>(model_from_json(
      R"({"kind":"complex","K":1.0,"q_plus":[[-0.3]],"q_minus":[[0.003]]})"));
  CHECK(std::abs(qq.bracket(1.7, 0.9) - ss.bracket(1.7, 0.9)) < 1e-15);

  CHECK_THROWS_AS(model_from_json(R"({"kind":"complex","K":1.0,"mu":0.3,"lambda":0.003,
                                      "q_plus":[[1.0]],"q_minus":[[1.0]]})"),
                  ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"complex","K":1.0})"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"complex","K":1.0,"mu":0.3})"), ParseError);
}

TEST_CASE("schema violations are rejected by name") {
  // unknown key, and the message says which one
  try {
    model_from_json(R"({"kind":"berry","b":1.0,"alpha":1.0,"beta":1.0,
                        "active_axis":"z_carries_b","extra":3})");
    FAIL("unknown key accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("extra") != std::string::npos);
  }
  try {
    model_from_json(R"({"kind":"berry","b":1.0,"beta":1.0,"active_axis":"z_carries_b"})");
    FAIL("missing key accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }

  CHECK_THROWS_AS(model_from_json("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(model_from_json("{\"kind\":"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"b":1.0})"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"spherical"})"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"kind":7})"), ParseError);
  // wrong value types
  CHECK_THROWS_AS(model_from_json(
                      R"({"kind":"berry","b":"one","alpha":1.0,"beta":1.0,
                          "active_axis":"z_carries_b"})"),
                  ParseError);
  CHECK_THROWS_AS(model_from_json(
                      R"({"kind":"berry","b":1.0,"alpha":1.0,"beta":1.0,"active_axis":3})"),
                  ParseError);
  CHECK_THROWS_AS(model_from_json(
                      R"({"kind":"berry","b":1.0,"alpha":1.0,"beta":1.0,
                          "active_axis":"x_carries_b"})"),
                  ParseError);
  // malformed polynomial terms
  CHECK_THROWS_AS(model_from_json(R"({"kind":"cartesian","coeffs_A":[[2,0]],"coeffs_B":[]})"),
                  ParseError);
  CHECK_THROWS_AS(
      model_from_json(R"({"kind":"cartesian","coeffs_A":[[2.5,0,1.0]],"coeffs_B":[]})"),
      ParseError);
  CHECK_THROWS_AS(
      model_from_json(R"({"kind":"cartesian","coeffs_A":[[2,0,"x"]],"coeffs_B":[]})"),
      ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"complex","K":1.0,"q_plus":[[]],"q_minus":[[1]]})"),
                  ParseError);
}

TEST_CASE("semantically invalid models surface the model errors") {
  // schema fine, physics wrong: these come from the model types themselves
  CHECK_THROWS_AS(model_from_json(
                      R"({"kind":"berry","b":-1.0,"alpha":1.0,"beta":1.0,
                          "active_axis":"z_carries_b"})"),
                  InputError);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"complex","K":-1.0,"mu":0.3,"lambda":0.003})"),
                  InputError);
  CHECK_THROWS_AS(
      model_from_json(R"({"kind":"cartesian","coeffs_A":[[9,0,1.0]],"coeffs_B":[]})"),
      InputError);
  CHECK_THROWS_AS(
      model_from_json(R"({"kind":"cartesian","coeffs_A":[[-1,0,1.0]],"coeffs_B":[]})"),
      InputError);
}

TEST_CASE("serialization round trips byte-identically") {
  for (const char* doc : {kBerryDoc, kCartesianDoc, kQuarticDoc,
                          R"({"kind":"complex","K":2.0,"q_plus":[[-0.3,0.01]],
                              "q_minus":[[0.003],[1e-5,2e-6]]})"}) {
    const std::string once = model_to_json(model_from_json(doc));
    const std::string twice = model_to_json(model_from_json(once));
    CHECK(once == twice);
  }
  // key order and whitespace in the source never leak into the output
  const std::string a = model_to_json(model_from_json(
      R"({"alpha":1.5,"active_axis":"z_carries_b","b":0.25,"kind":"berry","beta":2.0})"));
  CHECK(a == model_to_json(model_from_json(kBerryDoc)));
  // repeated cartesian terms accumulate into one canonical term
  const std::string c = model_to_json(model_from_json(
      R"({"kind":"cartesian","coeffs_A":[[2,0,0.25],[2,0,0.75],[0,0,-1]],"coeffs_B":[[0,1,1]]})"));
  CHECK(c == model_to_json(model_from_json(kCartesianDoc)));
}

TEST_CASE("model files load and missing paths fail cleanly") {
  namespace fs = std::filesystem;
  const fs::path p = fs::temp_directory_path() / "ciphase_model_io_test.json";
  {
    std::ofstream out(p);
    out << kQuarticDoc;
  }
  const auto q = std::get<ComplexCoupling>(model_from_file(p.string()));
  CHECK(q.mu() == 0.3);
  fs::remove(p);
  CHECK_THROWS_AS(model_from_file((fs::temp_directory_path() / "no_such_model.json").string()),
                  ParseError);
}

TEST_CASE("floats format with 12 significant digits, deterministically") {
  CHECK(format_real(0.3) == "3.00000000000e-01");
  CHECK(format_real(pi) == "3.14159265359e+00");
  CHECK(format_real(-2.0 * pi) == "-6.28318530718e+00");
  CHECK(format_real(0.0) == "0.00000000000e+00");
  CHECK(format_real(5.773502691896257) == "5.77350269190e+00");
  CHECK(format_real(1.0) == format_real(1.0));
}

TEST_CASE("pi multiples get symbolic labels") {
  CHECK(pi_multiple_label(pi) == "1·π");
  CHECK(pi_multiple_label(-pi) == "-1·π");
  CHECK(pi_multiple_label(2.0 * pi) == "2·π");
  CHECK(pi_multiple_label(-4.0 * pi) == "-4·π");
  CHECK(pi_multiple_label(0.0) == "0·π");
  CHECK(pi_multiple_label(0.5 * pi) == "0.5·π");
  CHECK(pi_multiple_label(-0.5 * pi) == "-0.5·π");
  CHECK(pi_multiple_label(pi + 5e-10) == "1·π");
  CHECK(pi_multiple_label(pi + 1e-8) == "");
  CHECK(pi_multiple_label(1.0) == "");
  CHECK(pi_multiple_label(pi / std::sqrt(2.0)) == "");
}

}  // TEST_SUITE
