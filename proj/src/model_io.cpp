#include "ciphase/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace ciphase {

namespace {

using nlohmann::json;

// Strict schema walls: every key checked against an allow list, every
// required key demanded. Errors name the offending key so a user can fix
// the document without reading source.
void check_keys(const json& j, const char* kind, const std::set<std::string>& allowed,
                const std::set<std::string>& required) {
  for (const auto& item : j.items())
    if (allowed.count(item.key()) == 0)
      throw ParseError("unknown key '" + item.key() + "' in " + kind + " model");
  for (const auto& key : required)
    if (!j.contains(key))
      throw ParseError("missing key '" + key + "' in " + kind + " model");
}

Real get_real(const json& j, const char* key, const char* kind) {
  const json& v = j.at(key);
  if (!v.is_number())
    throw ParseError(std::string("'") + key + "' in " + kind + " model must be a number");
  return v.get<Real>();
}

PolyXY parse_terms(const json& arr, const char* key) {
  if (!arr.is_array())
    throw ParseError(std::string("'") + key + "' must be an array of [deg_x, deg_y, coeff] terms");
  std::vector<std::tuple<int, int, Real>> terms;
  for (const json& t : arr) {
    if (!t.is_array() || t.size() != 3)
      throw ParseError(std::string("each term in '") + key + "' must be [deg_x, deg_y, coeff]");
    if (!t[0].is_number_integer() || !t[1].is_number_integer())
      throw ParseError(std::string("degrees in '") + key + "' must be integers");
    if (!t[2].is_number())
      throw ParseError(std::string("coefficient in '") + key + "' must be a number");
    terms.emplace_back(t[0].get<int>(), t[1].get<int>(), t[2].get<Real>());
  }
  return PolyXY::from_terms(terms);
}

std::vector<Eigen::VectorXd> parse_series(const json& arr, const char* key) {
  if (!arr.is_array())
    throw ParseError(std::string("'") + key + "' must be an array of coefficient arrays");
  std::vector<Eigen::VectorXd> out;
  for (const json& p : arr) {
    if (!p.is_array() || p.empty())
      throw ParseError(std::string("each polynomial in '") + key +
                       "' must be a non-empty array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (!p[static_cast<std::size_t>(i)].is_number())
        throw ParseError(std::string("each polynomial in '") + key +
                         "' must be a non-empty array of numbers");
      v[i] = p[static_cast<std::size_t>(i)].get<Real>();
    }
    out.push_back(std::move(v));
  }
  return out;
}

AnyModel parse_cartesian(const json& j) {
  check_keys(j, "cartesian", {"kind", "coeffs_A", "coeffs_B"}, {"coeffs_A", "coeffs_B"});
  return CartesianCoupling(parse_terms(j.at("coeffs_A"), "coeffs_A"),
                           parse_terms(j.at("coeffs_B"), "coeffs_B"));
}

AnyModel parse_complex(const json& j) {
  const bool quartic_form = j.contains("mu") || j.contains("lambda");
  const bool series_form = j.contains("q_plus") || j.contains("q_minus");
  if (quartic_form && series_form)
    throw ParseError("complex model takes either {mu, lambda} or {q_plus, q_minus}, not both");
  if (!quartic_form && !series_form)
    throw ParseError("complex model needs either {mu, lambda} or {q_plus, q_minus}");
  if (quartic_form) {
    check_keys(j, "complex", {"kind", "K", "mu", "lambda"}, {"K", "mu", "lambda"});
    return ComplexCoupling(get_real(j, "K", "complex"), get_real(j, "mu", "complex"),
                           get_real(j, "lambda", "complex"));
  }
  check_keys(j, "complex", {"kind", "K", "q_plus", "q_minus"}, {"K", "q_plus", "q_minus"});
  return ComplexCoupling(get_real(j, "K", "complex"), parse_series(j.at("q_plus"), "q_plus"),
                         parse_series(j.at("q_minus"), "q_minus"));
}

AnyModel parse_berry(const json& j) {
  check_keys(j, "berry", {"kind", "b", "alpha", "beta", "active_axis"},
             {"b", "alpha", "beta", "active_axis"});
  const json& ax = j.at("active_axis");
  if (!ax.is_string())
    throw ParseError("'active_axis' must be \"z_carries_b\" or \"y_carries_b\"");
  const std::string axis = ax.get<std::string>();
  BerryModel m;
  m.b = get_real(j, "b", "berry");
  m.alpha = get_real(j, "alpha", "berry");
  m.beta = get_real(j, "beta", "berry");
  if (axis == "z_carries_b")
    m.axis = ActiveAxis::z_carries_b;
  else if (axis == "y_carries_b")
    m.axis = ActiveAxis::y_carries_b;
  else
    throw ParseError("'active_axis' must be \"z_carries_b\" or \"y_carries_b\"");
  m.validate();
  return m;
}

void write_terms(std::ostringstream& os, const PolyXY& p) {
  os << '[';
  bool first = true;
  for (Eigen::Index i = 0; i < p.coeffs().rows(); ++i)
    for (Eigen::Index j = 0; j < p.coeffs().cols(); ++j) {
      const Real c = p.coeffs()(i, j);
      if (c == 0.0) continue;
      if (!first) os << ',';
      first = false;
      os << '[' << i << ',' << j << ',' << format_real(c) << ']';
    }
  os << ']';
}

void write_series(std::ostringstream& os, const std::vector<Eigen::VectorXd>& s) {
  os << '[';
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (m) os << ',';
    os << '[';
    for (Eigen::Index i = 0; i < s[m].size(); ++i) {
      if (i) os << ',';
      os << format_real(s[m][i]);
    }
    os << ']';
  }
  os << ']';
}

}  // namespace

AnyModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model document must be a JSON object");
  if (!j.contains("kind")) throw ParseError("missing key 'kind' in model document");
  if (!j.at("kind").is_string()) throw ParseError("'kind' must be a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cartesian") return parse_cartesian(j);
  if (kind == "complex") return parse_complex(j);
  if (kind == "berry") return parse_berry(j);
  throw ParseError("unknown model kind '" + kind + "' (expected cartesian, complex, or berry)");
}

AnyModel model_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string model_to_json(const AnyModel& m) {
  std::ostringstream os;
  if (const auto* c = std::get_if<CartesianCoupling>(&m)) {
    os << "{\"kind\":\"cartesian\",\"coeffs_A\":";
    write_terms(os, c->A);
    os << ",\"coeffs_B\":";
    write_terms(os, c->B);
    os << '}';
  } else if (const auto* x = std::get_if<ComplexCoupling>(&m)) {
    os << "{\"kind\":\"complex\",\"K\":" << format_real(x->K());
    if (x->quartic()) {
      os << ",\"mu\":" << format_real(x->mu()) << ",\"lambda\":" << format_real(x->lambda());
    } else {
      os << ",\"q_plus\":";
      write_series(os, x->plus_series());
      os << ",\"q_minus\":";
      write_series(os, x->minus_series());
    }
    os << '}';
  } else {
    const auto& b = std::get<BerryModel>(m);
    os << "{\"kind\":\"berry\",\"b\":" << format_real(b.b)
       << ",\"alpha\":" << format_real(b.alpha) << ",\"beta\":" << format_real(b.beta)
       << ",\"active_axis\":\""
       << (b.axis == ActiveAxis::z_carries_b ? "z_carries_b" : "y_carries_b") << "\"}";
  }
  return os.str();
}

std::string format_real(Real v) {
  if (v == 0.0) v = 0.0;  // canonicalize the sign of zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string pi_multiple_label(Real v) {
  const Real halves = std::round(v / (0.5 * pi));
  if (std::abs(v - halves * 0.5 * pi) > 1e-9) return {};
  if (std::abs(halves) > 1e6) return {};
  const long n = static_cast<long>(halves);
  char buf[40];
  if (n % 2 == 0)
    std::snprintf(buf, sizeof buf, "%ld·π", n / 2);
  else
    std::snprintf(buf, sizeof buf, "%.1f·π", 0.5 * static_cast<Real>(n));
  return buf;
}

}  // namespace ciphase
