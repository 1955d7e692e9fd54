#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ciphase {

using Real = double;
using Complex = std::complex<Real>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec2c = Eigen::Vector2cd;
using Vec3c = Eigen::Vector3cd;
using Mat2c = Eigen::Matrix2cd;

inline constexpr Real pi = 3.141592653589793238462643383279502884L;
inline constexpr Complex iu{0.0, 1.0};

// Which basis the two-state objects are expressed in. "adiabatic" means the
// instantaneous eigenstates (index 1 = upper sheet, 2 = lower sheet);
// "circulating" is the constant unitary mix (|1>+|2>)/sqrt(2), (|1>-|2>)/sqrt(2).
enum class Representation { adiabatic, circulating };

// For the three-coordinate models: which Cartesian axis carries the linear
// splitting term b. The remaining two axes span the coupling plane.
enum class ActiveAxis { z_carries_b, y_carries_b };

enum class Sheet { lower, upper };

enum class FieldKind { magnetic, yang_mills };

// Sign of the geometric phase contributed by one intersection point:
// plus is +pi per loop, minus is -pi. degenerate marks a non-simple point
// (merged roots, vanishing local slope) whose contribution is undefined.
enum class SignClass { plus, minus, degenerate };

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RepresentationError : std::logic_error {
  using std::logic_error::logic_error;
};

// A traced contour passed through (or too close to) an intersection point.
struct ContourError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adjacent samples moved by more than the continuation rule can disambiguate.
struct UndersampledError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A limit/extrapolation sequence without a usable trend.
struct NoLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Asymptotic extraction requested outside its validity regime.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step size invalid for the requested finite-difference or ODE operation.
struct StepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model or config document unreadable, malformed, or schema-violating.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Real wrap_to_pi(Real a) {
  a = std::remainder(a, 2.0 * pi);
  return a;
}

// bilinear cross product; Eigen's cross() conjugates complex results
inline Vec3c cross3(const Vec3c& a, const Vec3c& b) {
  return Vec3c(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]);
}

}  // namespace ciphase
