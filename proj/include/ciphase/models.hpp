#pragma once

#include <tuple>
#include <vector>

#include "ciphase/types.hpp"

namespace ciphase {

// Real bivariate polynomial. coeffs()(i, j) multiplies X^i * Y^j.
// Total degree is capped at 8 on construction.
class PolyXY {
 public:
  PolyXY();
  explicit PolyXY(Eigen::MatrixXd coeffs);
  // terms are {degree_x, degree_y, coefficient}; repeated terms accumulate.
  static PolyXY from_terms(const std::vector<std::tuple<int, int, Real>>& terms);

  Real operator()(Real x, Real y) const;
  // Same polynomial with |coefficients|, evaluated at (|x|, |y|).
  // Upper bound on |p| in a sign-insensitive way; used as a degeneracy scale.
  Real abs_eval(Real x, Real y) const;
  PolyXY dx() const;
  PolyXY dy() const;

  const Eigen::MatrixXd& coeffs() const { return c_; }
  int total_degree() const;

 private:
  Eigen::MatrixXd c_;
};

// Diabatic potential [[A, B], [B, -A]] with polynomial entries.
struct CartesianCoupling {
  PolyXY A, B;
  PolyXY Ax, Ay, Bx, By;  // cached partials, used by root search and sign rule

  CartesianCoupling(PolyXY a, PolyXY b);
};

// Off-diagonal coupling in the polar form
//   V12 = K q e^{-i phi} W(q, phi),
//   W = 1 + sum_m q^{3m-2} P_m+(q^2) e^{3 i m phi}
//         + sum_m q^{3m}   P_m-(q^2) e^{-3 i m phi}.
// The quartic truncation keeps only P_1+ = -mu and P_1- = lambda.
class ComplexCoupling {
 public:
  ComplexCoupling(Real K, Real mu, Real lambda);
  ComplexCoupling(Real K, std::vector<Eigen::VectorXd> plus,
                  std::vector<Eigen::VectorXd> minus);

  bool quartic() const { return quartic_; }
  Real K() const { return K_; }
  Real mu() const;
  Real lambda() const;
  const std::vector<Eigen::VectorXd>& plus_series() const { return plus_; }
  const std::vector<Eigen::VectorXd>& minus_series() const { return minus_; }

  Complex bracket(Real q, Real phi) const;      // W
  Complex bracket_dq(Real q, Real phi) const;   // dW/dq
  Complex bracket_dphi(Real q, Real phi) const; // dW/dphi
  Complex offdiag(Real q, Real phi) const;      // K q e^{-i phi} W

 private:
  Real K_;
  bool quartic_;
  Real mu_ = 0.0, lambda_ = 0.0;
  std::vector<Eigen::VectorXd> plus_, minus_;  // polynomials in q^2, ascending
};

// Two-level linear model around an isolated intersection:
//   z_carries_b: H = alpha X sx + beta Y sy + b Z sz
//   y_carries_b: H = alpha X sx + b Y sy + beta Z sz
// b > 0 is required; b = 0 collapses the seam structure the field and
// flux machinery relies on.
struct BerryModel {
  Real b = 1.0;
  Real alpha = 1.0;
  Real beta = 1.0;
  ActiveAxis axis = ActiveAxis::z_carries_b;

  Real gamma() const { return alpha / beta; }
  void validate() const;
};

// Polar data at a point, in the frame adapted to the splitting axis.
// The in-plane pair is taken in the cyclic right-handed order around that
// axis: (x, y) for z_carries_b, (z, x) for y_carries_b. q and phi are the
// plain cylindrical coordinates of the pair; qp and phip weight the pair by
// the model's coupling constants; s = qp/q is the elliptic modulation,
// s^2 = g1^2 cos^2 phi + g2^2 sin^2 phi. h is the coordinate along the
// splitting axis, Rb = hypot(qp, b h), and cos(theta) = b h / Rb.
struct BerryAngles {
  Real q, phi, s, qp, phip, Rb, theta, h;
};

BerryAngles berry_angles(const BerryModel& m, const Vec3& r);

// Instantaneous eigenstates. upper belongs to eigenvalue +Rb, lower to -Rb.
struct SpinorPair {
  Vec2c lower, upper;
  Representation rep = Representation::adiabatic;
};

Mat2c eval_potential(const CartesianCoupling& m, const Vec2& xy);
Mat2c eval_potential(const ComplexCoupling& m, const Vec2& xy);
Mat2c eval_potential(const BerryModel& m, const Vec3& r);

// Half the argument of (A + iB), in (-pi/2, pi/2]. Throws DegeneracyError
// when both couplings vanish to rounding.
Real mixing_angle(const CartesianCoupling& m, const Vec2& xy);
Real mixing_angle(const ComplexCoupling& m, const Vec2& xy);

// Half-angle gauge: upper = (cos(t/2) e^{-i phi/2}, sin(t/2) e^{+i phi/2}),
// lower = (-sin(t/2) e^{-i phi/2}, cos(t/2) e^{+i phi/2}). phi need not be
// principal; the pair is smooth in phi and flips sign after a 2 pi sweep.
SpinorPair states_from_angles(Real theta, Real phi);

SpinorPair adiabatic_states(const BerryModel& m, const Vec3& r);

// Constant mix |+-> = (upper +- lower)/sqrt(2); upper slot holds |+>.
SpinorPair to_circulating(const SpinorPair& s);
SpinorPair from_circulating(const SpinorPair& s);

// Components (v_q, v_phi, v_axis) of a frame vector into Cartesian (x, y, z),
// honoring the model's splitting-axis frame at azimuth phi.
Vec3c frame_to_cartesian(const BerryModel& m, const Vec3c& v, Real phi);

}  // namespace ciphase
