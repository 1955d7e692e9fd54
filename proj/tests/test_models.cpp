#include <doctest.h>

#include <cmath>
#include <random>

#include "ciphase/models.hpp"

using namespace ciphase;

namespace {

CartesianCoupling example_one() {
  // A = X^2 - 1, B = Y
  return CartesianCoupling(PolyXY::from_terms({{2, 0, 1.0}, {0, 0, -1.0}}),
                           PolyXY::from_terms({{0, 1, 1.0}}));
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("polynomial evaluation and derivatives") {
  PolyXY p = PolyXY::from_terms({{2, 1, 3.0}, {0, 0, -2.0}, {1, 3, 0.5}});
  CHECK(p(1.5, -2.0) == doctest::Approx(3.0 * 2.25 * -2.0 - 2.0 + 0.5 * 1.5 * -8.0).epsilon(1e-15));
  CHECK(p.dx()(1.5, -2.0) == doctest::Approx(6.0 * 1.5 * -2.0 + 0.5 * -8.0).epsilon(1e-15));
  CHECK(p.dy()(1.5, -2.0) == doctest::Approx(3.0 * 2.25 + 1.5 * 1.5 * 4.0).epsilon(1e-15));
  CHECK(p.total_degree() == 4);
  CHECK(p.abs_eval(-1.5, 2.0) == doctest::Approx(3.0 * 2.25 * 2.0 + 2.0 + 0.5 * 1.5 * 8.0));
  CHECK_THROWS_AS(PolyXY::from_terms({{5, 4, 1.0}}), InputError);
}

TEST_CASE("cartesian mixing angle near a linear intersection") {
  CartesianCoupling m = example_one();
  const Real eps = 1e-3, a = 0.1;
  const Vec2 pt(1.0 + eps * std::cos(a), eps * std::sin(a));
  const Real th = mixing_angle(m, pt);
  // frozen from an independent evaluation of atan2(B, A)/2 at this point
  CHECK(th == doctest::Approx(0.02505021486199673).epsilon(1e-12));
  // linearized model atan(tan(a)/2)/2 agrees to O(eps)
  CHECK(std::abs(th - 0.5 * std::atan(std::tan(a) / 2.0)) < 1e-4);
  // eigenvector oracle: (-sin th, cos th) spans the lower level
  const Real A = m.A(pt.x(), pt.y()), B = m.B(pt.x(), pt.y());
  Eigen::Matrix2d v;
  v << A, B, B, -A;
  Eigen::Vector2d low(-std::sin(th), std::cos(th));
  CHECK(((v + std::hypot(A, B) * Eigen::Matrix2d::Identity()) * low).norm() < 1e-12);
}

TEST_CASE("complex coupling bracket and mixing angle") {
  ComplexCoupling m(2.0, 0.3, 0.003);
  const Real q = 1.7, phi = 0.9;

  SUBCASE("bracket matches the explicit quartic expression") {
    const Complex w = m.bracket(q, phi);
    const Complex expl = 1.0 - 0.3 * q * std::exp(iu * (3.0 * phi)) +
                         0.003 * q * q * q * std::exp(-iu * (3.0 * phi));
    CHECK(std::abs(w - expl) < 1e-15);
  }

  SUBCASE("bracket derivatives agree with finite differences") {
    const Real h = 1e-6;
    const Complex dq_fd = (m.bracket(q + h, phi) - m.bracket(q - h, phi)) / (2 * h);
    const Complex dphi_fd = (m.bracket(q, phi + h) - m.bracket(q, phi - h)) / (2 * h);
    CHECK(std::abs(m.bracket_dq(q, phi) - dq_fd) < 1e-8);
    CHECK(std::abs(m.bracket_dphi(q, phi) - dphi_fd) < 1e-8);
  }

  SUBCASE("mixing angle is an eigenvector phase") {
    const Vec2 pt(q * std::cos(phi), q * std::sin(phi));
    const Real th = mixing_angle(m, pt);
    const Complex v12 = m.offdiag(q, phi);
    const Mat2c h = eval_potential(m, pt);
    const Vec2c low(Complex(1, 0), -std::exp(-2.0 * iu * th));
    CHECK(((h + std::abs(v12) * Mat2c::Identity()) * low).norm() < 1e-12 * std::abs(v12));
  }

  SUBCASE("general series with the quartic terms evaluates identically") {
    ComplexCoupling s(2.0, {Eigen::VectorXd::Constant(1, -0.3)},
                      {Eigen::VectorXd::Constant(1, 0.003)});
    CHECK(std::abs(s.bracket(q, phi) - m.bracket(q, phi)) < 1e-15);
    CHECK_THROWS_AS(s.mu(), RepresentationError);
  }
}

TEST_CASE("degenerate points are refused") {
  // lambda = 4 mu^3 / 27 makes q = 5 a double root of the on-axis cubic
  ComplexCoupling dbl(1.0, 0.3, 0.004);
  CHECK(std::abs(dbl.bracket(5.0, 0.0)) < 1e-14);
  CHECK_THROWS_AS(mixing_angle(dbl, Vec2(5.0, 0.0)), DegeneracyError);
  CHECK_THROWS_AS(mixing_angle(dbl, Vec2(0.0, 0.0)), DegeneracyError);

  CartesianCoupling lin(PolyXY::from_terms({{1, 0, 1.0}}), PolyXY::from_terms({{0, 1, 1.0}}));
  CHECK_THROWS_AS(mixing_angle(lin, Vec2(0.0, 0.0)), DegeneracyError);
}

TEST_CASE("berry angles in both frames") {
  BerryModel m{1.0, 1.0, 2.0, ActiveAxis::z_carries_b};
  const BerryAngles a = berry_angles(m, Vec3(1.0, 1.0, 0.0));
  CHECK(a.phip == doctest::Approx(1.1071487177940904).epsilon(1e-15));
  CHECK(a.qp == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(a.theta == doctest::Approx(0.5 * pi).epsilon(1e-15));
  CHECK(a.s == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));

  // mapped point in the y frame with swapped couplings gives the same triple
  BerryModel my{1.0, 2.0, 1.0, ActiveAxis::y_carries_b};
  const BerryAngles ay = berry_angles(my, Vec3(1.0, 0.0, 1.0));
  CHECK(ay.phip == doctest::Approx(a.phip).epsilon(1e-15));
  CHECK(ay.qp == doctest::Approx(a.qp).epsilon(1e-15));
  CHECK(ay.theta == doctest::Approx(a.theta).epsilon(1e-15));

  CHECK_THROWS_AS(berry_angles(BerryModel{0.0, 1.0, 1.0}, Vec3(1, 0, 0)), InputError);
  CHECK_THROWS_AS(berry_angles(BerryModel{1.0, -1.0, 1.0}, Vec3(1, 0, 0)), InputError);
}

TEST_CASE("adiabatic states are eigenvectors in both frames") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<Real> u(-2.0, 2.0);
  std::uniform_real_distribution<Real> up(0.2, 3.0);
  for (int k = 0; k < 200; ++k) {
    BerryModel m{up(rng), up(rng), up(rng),
                 (k % 2 == 0) ? ActiveAxis::z_carries_b : ActiveAxis::y_carries_b};
    const Vec3 r(u(rng), u(rng), u(rng));
    const BerryAngles a = berry_angles(m, r);
    if (a.Rb < 1e-6) continue;
    const SpinorPair s = adiabatic_states(m, r);
    const Mat2c h = eval_potential(m, r);
    CHECK((h * s.upper - a.Rb * s.upper).norm() < 1e-12 * a.Rb);
    CHECK((h * s.lower + a.Rb * s.lower).norm() < 1e-12 * a.Rb);
    CHECK(std::abs(s.upper.norm() - 1.0) < 1e-14);
    CHECK(std::abs(s.lower.norm() - 1.0) < 1e-14);
    CHECK(std::abs(s.upper.dot(s.lower)) < 1e-13);
  }
}

TEST_CASE("simple states at marker points") {
  BerryModel m{1.0, 1.0, 1.0, ActiveAxis::z_carries_b};
  SpinorPair pole = adiabatic_states(m, Vec3(0, 0, 1));
  CHECK((pole.lower - Vec2c(Complex(0, 0), Complex(1, 0))).norm() < 1e-15);
  SpinorPair eq = adiabatic_states(m, Vec3(1, 0, 0));
  const Real r = 1.0 / std::sqrt(2.0);
  CHECK((eq.lower - Vec2c(Complex(-r, 0), Complex(r, 0))).norm() < 1e-15);
  CHECK_THROWS_AS(adiabatic_states(m, Vec3(0, 0, 0)), DegeneracyError);
}

TEST_CASE("half-angle gauge flips sign after a full sweep") {
  const Real th = 0.8;
  SpinorPair s0 = states_from_angles(th, 0.3);
  SpinorPair s1 = states_from_angles(th, 0.3 + 2.0 * pi);
  CHECK((s0.upper + s1.upper).norm() < 1e-14);
  CHECK((s0.lower + s1.lower).norm() < 1e-14);
}

TEST_CASE("circulating representation has purely off-diagonal energy") {
  BerryModel m{0.7, 1.3, 0.6, ActiveAxis::z_carries_b};
  const Vec3 r(0.8, -0.4, 0.5);
  const BerryAngles a = berry_angles(m, r);
  const SpinorPair ad = adiabatic_states(m, r);
  const SpinorPair ci = to_circulating(ad);
  const Mat2c h = eval_potential(m, r);
  CHECK(std::abs(ci.upper.dot(h * ci.upper)) < 1e-13 * a.Rb);
  CHECK(std::abs(ci.lower.dot(h * ci.lower)) < 1e-13 * a.Rb);
  CHECK(std::abs(ci.upper.dot(h * ci.lower) - Complex(a.Rb, 0)) < 1e-13 * a.Rb);
  CHECK_THROWS_AS(to_circulating(ci), RepresentationError);
  CHECK_THROWS_AS(from_circulating(ad), RepresentationError);
  const SpinorPair back = from_circulating(ci);
  CHECK((back.upper - ad.upper).norm() < 1e-14);
}

TEST_CASE("frame vectors map back to cartesian axes") {
  BerryModel mz{1.0, 1.0, 1.0, ActiveAxis::z_carries_b};
  const Real phi = 0.6;
  const Vec3c qhat = frame_to_cartesian(mz, Vec3c(1, 0, 0), phi);
  CHECK(std::abs(qhat[0] - std::cos(phi)) < 1e-15);
  CHECK(std::abs(qhat[1] - std::sin(phi)) < 1e-15);

  BerryModel my{1.0, 1.0, 1.0, ActiveAxis::y_carries_b};
  // at phi = 0 the radial leg is +z and the azimuthal leg is +x
  const Vec3c qy = frame_to_cartesian(my, Vec3c(1, 0, 0), 0.0);
  const Vec3c py = frame_to_cartesian(my, Vec3c(0, 1, 0), 0.0);
  CHECK(std::abs(qy[2] - 1.0) < 1e-15);
  CHECK(std::abs(py[0] - 1.0) < 1e-15);
  const Vec3c ay = frame_to_cartesian(my, Vec3c(0, 0, 1), 0.0);
  CHECK(std::abs(ay[1] - 1.0) < 1e-15);
}

TEST_CASE("invalid model parameters are rejected") {
  CHECK_THROWS_AS(ComplexCoupling(0.0, 0.1, 0.1), InputError);
  CHECK_THROWS_AS(ComplexCoupling(-1.0, 0.1, 0.1), InputError);
  BerryModel bad{1.0, 1.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), InputError);
}

}  // TEST_SUITE
