#include <doctest.h>

#include <cmath>

#include "ciphase/ci_analysis.hpp"

using namespace ciphase;

namespace {

// Independent root oracle: scan for sign changes, then bisect to 1e-13.
std::vector<Real> bisect_roots(const std::function<Real(Real)>& f, Real lo, Real hi, int scan) {
  std::vector<Real> roots;
  Real prev = f(lo);
  for (int i = 1; i <= scan; ++i) {
    const Real x = lo + (hi - lo) * i / scan;
    const Real cur = f(x);
    if (prev == 0.0) roots.push_back(lo + (hi - lo) * (i - 1) / scan);
    else if (prev * cur < 0.0) {
      Real a = lo + (hi - lo) * (i - 1) / scan, b = x, fa = prev;
      for (int it = 0; it < 100; ++it) {
        const Real mid = 0.5 * (a + b), fm = f(mid);
        if (fa * fm <= 0.0) b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  return roots;
}

const Real kRootA1 = 3.9493084363469855;   // oracle values for mu=0.3, lambda=0.003
const Real kRootA2 = 7.422271989685594;
const Real kRootB1 = 11.371580426032583;

}  // namespace

TEST_SUITE("ci_analysis") {

TEST_CASE("cubic solver matches the bisection oracle") {
  auto branch_a = [](Real q) { return 0.003 * q * q * q - 0.3 * q + 1.0; };
  auto branch_b = [](Real q) { return -0.003 * q * q * q + 0.3 * q + 1.0; };
  const auto oa = bisect_roots(branch_a, 0.0, 60.0, 6000);
  const auto ob = bisect_roots(branch_b, 0.0, 60.0, 6000);
  REQUIRE(oa.size() == 2);
  REQUIRE(ob.size() == 1);
  CHECK(oa[0] == doctest::Approx(kRootA1).epsilon(1e-12));
  CHECK(oa[1] == doctest::Approx(kRootA2).epsilon(1e-12));
  CHECK(ob[0] == doctest::Approx(kRootB1).epsilon(1e-12));

  const auto ra = positive_cubic_roots(0.003, -0.3, 1.0);
  const auto rb = positive_cubic_roots(-0.003, 0.3, 1.0);
  REQUIRE(ra.size() == 2);
  REQUIRE(rb.size() == 1);
  CHECK(ra[0] == doctest::Approx(oa[0]).epsilon(1e-12));
  CHECK(ra[1] == doctest::Approx(oa[1]).epsilon(1e-12));
  CHECK(rb[0] == doctest::Approx(ob[0]).epsilon(1e-12));

  SUBCASE("degenerate cubic becomes linear") {
    const auto r = positive_cubic_roots(0.0, -0.3, 1.0);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(1.0 / 0.3).epsilon(1e-14));
    CHECK(positive_cubic_roots(0.0, 0.3, 1.0).empty());
  }

  SUBCASE("double root collapses to one entry") {
    const auto r = positive_cubic_roots(0.004, -0.3, 1.0);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(5.0).epsilon(1e-9));
  }
}

TEST_CASE("quartic census enumerates all intersection points") {
  ComplexCoupling m(1.0, 0.3, 0.003);
  const auto cis = locate_complex_cis(m);
  REQUIRE(cis.size() == 10);  // origin + 2 trigonal triples + 1 more triple
  CHECK(cis[0].kind == CiKind::origin);
  CHECK(cis[0].sign == SignClass::minus);

  int na = 0, nb = 0;
  for (const auto& p : cis) {
    if (p.kind == CiKind::origin) continue;
    CHECK(std::abs(m.offdiag(p.q0, p.phi0)) < 1e-9 * p.q0);
    if (p.kind == CiKind::trigonal_a) {
      ++na;
      CHECK(std::abs(std::remainder(3.0 * p.phi0, 2.0 * pi)) < 1e-12);
      const bool inner = std::abs(p.q0 - kRootA1) < 1e-9;
      CHECK((inner || std::abs(p.q0 - kRootA2) < 1e-9));
      CHECK(p.sign == (inner ? SignClass::plus : SignClass::minus));
    } else if (p.kind == CiKind::trigonal_b) {
      ++nb;
      CHECK(std::abs(std::remainder(3.0 * p.phi0 - pi, 2.0 * pi)) < 1e-12);
      CHECK(p.q0 == doctest::Approx(kRootB1).epsilon(1e-9));
      CHECK(p.sign == SignClass::minus);
    }
  }
  CHECK(na == 6);
  CHECK(nb == 3);

  // sign flip threshold sits between the two branch-a radii
  const Real thresh = std::sqrt(0.3 / (3.0 * 0.003));
  CHECK(thresh == doctest::Approx(5.773502691896257).epsilon(1e-15));
  CHECK(kRootA1 < thresh);
  CHECK(kRootA2 > thresh);
}

TEST_CASE("loop phase prediction counts enclosed signs") {
  ComplexCoupling m(1.0, 0.3, 0.003);
  const auto cis = locate_complex_cis(m);
  const Vec2 c(0, 0);
  CHECK(predicted_loop_phase(cis, c, 2.0) == doctest::Approx(-pi));
  CHECK(predicted_loop_phase(cis, c, 5.0) == doctest::Approx(2.0 * pi));
  CHECK(predicted_loop_phase(cis, c, 9.0) == doctest::Approx(-pi));
  CHECK(predicted_loop_phase(cis, c, 20.0) == doctest::Approx(-4.0 * pi));
  CHECK_THROWS_AS(predicted_loop_phase(cis, c, kRootA1), ContourError);
  // off-center loop enclosing a single trigonal point
  CHECK(predicted_loop_phase(cis, Vec2(kRootA1, 0.0), 0.5) == doctest::Approx(pi));
}

TEST_CASE("shifted ring census for opposite-sign couplings") {
  ComplexCoupling m(1.0, -0.3, 0.003);
  const auto cis = locate_complex_cis(m);

  int nring = 0, nb = 0;
  for (const auto& p : cis) {
    if (p.kind == CiKind::shifted_ring) {
      ++nring;
      CHECK(p.q0 == doctest::Approx(10.0).epsilon(1e-10));
      CHECK(std::cos(3.0 * p.phi0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
      CHECK(p.sign == SignClass::minus);
      CHECK(std::abs(m.offdiag(p.q0, p.phi0)) < 1e-9 * p.q0);
    } else if (p.kind == CiKind::trigonal_b) {
      ++nb;
      CHECK(p.sign == SignClass::plus);
    }
  }
  CHECK(nring == 6);
  CHECK(nb == 3);
  REQUIRE(cis.size() == 10);
  CHECK(predicted_loop_phase(cis, Vec2(0, 0), 20.0) == doctest::Approx(-4.0 * pi));
}

TEST_CASE("degenerate double root is flagged and refused in loops") {
  ComplexCoupling m(1.0, 0.3, 0.004);
  const auto cis = locate_complex_cis(m);
  bool found = false;
  for (const auto& p : cis)
    if (p.kind != CiKind::origin && std::abs(p.q0 - 5.0) < 1e-6) {
      found = true;
      CHECK(p.sign == SignClass::degenerate);
    }
  CHECK(found);
  CHECK_THROWS_AS(predicted_loop_phase(cis, Vec2(0, 0), 6.0), InputError);
  CHECK(predicted_loop_phase(cis, Vec2(0, 0), 2.0) == doctest::Approx(-pi));
}

TEST_CASE("series sweep reproduces the closed-form census") {
  ComplexCoupling quartic(1.0, 0.3, 0.003);
  ComplexCoupling series(1.0, {Eigen::VectorXd::Constant(1, -0.3)},
                         {Eigen::VectorXd::Constant(1, 0.003)});
  const auto ref = locate_complex_cis(quartic);
  const auto got = locate_complex_cis(series, 12.5);
  REQUIRE(got.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK((got[i].xy - ref[i].xy).norm() < 1e-6 * std::max(1.0, ref[i].q0));
    CHECK(got[i].sign == ref[i].sign);  // winding rule vs slope ratio
    CHECK(got[i].kind == ref[i].kind);
  }
}

TEST_CASE("planar census finds and signs polynomial intersections") {
  // A = X^2 - 1, B = Y
  CartesianCoupling m1(PolyXY::from_terms({{2, 0, 1.0}, {0, 0, -1.0}}),
                       PolyXY::from_terms({{0, 1, 1.0}}));
  const auto c1 = locate_cartesian_cis(m1, {-2.0, 2.0, -2.0, 2.0});
  REQUIRE(c1.size() == 2);
  CHECK((c1[0].xy - Vec2(-1, 0)).norm() < 1e-10);
  CHECK((c1[1].xy - Vec2(1, 0)).norm() < 1e-10);
  CHECK(c1[0].sign == SignClass::minus);  // J = 2X
  CHECK(c1[1].sign == SignClass::plus);
  CHECK(predicted_loop_phase(c1, Vec2(0, 0), 1.5) == doctest::Approx(0.0));
  CHECK(predicted_loop_phase(c1, Vec2(1, 0), 0.5) == doctest::Approx(pi));

  // A = X^2 - 1, B = X Y
  CartesianCoupling m2(PolyXY::from_terms({{2, 0, 1.0}, {0, 0, -1.0}}),
                       PolyXY::from_terms({{1, 1, 1.0}}));
  const auto c2 = locate_cartesian_cis(m2, {-2.0, 2.0, -2.0, 2.0});
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].sign == SignClass::plus);  // J = 2X^2 at both points
  CHECK(c2[1].sign == SignClass::plus);
  CHECK(predicted_loop_phase(c2, Vec2(0, 0), 1.5) == doctest::Approx(2.0 * pi));

  SUBCASE("degenerate jacobian is classified") {
    // A = X, B = X Y: at (0,0) J = 1*X - Y*0 = 0
    CartesianCoupling md(PolyXY::from_terms({{1, 0, 1.0}}),
                         PolyXY::from_terms({{1, 1, 1.0}}));
    CHECK(jacobian_sign(md, Vec2(0, 0)) == SignClass::degenerate);
  }
}

TEST_CASE("input validation") {
  CartesianCoupling m(PolyXY::from_terms({{1, 0, 1.0}}), PolyXY::from_terms({{0, 1, 1.0}}));
  CHECK_THROWS_AS(locate_cartesian_cis(m, {1.0, -1.0, -1.0, 1.0}), InputError);
  CHECK_THROWS_AS(locate_cartesian_cis(m, {-1.0, 1.0, -1.0, 1.0}, 1), InputError);
  ComplexCoupling s(1.0, {Eigen::VectorXd::Constant(1, -0.3)},
                    {Eigen::VectorXd::Constant(1, 0.003)});
  CHECK_THROWS_AS(locate_complex_cis(s, -1.0), InputError);
  const auto cis = locate_complex_cis(ComplexCoupling(1.0, 0.3, 0.003));
  CHECK_THROWS_AS(predicted_loop_phase(cis, Vec2(0, 0), -2.0), InputError);
}

}  // TEST_SUITE
