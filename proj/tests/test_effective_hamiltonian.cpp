#include "ciphase/effective_hamiltonian.hpp"

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "ciphase/flux.hpp"
#include "ciphase/gauge_fields.hpp"
#include "doctest.h"

using namespace ciphase;

namespace {

Mat2c pauli(int a) {
  Mat2c s;
  if (a == 0)
    s << 0, 1, 1, 0;
  else if (a == 1)
    s << 0, -iu, iu, 0;
  else
    s << 1, 0, 0, -1;
  return s;
}

Mat2c random_mat(std::mt19937& rng) {
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  Mat2c m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

Mat2c random_unitary(std::mt19937& rng) {
  return Eigen::HouseholderQR<Mat2c>(random_mat(rng)).householderQ();
}

// hand contraction of the index expression, free of matrix-product and
// Kronecker shortcuts so it can arbitrate the fast path: the fields act
// on the orbital labels m, p, r while the spin label rides through the
// operator untouched
Eigen::MatrixXcd contract_by_hand(const EffHSpec& s) {
  const int sd = s.spin_dim, dim = 2 * sd;
  Eigen::MatrixXcd raw = Eigen::MatrixXcd::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    const int m = row / sd, ms = row % sd;
    for (int col = 0; col < dim; ++col) {
      Complex acc = 0.0;
      for (int a = 0; a < 3; ++a) {
        if (s.c1 != 0.0)
          for (int r = 0; r < 2; ++r)
            acc += s.c1 * s.f[a](m, r) * s.op1[a](r * sd + ms, col);
        if (s.c2 != 0.0)
          for (int b = 0; b < 3; ++b)
            for (int p = 0; p < 2; ++p)
              for (int r = 0; r < 2; ++r)
                acc += s.c2 * s.f[a](m, p) * s.f[b](p, r) *
                       s.op2[a][b](r * sd + ms, col);
      }
      raw(row, col) = acc;
    }
  }
  return 0.5 * (raw + raw.adjoint().eval());
}

}  // namespace

TEST_SUITE("effective_hamiltonian") {

TEST_CASE("zero coefficients give the zero matrix") {
  EffHSpec s;
  const EffHResult r = build_eff_h(s);
  CHECK(r.h.rows() == 2);
  CHECK(r.h.norm() == 0.0);
  CHECK(r.hermiticity_defect == 0.0);
  s.spin_dim = 3;
  CHECK(build_eff_h(s).h.rows() == 6);
  CHECK(build_eff_h(s).h.norm() == 0.0);
}

TEST_CASE("linear term with identity operators sums the field matrices") {
  // field input: the seam coefficients of the adiabatic field strength at
  // a point, one 2x2 matrix per nuclear axis
  const BerryModel m{1.0, 0.8, 1.3, ActiveAxis::z_carries_b};
  const GaugeTensor ym =
      yang_mills_field(m, Representation::adiabatic, Vec3(0.7, 0.4, 0.9));
  EffHSpec s;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s.f[a](i, j) = ym.f[i][j].seam[a];
  s.c1 = 1.0;
  for (int a = 0; a < 3; ++a) s.op1[a] = Eigen::MatrixXcd::Identity(2, 2);

  const Mat2c sum = s.f[0] + s.f[1] + s.f[2];
  const EffHResult r = build_eff_h(s);
  CHECK((r.h - 0.5 * (sum + sum.adjoint())).norm() < 1e-14);
  CHECK((r.h - contract_by_hand(s)).norm() < 1e-14);
}

TEST_CASE("quadratic term with a delta_ab identity squares the fields") {
  std::mt19937 rng(7);
  EffHSpec s;
  for (int a = 0; a < 3; ++a) s.f[a] = random_mat(rng);
  s.c2 = 0.7;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      s.op2[a][b] = a == b ? Eigen::MatrixXcd::Identity(2, 2).eval()
                           : Eigen::MatrixXcd::Zero(2, 2).eval();
  Mat2c want = Mat2c::Zero();
  for (int a = 0; a < 3; ++a) want += 0.7 * (s.f[a] * s.f[a]);
  const EffHResult r = build_eff_h(s);
  CHECK((r.h - 0.5 * (want + want.adjoint())).norm() < 1e-14);
  CHECK((r.h - contract_by_hand(s)).norm() < 1e-13);
}

TEST_CASE("contraction matches the hand-indexed expression") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    EffHSpec s;
    for (int a = 0; a < 3; ++a) s.f[a] = random_mat(rng);
    s.c1 = 0.4;
    s.c2 = -1.1;
    for (int a = 0; a < 3; ++a) {
      s.op1[a] = random_mat(rng);
      for (int b = 0; b < 3; ++b) s.op2[a][b] = random_mat(rng);
    }
    CHECK((build_eff_h(s).h - contract_by_hand(s)).norm() < 1e-12);
  }
}

TEST_CASE("result is linear in both coefficients") {
  std::mt19937 rng(23);
  EffHSpec s;
  for (int a = 0; a < 3; ++a) {
    s.f[a] = random_mat(rng);
    s.op1[a] = random_mat(rng);
    for (int b = 0; b < 3; ++b) s.op2[a][b] = random_mat(rng);
  }
  EffHSpec lin = s, quad = s;
  lin.c1 = 1.0;
  quad.c2 = 1.0;
  const Eigen::MatrixXcd h1 = build_eff_h(lin).h;
  const Eigen::MatrixXcd h2 = build_eff_h(quad).h;
  for (auto [c1, c2] : {std::pair{0.3, -2.0}, {1.7, 0.01}, {-5.0, 4.0}}) {
    EffHSpec both = s;
    both.c1 = c1;
    both.c2 = c2;
    CHECK((build_eff_h(both).h - (c1 * h1 + c2 * h2)).norm() < 1e-12);
  }
}

TEST_CASE("covariance under an electronic basis change") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    EffHSpec s;
    for (int a = 0; a < 3; ++a) {
      s.f[a] = random_mat(rng);
      s.op1[a] = random_mat(rng);
      for (int b = 0; b < 3; ++b) s.op2[a][b] = random_mat(rng);
    }
    s.c1 = 0.9;
    s.c2 = 0.35;
    const Mat2c u = random_unitary(rng);
    EffHSpec rot = s;
    for (int a = 0; a < 3; ++a) {
      rot.f[a] = u.adjoint() * s.f[a] * u;
      rot.op1[a] = u.adjoint() * s.op1[a] * u;
      for (int b = 0; b < 3; ++b) rot.op2[a][b] = u.adjoint() * s.op2[a][b] * u;
    }
    const Eigen::MatrixXcd want = u.adjoint() * build_eff_h(s).h * u;
    CHECK((build_eff_h(rot).h - want).norm() < 1e-12);
  }
}

TEST_CASE("flux tables discriminate the two field kinds") {
  // full-plane fluxes of the adiabatic seam, one scalar per element; fed
  // in as the axis-carrying field matrix they reproduce the structural
  // split: Yang-Mills flux is diagonal, magnetic flux is off-diagonal
  const BerryModel m{0.7, 1.0, 1.0, ActiveAxis::z_carries_b};
  const Disc plane{std::numeric_limits<Real>::infinity(), 1.0};
  Mat2c f_mag = Mat2c::Zero(), f_ym = Mat2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      f_mag(i, j) = surface_flux(m, Representation::adiabatic, i, j,
                                 FieldKind::magnetic, plane);
      f_ym(i, j) = surface_flux(m, Representation::adiabatic, i, j,
                                FieldKind::yang_mills, plane);
    }

  auto with_field = [](const Mat2c& fz) {
    EffHSpec s;
    s.f[2] = fz;
    s.c1 = 1.0;
    for (int a = 0; a < 3; ++a) s.op1[a] = Eigen::MatrixXcd::Identity(2, 2);
    return build_eff_h(s).h;
  };
  const Eigen::MatrixXcd h_ym = with_field(f_ym);
  CHECK(std::abs(h_ym(0, 0)) > 3.0);
  CHECK(std::abs(h_ym(1, 1)) > 3.0);
  CHECK(std::abs(h_ym(0, 1)) < 1e-6);
  const Eigen::MatrixXcd h_mag = with_field(f_mag);
  CHECK(std::abs(h_mag(0, 1)) > 3.0);
  CHECK(std::abs(h_mag(0, 0)) < 1e-6);
  CHECK(std::abs(h_mag(1, 1)) < 1e-6);
}

TEST_CASE("spin extension contracts on the product space") {
  std::mt19937 rng(47);
  EffHSpec s;
  s.spin_dim = 2;
  s.c1 = 1.3;
  for (int a = 0; a < 3; ++a) {
    s.f[a] = random_mat(rng);
    // Op1^a = I_orb x s^a acts on spin only; the build then couples each
    // orbital field matrix to its matching spin axis
    s.op1[a] = Eigen::kroneckerProduct(Mat2c::Identity().eval(), pauli(a));
  }
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
  for (int a = 0; a < 3; ++a)
    want += 1.3 * Eigen::kroneckerProduct(s.f[a], pauli(a));
  want = 0.5 * (want + want.adjoint().eval());
  const EffHResult r = build_eff_h(s);
  CHECK(r.h.rows() == 4);
  CHECK((r.h - want).norm() < 1e-13);
  CHECK((r.h - contract_by_hand(s)).norm() < 1e-13);
}

TEST_CASE("covariance holds on the extended space too") {
  std::mt19937 rng(53);
  EffHSpec s;
  s.spin_dim = 2;
  s.c1 = 0.6;
  s.c2 = 0.2;
  auto random_big = [&] {
    Eigen::MatrixXcd m(4, 4);
    std::uniform_real_distribution<Real> u(-1.0, 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = Complex(u(rng), u(rng));
    return m;
  };
  for (int a = 0; a < 3; ++a) {
    s.f[a] = random_mat(rng);
    s.op1[a] = random_big();
    for (int b = 0; b < 3; ++b) s.op2[a][b] = random_big();
  }
  const Mat2c u = random_unitary(rng);
  const Eigen::MatrixXcd u_full =
      Eigen::kroneckerProduct(u, Mat2c::Identity().eval());
  EffHSpec rot = s;
  for (int a = 0; a < 3; ++a) {
    rot.f[a] = u.adjoint() * s.f[a] * u;
    rot.op1[a] = u_full.adjoint() * s.op1[a] * u_full;
    for (int b = 0; b < 3; ++b)
      rot.op2[a][b] = u_full.adjoint() * s.op2[a][b] * u_full;
  }
  const Eigen::MatrixXcd want = u_full.adjoint() * build_eff_h(s).h * u_full;
  CHECK((build_eff_h(rot).h - want).norm() < 1e-12);
}

TEST_CASE("symmetrization reports how non-hermitian the raw result was") {
  EffHSpec s;
  s.c1 = 1.0;
  // hermitian field and operator that do not commute: the raw contraction
  // is not hermitian, the defect records it, the output still is
  s.f[0] = pauli(0);
  s.f[1] = Mat2c::Zero();
  s.f[2] = Mat2c::Zero();
  s.op1[0] = pauli(2);
  s.op1[1] = Eigen::MatrixXcd::Zero(2, 2);
  s.op1[2] = Eigen::MatrixXcd::Zero(2, 2);
  const EffHResult r = build_eff_h(s);
  CHECK(r.hermiticity_defect > 1e-10);
  CHECK((r.h - r.h.adjoint().eval()).cwiseAbs().maxCoeff() == 0.0);

  // commuting inputs stay clean
  s.op1[0] = pauli(0);
  CHECK(build_eff_h(s).hermiticity_defect < 1e-14);
}

TEST_CASE("input validation") {
  EffHSpec s;
  s.spin_dim = 0;
  CHECK_THROWS_AS(build_eff_h(s), InputError);
  s.spin_dim = 1;
  s.c1 = 1.0;  // op1 left empty
  CHECK_THROWS_AS(build_eff_h(s), InputError);
  for (int a = 0; a < 3; ++a) s.op1[a] = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(build_eff_h(s), InputError);
  for (int a = 0; a < 3; ++a) s.op1[a] = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_NOTHROW(build_eff_h(s));
  s.c2 = 0.5;  // op2 still empty
  CHECK_THROWS_AS(build_eff_h(s), InputError);
}

}  // TEST_SUITE
