#pragma once

#include <array>

#include <Eigen/Dense>

#include "ciphase/types.hpp"

namespace ciphase {

// How the field matrices were obtained. Pointwise fields come straight
// from a field tensor at a nuclear configuration; expectation values are
// pre-integrated against a nuclear state by the caller. The contraction
// is identical either way; the flag travels with the result for reports.
enum class FieldInput { pointwise, expectation };

// Inputs for the truncated Hamiltonian on the electronic doublet,
// optionally extended by a spin-like set of dimension spin_dim. The
// operator matrices act on the (2 * spin_dim)-dimensional product space;
// with spin_dim = 1 this is the plain orbital form. c1 and c2 are
// empirical weights. Operator slots whose weight is zero may stay empty.
struct EffHSpec {
  std::array<Mat2c, 3> f{Mat2c::Zero(), Mat2c::Zero(), Mat2c::Zero()};
  Real c1 = 0.0;
  Real c2 = 0.0;
  int spin_dim = 1;
  std::array<Eigen::MatrixXcd, 3> op1{};
  std::array<std::array<Eigen::MatrixXcd, 3>, 3> op2{};
  FieldInput input = FieldInput::pointwise;
};

struct EffHResult {
  Eigen::MatrixXcd h;             // symmetrized, exactly hermitian
  Real hermiticity_defect = 0.0;  // max entry of |raw - raw^dag|
  FieldInput input = FieldInput::pointwise;
};

// H = c1 sum_a (F^a x I) op1^a + c2 sum_ab (F^a F^b x I) op2^ab, summed
// over nuclear axes with the fields acting on the orbital labels only.
// The raw contraction is symmetrized to (H + H^dag)/2; a defect above
// 1e-10 means the supplied fields and operators were not compatible and
// is reported through hermiticity_defect rather than an exception.
EffHResult build_eff_h(const EffHSpec& spec);

}  // namespace ciphase
