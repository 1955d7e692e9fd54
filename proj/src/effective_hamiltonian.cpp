#include "ciphase/effective_hamiltonian.hpp"

#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace ciphase {

EffHResult build_eff_h(const EffHSpec& spec) {
  if (spec.spin_dim < 1) throw InputError("spin dimension must be at least 1");
  const long dim = 2L * spec.spin_dim;

  auto check_op = [&](const Eigen::MatrixXcd& op, const char* what) {
    if (op.rows() != dim || op.cols() != dim)
      throw InputError(std::string(what) +
                       " must be square with dimension 2 * spin_dim");
  };

  const Eigen::MatrixXcd spin_id =
      Eigen::MatrixXcd::Identity(spec.spin_dim, spec.spin_dim);
  Eigen::MatrixXcd raw = Eigen::MatrixXcd::Zero(dim, dim);

  if (spec.c1 != 0.0) {
    for (int a = 0; a < 3; ++a) {
      check_op(spec.op1[a], "op1");
      raw += spec.c1 * (Eigen::kroneckerProduct(spec.f[a], spin_id) *
                        spec.op1[a]);
    }
  }
  if (spec.c2 != 0.0) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        check_op(spec.op2[a][b], "op2");
        const Mat2c ff = spec.f[a] * spec.f[b];
        raw += spec.c2 *
               (Eigen::kroneckerProduct(ff, spin_id) * spec.op2[a][b]);
      }
  }

  EffHResult out;
  out.hermiticity_defect =
      (raw - raw.adjoint().eval()).cwiseAbs().maxCoeff();
  out.h = 0.5 * (raw + raw.adjoint().eval());
  out.input = spec.input;
  return out;
}

}  // namespace ciphase
