#pragma once

#include <limits>
#include <vector>

#include "ciphase/gauge_fields.hpp"

namespace ciphase {

// circle of in-plane radius q at height h on the splitting axis
struct Ring {
  Real q = 1.0;
  Real h = 1.0;
};

// disc of radius q_max at height h, centered on the axis; q_max may be
// infinity, in which case the radial integral carries an analytic tail
struct Disc {
  Real q_max = std::numeric_limits<Real>::infinity();
  Real h = 1.0;
};

// Closed-loop integral of the connection element A_ij = i tau_ij along the
// counterclockwise ring. Diagonal circular rings give +-pi cos(theta_b),
// the off-diagonal ones -pi sin(theta_b); off the circular case the
// grad-theta leg still cancels around the closed loop.
Complex line_integral(const BerryModel& m, Representation rep, int i, int j,
                      const Ring& ring, Real tol = 1e-10);

// Flux of the (i, j) element of the chosen field through the disc: the
// azimuthal integral of the seam density rho plus the quadrature of the
// regular axis component. Infinite discs append the decaying tail via the
// substitution u = Q / q.
Real surface_flux(const BerryModel& m, Representation rep, int i, int j,
                  FieldKind kind, const Disc& disc, Real tol = 1e-9);

// geometric sequence with ratio 1/4 starting at 1e-1, five entries
std::vector<Real> default_b_sequence();

struct Extrapolated {
  Real value = 0.0;
  Real residual = 0.0;
  int order = 0;  // detected leading error order; 0 for flat sequences
};

// Richardson extrapolation of samples f(b_k) on a geometric b sequence,
// leading error O(b) or O(b^2) detected from successive differences.
// Differences below noise_floor * scale count as converged; a non-monotone
// pre-converged segment raises NoLimitError.
Extrapolated b_limit(const std::vector<Real>& bs, const std::vector<Real>& values,
                     Real noise_floor = 1e-8);

struct FluxEntry {
  FieldKind kind = FieldKind::magnetic;
  int i = 0, j = 0;
  std::vector<Real> bs;
  std::vector<Real> values;  // full-plane flux per b
  Real limit = 0.0;
  Real residual = 0.0;
  Real target = 0.0;
  bool pass = false;
};

struct FluxTable {
  Representation rep = Representation::adiabatic;
  Real alpha = 1.0, beta = 1.0;
  std::vector<FluxEntry> entries;  // 2 kinds x 4 elements
  bool all_pass = false;
};

// Extrapolated b -> 0 fluxes through the full plane at Z = 1 for every
// element of both field kinds, checked against the representation's known
// targets (in units of pi: adiabatic magnetic {0, -1, -1, 0} and
// Yang-Mills {+1, 0, 0, -1}; circulating magnetic {-1, 0, 0, +1} and
// Yang-Mills {0, +1, +1, 0}).
FluxTable table_report(Real alpha, Real beta, Representation rep,
                       std::vector<Real> bs = {}, Real tol = 1e-3);

// throws ConvergenceError naming each failing entry
void require_all_pass(const FluxTable& table);

}  // namespace ciphase
