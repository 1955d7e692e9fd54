#pragma once

#include <vector>

#include "ciphase/models.hpp"

namespace ciphase {

enum class CiKind { origin, trigonal_a, trigonal_b, shifted_ring, planar_root };

struct CiPoint {
  Vec2 xy = Vec2::Zero();
  Real q0 = 0.0, phi0 = 0.0;
  CiKind kind = CiKind::planar_root;
  SignClass sign = SignClass::degenerate;
  Real residual = 0.0;  // coupling magnitude left after polishing
};

struct SearchRegion {
  Real xmin, xmax, ymin, ymax;
};

// Intersections of polynomial couplings inside the region: sign-change cells
// of an n x n scan seed a damped Newton iteration on (A, B) = (0, 0).
std::vector<CiPoint> locate_cartesian_cis(const CartesianCoupling& m,
                                          const SearchRegion& region,
                                          int grid = 64);

// Sign rule at a planar intersection: J = A_x B_y - B_x A_y there, plus
// phase for J > 0. |J| <= j_tol reports degenerate.
SignClass jacobian_sign(const CartesianCoupling& m, const Vec2& xy,
                        Real j_tol = 1e-10);

// Census of the polar-form coupling zeros with q >= 0. Quartic truncations
// are enumerated in closed form: the origin, the axis cubics
// 1 -+ mu q +- lambda q^3 = 0 on their trigonal angle sets, and for
// mu lambda < 0 the ring q0 = sqrt(-mu/lambda), cos(3 phi0) = 1/(2 mu q0)
// with both +-phi0 angle families. General series couplings are swept on a
// polar grid out to q_max and polished by a two-variable Newton iteration.
std::vector<CiPoint> locate_complex_cis(const ComplexCoupling& m,
                                        Real q_max = 50.0);

// Phase contribution sign of one census point. Trigonal quartic points use
// the slope ratio (3 mu q0 + 3 lambda q0^3) / (mu q0 - 3 lambda q0^3);
// the origin and ring points are always minus; series points use the local
// winding of the bracket. Planar points are not accepted here.
SignClass ci_sign(const ComplexCoupling& m, const CiPoint& p);

// Sum of the +-pi contributions of the census points enclosed by the circle.
// A point within clearance of the contour is a ContourError; an enclosed
// degenerate point is an InputError.
Real predicted_loop_phase(const std::vector<CiPoint>& cis, const Vec2& center,
                          Real radius, Real clearance = 1e-6);

// Real positive roots of c3 q^3 + c1 q + c0, ascending and Newton-polished.
// A double root collapses to a single entry.
std::vector<Real> positive_cubic_roots(Real c3, Real c1, Real c0);

}  // namespace ciphase
