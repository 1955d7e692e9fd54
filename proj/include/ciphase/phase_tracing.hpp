#pragma once

#include "ciphase/models.hpp"

namespace ciphase {

struct LoopSpec {
  Vec2 center = Vec2::Zero();
  Real radius = 1.0;
  int samples = 2048;  // initial sampling; tracing refines on demand
  bool ccw = true;
};

struct PhaseTrace {
  Eigen::VectorXd alpha;  // loop parameter in [0, 2 pi]
  Eigen::VectorXd theta;  // continued mixing angle, theta(0) principal
  Real total = 0.0;       // theta(2 pi) - theta(0)
  int winding = 0;        // total / pi, snapped
};

// Follow the mixing angle around the circle, lifting the pi-periodic
// principal value by nearest-continuation. Sampling doubles (up to 2^21
// points) whenever one step moves past 0.45 pi, since continuation can
// only disambiguate steps below pi/2. A degenerate point on the contour
// raises ContourError.
template <class Model>
PhaseTrace trace_phase(const Model& m, const LoopSpec& loop);

// Sign of one intersection from the traced angle around a circle of radius
// delta: +pi winding is plus, -pi is minus, anything else degenerate.
template <class Model>
SignClass local_sign(const Model& m, const Vec2& ci_xy, Real delta = 1e-3);

// Circle of in-plane radius q at height h along the model's splitting axis.
struct RingLoop {
  Real q = 1.0;
  Real h = 0.0;
  int samples = 4096;
  bool ccw = true;
};

Vec3 ring_point(const BerryModel& m, const RingLoop& loop, Real t);

// Discrete diagonal geometric phase -sum Im log <psi_k|psi_{k+1}> of one
// adiabatic sheet, states kept in the smooth half-angle gauge (the in-plane
// azimuth is continued, never snapped to principal value). Second-order in
// 1/samples. The upper sheet around a circular ring gives pi cos(theta_b).
Real overlap_phase(const BerryModel& m, const RingLoop& loop, Sheet sheet);

// Discrete circuit of i <upper| d |lower>, the off-diagonal counterpart:
// sum (i/2) [<u_k|l_{k+1}> - <u_{k+1}|l_k>]. Circular rings give
// -pi sin(theta_b).
Complex overlap_offdiag_integral(const BerryModel& m, const RingLoop& loop);

}  // namespace ciphase
