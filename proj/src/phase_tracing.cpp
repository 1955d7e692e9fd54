#include "ciphase/phase_tracing.hpp"

#include <cmath>

namespace ciphase {

namespace {

constexpr int kMaxSamples = 1 << 21;

template <class Model>
PhaseTrace attempt_trace(const Model& m, const LoopSpec& loop, int n, bool& undersampled) {
  PhaseTrace tr;
  tr.alpha.resize(n + 1);
  tr.theta.resize(n + 1);
  undersampled = false;
  const Real orient = loop.ccw ? 1.0 : -1.0;
  Real prev = 0.0;
  for (int k = 0; k <= n; ++k) {
    const Real a = 2.0 * pi * k / n;
    const Vec2 p = loop.center + loop.radius * Vec2(std::cos(orient * a),
                                                    std::sin(orient * a));
    Real th;
    try {
      th = mixing_angle(m, p);
    } catch (const DegeneracyError& e) {
      throw ContourError(std::string("contour crosses a degenerate point: ") + e.what());
    }
    if (k == 0) {
      prev = th;
    } else {
      // lift mod pi onto the branch nearest the previous sample
      th -= pi * std::round((th - prev) / pi);
      if (std::abs(th - prev) > 0.45 * pi) {
        undersampled = true;
        return tr;
      }
      prev = th;
    }
    tr.alpha[k] = a;
    tr.theta[k] = th;
  }
  tr.total = tr.theta[n] - tr.theta[0];
  tr.winding = static_cast<int>(std::lround(tr.total / pi));
  if (std::abs(tr.total - tr.winding * pi) > 1e-6)
    throw ConvergenceError("traced angle failed to close on a pi multiple");
  return tr;
}

}  // namespace

template <class Model>
PhaseTrace trace_phase(const Model& m, const LoopSpec& loop) {
  if (!(loop.radius > 0.0)) throw InputError("loop radius must be positive");
  if (loop.samples < 16) throw InputError("need at least 16 samples");
  // a trace counts as converged only when doubling the sampling keeps the
  // winding fixed; a swing hiding entirely between two samples aliases the
  // step guard, but not both sample sets at once
  bool have_prev = false;
  PhaseTrace prev;
  for (int n = loop.samples; n <= kMaxSamples; n *= 2) {
    bool under = false;
    PhaseTrace tr = attempt_trace(m, loop, n, under);
    if (under) {
      have_prev = false;
      continue;
    }
    if (have_prev && tr.winding == prev.winding) return tr;
    prev = std::move(tr);
    have_prev = true;
  }
  throw UndersampledError("winding failed to stabilize at the sampling cap");
}

template PhaseTrace trace_phase(const CartesianCoupling&, const LoopSpec&);
template PhaseTrace trace_phase(const ComplexCoupling&, const LoopSpec&);

template <class Model>
SignClass local_sign(const Model& m, const Vec2& ci_xy, Real delta) {
  LoopSpec loop;
  loop.center = ci_xy;
  loop.radius = delta;
  loop.samples = 256;
  const PhaseTrace tr = trace_phase(m, loop);
  if (tr.winding == 1) return SignClass::plus;
  if (tr.winding == -1) return SignClass::minus;
  return SignClass::degenerate;
}

template SignClass local_sign(const CartesianCoupling&, const Vec2&, Real);
template SignClass local_sign(const ComplexCoupling&, const Vec2&, Real);

Vec3 ring_point(const BerryModel& m, const RingLoop& loop, Real t) {
  const Real c1 = loop.q * std::cos(t), c2 = loop.q * std::sin(t);
  if (m.axis == ActiveAxis::z_carries_b) return Vec3(c1, c2, loop.h);
  return Vec3(c2, loop.h, c1);  // in-plane pair around y is (z, x)
}

namespace {

// States along the ring in the smooth gauge: the weighted azimuth is
// continued across samples so the half-angle phases never jump branches.
std::vector<SpinorPair> ring_states(const BerryModel& m, const RingLoop& loop) {
  m.validate();
  if (!(loop.q > 0.0)) throw InputError("ring radius must be positive");
  if (loop.samples < 16) throw InputError("need at least 16 samples");
  const int n = loop.samples;
  const Real orient = loop.ccw ? 1.0 : -1.0;
  std::vector<SpinorPair> states;
  states.reserve(n + 1);
  Real phip = 0.0;
  for (int k = 0; k <= n; ++k) {
    const Real t = orient * 2.0 * pi * k / n;
    const BerryAngles a = berry_angles(m, ring_point(m, loop, t));
    if (a.Rb == 0.0) throw ContourError("ring crosses the degeneracy point");
    phip = (k == 0) ? a.phip : phip + std::remainder(a.phip - phip, 2.0 * pi);
    states.push_back(states_from_angles(a.theta, phip));
  }
  return states;
}

}  // namespace

Real overlap_phase(const BerryModel& m, const RingLoop& loop, Sheet sheet) {
  const auto states = ring_states(m, loop);
  Real acc = 0.0;
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const Vec2c& a = (sheet == Sheet::upper) ? states[k].upper : states[k].lower;
    const Vec2c& b = (sheet == Sheet::upper) ? states[k + 1].upper : states[k + 1].lower;
    const Complex ov = a.dot(b);
    if (std::abs(ov) < 0.6)
      throw UndersampledError("adjacent ring states nearly orthogonal");
    acc += std::log(ov).imag();
  }
  return -acc;
}

Complex overlap_offdiag_integral(const BerryModel& m, const RingLoop& loop) {
  const auto states = ring_states(m, loop);
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const Complex forward = states[k].upper.dot(states[k + 1].lower);
    const Complex backward = states[k + 1].upper.dot(states[k].lower);
    acc += 0.5 * iu * (forward - backward);
  }
  return acc;
}

}  // namespace ciphase
