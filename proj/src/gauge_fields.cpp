#include "ciphase/gauge_fields.hpp"

#include <cmath>

namespace ciphase {

namespace {

Mat2c circulating_mix() {
  Mat2c u;
  u << 1, 1, 1, -1;
  return u / std::sqrt(2.0);
}

std::array<std::array<Vec3c, 2>, 2> zero_grad() {
  std::array<std::array<Vec3c, 2>, 2> z;
  for (auto& row : z)
    for (auto& v : row) v = Vec3c::Zero();
  return z;
}

void require_fields_frame(const BerryModel& m) {
  if (m.axis != ActiveAxis::z_carries_b)
    throw InputError("field tensors are implemented for the z-split frame only");
}

std::pair<Real, Real> plane_weights(const BerryModel& m) {
  // weights on the cyclic in-plane pair; see berry_angles
  if (m.axis == ActiveAxis::z_carries_b) return {m.alpha, m.beta};
  return {m.beta, m.alpha};
}

struct PointData {
  BerryAngles a;
  Real g1, g2;
};

PointData point_data(const BerryModel& m, const Vec3& r) {
  PointData d;
  d.a = berry_angles(m, r);
  if (d.a.q <= 0.0) throw InputError("point lies on the seam axis");
  if (d.a.Rb == 0.0) throw DegeneracyError("point sits on the degeneracy");
  auto [g1, g2] = plane_weights(m);
  d.g1 = g1;
  d.g2 = g2;
  return d;
}

}  // namespace

AngleGradients angle_gradients(const BerryModel& m, const Vec3& r) {
  const PointData d = point_data(m, r);
  const BerryAngles& a = d.a;
  const Real b = m.b, gg = d.g1 * d.g2;
  const Real rb2 = a.Rb * a.Rb;

  AngleGradients out;
  out.grad_phip = Vec3(0.0, gg * a.q / (a.qp * a.qp), 0.0);
  out.grad_theta =
      Vec3(b * a.h / rb2 * (a.qp / a.q),
           -(b * a.h * a.q / (2.0 * a.qp * rb2)) * (d.g1 * d.g1 - d.g2 * d.g2) *
               std::sin(2.0 * a.phi),
           -b * a.qp / rb2);
  // wedge with a pure phihat second factor: (a qhat + c phihat + e axis) ^
  // (g phihat) = a g axis - e g qhat
  const Real g = out.grad_phip[1];
  out.wedge = Vec3(-out.grad_theta[2] * g, 0.0, out.grad_theta[0] * g);
  return out;
}

NactField nact(const BerryModel& m, Representation rep, const Vec3& r) {
  const PointData d = point_data(m, r);
  const AngleGradients gr = angle_gradients(m, r);
  const Real ct = std::cos(d.a.theta), st = std::sin(d.a.theta);

  NactField out;
  out.rep = Representation::adiabatic;
  const Vec3c gphi = gr.grad_phip.cast<Complex>();
  const Vec3c gth = gr.grad_theta.cast<Complex>();
  out.tau[0][0].regular = -0.5 * iu * ct * gphi;
  out.tau[1][1].regular = 0.5 * iu * ct * gphi;
  out.tau[0][1].regular = 0.5 * iu * st * gphi - 0.5 * gth;
  out.tau[1][0].regular = 0.5 * iu * st * gphi + 0.5 * gth;

  if (rep == Representation::circulating)
    out = gauge_transform(out, circulating_mix(), zero_grad());
  return out;
}

GaugeTensor magnetic_field(const BerryModel& m, Representation rep, const Vec3& r) {
  require_fields_frame(m);
  const PointData d = point_data(m, r);
  const AngleGradients gr = angle_gradients(m, r);
  const BerryAngles& a = d.a;
  const Real ct = std::cos(a.theta), st = std::sin(a.theta);
  // delta(q) coefficient of curl grad phi' along the axis
  const Real seam_curl = d.g1 * d.g2 / (a.q * a.s * a.s);

  GaugeTensor out;
  out.kind = FieldKind::magnetic;
  out.rep = Representation::adiabatic;

  // H_uu = i curl tau_uu = (1/2) grad(cos theta) ^ grad phi' + seam
  const Vec3c wedge = gr.wedge.cast<Complex>();
  out.f[0][0].regular = -0.5 * st * wedge;
  out.f[0][0].seam = Vec3c(0, 0, Complex(0.5 * ct * seam_curl, 0));
  out.f[1][1].regular = -out.f[0][0].regular;
  out.f[1][1].seam = -out.f[0][0].seam;

  // the +-(1/2) grad theta legs of tau_ul, tau_lu are curl-free
  out.f[0][1].regular = -0.5 * ct * wedge;
  out.f[0][1].seam = Vec3c(0, 0, Complex(-0.5 * st * seam_curl, 0));
  out.f[1][0] = out.f[0][1];

  if (rep == Representation::circulating) out = conjugate(out, circulating_mix());
  return out;
}

GaugeTensor yang_mills_field(const BerryModel& m, Representation rep, const Vec3& r) {
  require_fields_frame(m);
  const NactField t = nact(m, Representation::adiabatic, r);
  GaugeTensor out = magnetic_field(m, Representation::adiabatic, r);
  out.kind = FieldKind::yang_mills;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Vec3c wedge = Vec3c::Zero();
      for (int k = 0; k < 2; ++k)
        wedge += cross3(t.tau[i][k].regular, t.tau[k][j].regular);
      out.f[i][j].regular += iu * wedge;
    }
  if (rep == Representation::circulating) out = conjugate(out, circulating_mix());
  return out;
}

NactField nact_numeric(const BerryModel& m, Representation rep, const Vec3& r, Real h) {
  const PointData d = point_data(m, r);
  if (!(h > 0.0)) throw StepError("step must be positive");
  if (d.a.q <= 2.0 * h) throw StepError("step too large this close to the seam axis");

  auto states_at = [&](const Vec3& p) {
    SpinorPair s = adiabatic_states(m, p);
    return (rep == Representation::circulating) ? to_circulating(s) : s;
  };
  const SpinorPair center = states_at(r);
  const std::array<const Vec2c*, 2> cs{&center.upper, &center.lower};

  std::array<std::array<Vec3c, 2>, 2> cart{};
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 dr = Vec3::Zero();
    dr[axis] = h;
    const SpinorPair fwd = states_at(r + dr), bwd = states_at(r - dr);
    const std::array<const Vec2c*, 2> fs{&fwd.upper, &fwd.lower};
    const std::array<const Vec2c*, 2> bs{&bwd.upper, &bwd.lower};
    for (int j = 0; j < 2; ++j) {
      if (cs[j]->dot(*fs[j]).real() < 0.9 || cs[j]->dot(*bs[j]).real() < 0.9)
        throw StepError("stencil spans the half-angle branch cut");
      const Vec2c dstate = (*fs[j] - *bs[j]) / (2.0 * h);
      for (int i = 0; i < 2; ++i) cart[i][j][axis] = cs[i]->dot(dstate);
    }
  }

  NactField out;
  out.rep = rep;
  const Vec3c qhat = frame_to_cartesian(m, Vec3c(1, 0, 0), d.a.phi);
  const Vec3c phat = frame_to_cartesian(m, Vec3c(0, 1, 0), d.a.phi);
  const Vec3c ahat = frame_to_cartesian(m, Vec3c(0, 0, 1), d.a.phi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.tau[i][j].regular = Vec3c(qhat.conjugate().dot(cart[i][j]),
                                    phat.conjugate().dot(cart[i][j]),
                                    ahat.conjugate().dot(cart[i][j]));
  return out;
}

NactField gauge_transform(const NactField& t, const Mat2c& u,
                          const std::array<std::array<Vec3c, 2>, 2>& grad_u) {
  NactField out;
  out.rep = t.rep;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      FieldVec v;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const Complex w = std::conj(u(i, a)) * u(j, b);
          v.regular += w * t.tau[i][j].regular;
          v.seam += w * t.tau[i][j].seam;
        }
      for (int i = 0; i < 2; ++i) v.regular += std::conj(u(i, a)) * grad_u[i][b];
      out.tau[a][b] = v;
    }
  return out;
}

GaugeTensor conjugate(const GaugeTensor& t, const Mat2c& u) {
  GaugeTensor out;
  out.kind = t.kind;
  out.rep = (t.rep == Representation::adiabatic) ? Representation::circulating
                                                 : Representation::adiabatic;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      FieldVec v;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const Complex w = std::conj(u(i, a)) * u(j, b);
          v.regular += w * t.f[i][j].regular;
          v.seam += w * t.f[i][j].seam;
        }
      out.f[a][b] = v;
    }
  return out;
}

namespace {

NactField nact_b0_all(const BerryModel& m, Representation rep, Real q, Real phi) {
  m.validate();
  require_fields_frame(m);
  if (!(q > 0.0)) throw InputError("the b -> 0 display needs q > 0");
  const Real s2 = m.alpha * m.alpha * std::cos(phi) * std::cos(phi) +
                  m.beta * m.beta * std::sin(phi) * std::sin(phi);
  const Real gg = m.alpha * m.beta;

  // smooth parts: sin(theta) -> 1, cos(theta) -> 0 off the axis
  const Vec3c gphi0(0, gg / (q * s2), 0);
  // delta(q) coefficients: cos(theta) -> pi delta(q) q turns grad theta into
  // pi qhat - (pi (g1^2-g2^2) sin 2 phi / (2 s^2)) phihat
  const Vec3c gth0(pi, -pi * (m.alpha * m.alpha - m.beta * m.beta) *
                           std::sin(2.0 * phi) / (2.0 * s2), 0);
  const Vec3c ct0(0, pi * gg / s2, 0);  // cos(theta) grad phi' -> this * delta

  NactField out;
  out.rep = Representation::adiabatic;
  out.tau[0][0].seam = -0.5 * iu * ct0;
  out.tau[1][1].seam = 0.5 * iu * ct0;
  out.tau[0][1].regular = 0.5 * iu * gphi0;
  out.tau[0][1].seam = -0.5 * gth0.cast<Complex>();
  out.tau[1][0].regular = 0.5 * iu * gphi0;
  out.tau[1][0].seam = 0.5 * gth0.cast<Complex>();

  if (rep == Representation::circulating)
    out = gauge_transform(out, circulating_mix(), zero_grad());
  return out;
}

}  // namespace

FieldVec nact_b0(const BerryModel& m, Representation rep, int i, int j,
                 Real q, Real phi) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw InputError("element index out of range");
  return nact_b0_all(m, rep, q, phi).tau[i][j];
}

Real seam_flux_density(const BerryModel& m, Representation rep, int i, int j,
                       FieldKind kind, Real h_axis, Real phi) {
  m.validate();
  require_fields_frame(m);
  if (i < 0 || i > 1 || j < 0 || j > 1) throw InputError("element index out of range");
  if (h_axis == 0.0) throw InputError("the seam density needs a side, h != 0");
  (void)kind;  // the seam parts of H and F coincide
  const Real s2 = m.alpha * m.alpha * std::cos(phi) * std::cos(phi) +
                  m.beta * m.beta * std::sin(phi) * std::sin(phi);
  const Real rho = 0.5 * m.alpha * m.beta * ((h_axis > 0) ? 1.0 : -1.0) / s2;
  Mat2c dens;
  dens << Complex(rho, 0), Complex(0, 0), Complex(0, 0), Complex(-rho, 0);
  if (rep == Representation::circulating) {
    const Mat2c u = circulating_mix();
    dens = (u.adjoint() * dens * u).eval();
  }
  return dens(i, j).real();
}

}  // namespace ciphase
