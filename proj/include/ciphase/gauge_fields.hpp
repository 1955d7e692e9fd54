#pragma once

#include <array>

#include "ciphase/models.hpp"

namespace ciphase {

// One field entry, components in the model's cylindrical frame
// (qhat, phihat, axis). regular is the smooth part. seam is the coefficient
// S of delta(q) under the half-line normalization int_0^inf delta(q) dq = 1;
// for the curvature tensors only the axis slot is populated, while the
// b -> 0 NACT displays also carry in-plane delta coefficients.
struct FieldVec {
  Vec3c regular = Vec3c::Zero();
  Vec3c seam = Vec3c::Zero();
};

// Index 0 is the upper sheet (adiabatic) or the |+> combination
// (circulating); index 1 is the lower sheet or |->.
struct NactField {
  std::array<std::array<FieldVec, 2>, 2> tau;
  Representation rep = Representation::adiabatic;
};

struct GaugeTensor {
  std::array<std::array<FieldVec, 2>, 2> f;
  FieldKind kind = FieldKind::magnetic;
  Representation rep = Representation::adiabatic;
};

// Smooth parts of the angle gradients at a point off the seam axis (q > 0):
//   grad phi' = (g1 g2 q / qp^2) phihat
//   grad theta = (b h / Rb^2)(qp / q) qhat
//              - (b h q / (2 qp Rb^2))(g1^2 - g2^2) sin(2 phi) phihat
//              - (b qp / Rb^2) axis
// wedge = grad theta ^ grad phi'. The distributional part of curl grad phi'
// is handled by the field constructors, not here.
struct AngleGradients {
  Vec3 grad_phip = Vec3::Zero();
  Vec3 grad_theta = Vec3::Zero();
  Vec3 wedge = Vec3::Zero();
};

AngleGradients angle_gradients(const BerryModel& m, const Vec3& r);

// Derivative couplings tau_ij = <i | grad j> of the instantaneous states.
// Adiabatic closed forms:
//   tau_uu = -(i/2) cos(theta) grad phi',  tau_ll = -tau_uu
//   tau_ul = (i/2) sin(theta) grad phi' - (1/2) grad theta
//   tau_lu = (i/2) sin(theta) grad phi' + (1/2) grad theta
// The circulating representation is the constant conjugation of these.
// Supports both splitting axes. Requires q > 0.
NactField nact(const BerryModel& m, Representation rep, const Vec3& r);

// Curvature i (grad ^ tau)_ij, smooth part plus the delta(q) seam carried
// by curl grad phi'. z_carries_b only.
GaugeTensor magnetic_field(const BerryModel& m, Representation rep, const Vec3& r);

// Field strength F_ij = H_ij + i (tau ^ tau)_ij with
// (tau ^ tau)_ij = sum_k tau_ik ^ tau_kj. The adiabatic smooth part cancels
// identically; the circulating one moves the seam off the diagonal.
GaugeTensor yang_mills_field(const BerryModel& m, Representation rep, const Vec3& r);

// Central-difference tau from the actual eigenstates, projected onto the
// model's frame. Smooth parts only. Throws StepError when the stencil
// spans the half-angle branch cut or q <= 2h.
NactField nact_numeric(const BerryModel& m, Representation rep, const Vec3& r,
                       Real h = 1e-5);

// General gauge transport tau' = U^dag tau U + U^dag dU. grad_u[i][j] holds
// the frame components of grad U_ij. Seam parts transport through the
// linear term only.
NactField gauge_transform(const NactField& t, const Mat2c& u,
                          const std::array<std::array<Vec3c, 2>, 2>& grad_u);

// Covariant conjugation F' = U^dag F U for a constant U.
GaugeTensor conjugate(const GaugeTensor& t, const Mat2c& u);

// Formal b -> 0 limit of tau_ij at (q, phi): sin(theta) -> 1 off the axis
// and cos(theta) -> pi delta(q) q. The returned seam slots are the delta(q)
// coefficients, e.g. tau_ul -> (i/2) grad phi' smooth part plus
// -(pi/2) delta(q) qhat for the circular model.
FieldVec nact_b0(const BerryModel& m, Representation rep, int i, int j,
                 Real q, Real phi);

// Density rho(phi) = lim_{q->0} q S_axis(q, phi) of the seam coefficient;
// a disc flux picks up int rho dphi from the seam. h_axis fixes the side
// of the seam (its sign enters through sgn(h)).
Real seam_flux_density(const BerryModel& m, Representation rep, int i, int j,
                       FieldKind kind, Real h_axis, Real phi);

}  // namespace ciphase
