#pragma once

#include <vector>

#include "ciphase/types.hpp"

namespace ciphase {

enum class StateKind { ground, excited };

// Two-level system under a rotating drive,
//   H(t) = (G/2) [[-cos wt, sin wt], [sin wt, cos wt]],
// solved exactly. K = sqrt(G^2 + w^2)/2 is the quasi-energy. The static
// drive w = 0 is allowed; f2 alone is undefined there (0/0) and throws.
class DoubletDynamics {
 public:
  DoubletDynamics(Real g, Real omega, const Vec2c& chi0);
  static DoubletDynamics make(Real g, Real omega, StateKind which);

  Real g() const { return g_; }
  Real omega() const { return omega_; }
  Real quasi_energy() const { return k_; }
  const Vec2c& chi0() const { return chi0_; }

  // branch amplitude ratios; both lie strictly inside the unit interval
  Real f1() const;
  Real f2() const;

  Mat2c hamiltonian(Real t) const;

 private:
  Real g_, omega_, k_;
  Vec2c chi0_;
};

// exact amplitudes at time t for the stored initial conditions
Vec2c closed_form_amplitudes(const DoubletDynamics& d, Real t);

// slow-drive reduction, accurate to O((w/G)^2); needs w > 0
Vec2c adiabatic_form_amplitudes(const DoubletDynamics& d, Real t);

// ground-state chi1 written directly in trigonometric form; used as an
// independent cross-check of closed_form_amplitudes
Complex ground_chi1_reference(Real g, Real omega, Real t);

struct AmplitudeTrace {
  std::vector<Real> t;
  std::vector<Vec2c> chi;
  std::vector<Real> norm;   // |chi1|^2 + |chi2|^2, drift <= 1e-9 per period
  std::vector<Real> phase;  // unwrapped arg of the dominant component
};

// Dormand-Prince 5(4) on chi' = -i H(t) chi. The controller targets error
// per unit time, so the end-state deviation from the exact solution stays
// within 10*tol regardless of how many steps the horizon needs.
AmplitudeTrace integrate_tdse(const DoubletDynamics& d, Real t_end,
                              Real tol = 1e-10);

// Evolves one drive period T = 2 pi / w, strips the dynamical factor
// e^{+-iKt} of the surviving exponential branch, and returns the residual
// phase accumulated by the state's dominant component, continuously
// unwrapped over [0, T]. Ground -> -pi, excited -> +pi, with O(w/G)
// corrections. Needs w > 0 and G/w >= 10; an initial state that feeds both
// branches comparably (within 10x) raises RegimeError.
Real geometric_phase_extract(const DoubletDynamics& d, StateKind which);

// Residual phase of the surviving branch of one amplitude component taken
// in isolation. Both components of a given state wind by the same +-pi;
// for the minor component this term-level reading is the only well-posed
// one, since the full amplitude starts at exactly zero.
Real branch_residual_phase(const DoubletDynamics& d, StateKind which,
                           int component);

struct Monopole3D {
  Real radius = 1.0;
  Real theta_cap = pi / 2;  // polar angle of the spherical cap boundary
};

// closed-form geometric phase for a contour at constant polar angle:
// -(1 - cos theta_cap) pi on the lower sheet, its opposite on the upper
Real berry3d_phase(const Monopole3D& m, Sheet state);

// same quantity by quadrature of the Hamiltonian-gradient expectation
// over the cap; agrees with berry3d_phase within tol
Real berry3d_surface_integral(const Monopole3D& m, Sheet state,
                              Real tol = 1e-8);

}  // namespace ciphase
