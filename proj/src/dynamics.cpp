#include "ciphase/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ciphase {

namespace {

struct Products {
  Real ap, am, bp, bm;  // K +- G/2 +- w/2 in all four combinations
};

Products products(const DoubletDynamics& d) {
  const Real k = d.quasi_energy(), hg = 0.5 * d.g(), hw = 0.5 * d.omega();
  return {k + hg + hw, k + hg - hw, k - hg + hw, k - hg - hw};
}

}  // namespace

DoubletDynamics::DoubletDynamics(Real g, Real omega, const Vec2c& chi0)
    : g_(g), omega_(omega), k_(0.5 * std::hypot(g, omega)), chi0_(chi0) {
  if (!(g > 0.0)) throw InputError("coupling G must be positive");
  if (!(omega >= 0.0)) throw InputError("drive frequency must be non-negative");
  if (std::abs(chi0.squaredNorm() - 1.0) > 1e-9)
    throw InputError("initial amplitudes must be normalized");
}

DoubletDynamics DoubletDynamics::make(Real g, Real omega, StateKind which) {
  return DoubletDynamics(
      g, omega, which == StateKind::ground ? Vec2c(1.0, 0.0) : Vec2c(0.0, 1.0));
}

Real DoubletDynamics::f1() const {
  const Products p = products(*this);
  return p.am / p.ap;
}

Real DoubletDynamics::f2() const {
  const Products p = products(*this);
  if (p.bp == 0.0) throw InputError("f2 is undefined in the static limit");
  return p.bm / p.bp;
}

Mat2c DoubletDynamics::hamiltonian(Real t) const {
  const Real c = std::cos(omega_ * t), s = std::sin(omega_ * t);
  Mat2c h;
  h << -c, s, s, c;
  return 0.5 * g_ * h;
}

Vec2c closed_form_amplitudes(const DoubletDynamics& d, Real t) {
  const Products p = products(d);
  const Real k = d.quasi_energy(), w = d.omega();
  const Complex x1 = d.chi0()[0], x2 = d.chi0()[1];
  const Complex ep = std::exp(iu * ((k - 0.5 * w) * t));
  const Complex em = std::conj(ep);
  const Complex wp = std::exp(iu * (w * t));
  const Complex wm = std::conj(wp);

  Vec2c out;
  out[0] = (ep * (x1 * (p.ap + p.am * wp) + iu * x2 * (p.bp - p.bm * wp)) +
            em * (x1 * (p.bp + p.bm * wm) - iu * x2 * (p.ap - p.am * wm))) /
           (4.0 * k);
  out[1] = -iu *
           (ep * (x1 * (p.ap - p.am * wp) + iu * x2 * (p.bp + p.bm * wp)) -
            em * (x1 * (p.bp - p.bm * wm) - iu * x2 * (p.ap + p.am * wm))) /
           (4.0 * k);
  return out;
}

Vec2c adiabatic_form_amplitudes(const DoubletDynamics& d, Real t) {
  if (!(d.omega() > 0.0))
    throw InputError("the adiabatic reduction needs a rotating drive");
  const Real g = d.g(), w = d.omega();
  const Real big = 1.0 + 0.5 * w / g, small = 0.5 * w / g;
  const Real f1 = d.f1(), f2 = d.f2();
  const Complex x1 = d.chi0()[0], x2 = d.chi0()[1];
  const Complex ep = std::exp(iu * (0.5 * (g - w) * t));
  const Complex em = std::conj(ep);
  const Complex wp = std::exp(iu * (w * t));
  const Complex wm = std::conj(wp);

  Vec2c out;
  out[0] = 0.5 * (ep * (x1 * big * (1.0 + f1 * wp) + iu * x2 * small * (1.0 - f2 * wp)) +
                  em * (x1 * small * (1.0 + f2 * wm) - iu * x2 * big * (1.0 - f1 * wm)));
  out[1] = -0.5 * iu *
           (ep * (x1 * big * (1.0 - f1 * wp) + iu * x2 * small * (1.0 + f2 * wp)) -
            em * (x1 * small * (1.0 - f2 * wm) - iu * x2 * big * (1.0 + f1 * wm)));
  return out;
}

Complex ground_chi1_reference(Real g, Real omega, Real t) {
  const Real k = 0.5 * std::hypot(g, omega);
  return Complex(std::cos(k * t) * std::cos(0.5 * omega * t) +
                     (0.5 * omega / k) * std::sin(k * t) * std::sin(0.5 * omega * t),
                 (0.5 * g / k) * std::sin(k * t) * std::cos(0.5 * omega * t));
}

AmplitudeTrace integrate_tdse(const DoubletDynamics& d, Real t_end, Real tol) {
  if (!(tol >= 1e-13)) throw InputError("tolerance below 1e-13 is not supported");
  if (!(t_end > 0.0)) throw InputError("integration horizon must be positive");

  auto rhs = [&](Real t, const Vec2c& y) -> Vec2c {
    return -iu * (d.hamiltonian(t) * y);
  };

  // Dormand-Prince 5(4), FSAL
  static const Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const Real a21 = 1.0 / 5;
  static const Real a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                    a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                    a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                    b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const Real e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                    e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  AmplitudeTrace trace;
  Vec2c y = d.chi0();
  Real t = 0.0;
  const int lead = std::abs(y[0]) >= std::abs(y[1]) ? 0 : 1;
  Real phase = std::arg(y[lead]);
  trace.t.push_back(t);
  trace.chi.push_back(y);
  trace.norm.push_back(y.squaredNorm());
  trace.phase.push_back(phase);

  const Real scale_rate = std::max(2.0 * d.quasi_energy(), Real(1));
  Real h = std::min(t_end, 0.1 / scale_rate);
  Vec2c k1 = rhs(t, y);
  long steps = 0;
  while (t_end - t > 1e-15 * t_end) {
    if (++steps > 20'000'000) throw StepError("step budget exhausted");
    if (h < 1e-14 * t_end) throw StepError("step size underflow; drive too stiff");
    h = std::min(h, t_end - t);

    const Vec2c k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Vec2c k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec2c k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec2c k5 =
        rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec2c k6 =
        rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec2c y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec2c k7 = rhs(t + h, y5);
    const Vec2c ev =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // error per unit time keeps the accumulated end-state error near tol
    const Real target = tol * (h / t_end);
    Real err = 0.0;
    for (int i = 0; i < 2; ++i)
      err = std::max(err, std::abs(ev[i]) /
                              (target * (1.0 + std::max(std::abs(y[i]),
                                                        std::abs(y5[i])))));

    if (err <= 1.0) {
      t += h;
      phase += std::arg(y5[lead] / y[lead]);
      y = y5;
      k1 = k7;
      trace.t.push_back(t);
      trace.chi.push_back(y);
      trace.norm.push_back(y.squaredNorm());
      trace.phase.push_back(phase);
    }
    const Real factor =
        err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.25), 0.2, 5.0) : 5.0;
    h *= factor;
  }
  return trace;
}

namespace {

// branch selection shared by the two phase readers; returns +1 when the
// e^{+i(K-w/2)t} branch survives, -1 for its conjugate
Real surviving_branch(const DoubletDynamics& d, StateKind which) {
  if (!(d.omega() > 0.0)) throw InputError("phase extraction needs a rotating drive");
  if (d.g() / d.omega() < 10.0)
    throw InputError("phase extraction needs G/omega >= 10");
  const Products p = products(d);
  const Complex x1 = d.chi0()[0], x2 = d.chi0()[1];
  const Real w_plus = std::abs(x1 * p.ap + iu * x2 * p.bp);
  const Real w_minus = std::abs(x1 * p.bp - iu * x2 * p.ap);
  const Real w_kept = which == StateKind::ground ? w_plus : w_minus;
  const Real w_lost = which == StateKind::ground ? w_minus : w_plus;
  if (w_kept < 10.0 * w_lost)
    throw RegimeError("surviving branch is ambiguous for this initial state");
  return which == StateKind::ground ? 1.0 : -1.0;
}

// total continuously unwrapped phase of f over [0, T], refining the grid
// until consecutive samples stay well inside a half turn
Real unwrap_total(const std::function<Complex(Real)>& f, Real period) {
  int n = 1024;
  while (true) {
    std::vector<Complex> r(n + 1);
    for (int s = 0; s <= n; ++s) r[s] = f(period * s / n);

    Real total = 0.0;
    bool resolved = true;
    for (int s = 1; s <= n && resolved; ++s) {
      if (r[s - 1] == Complex(0.0, 0.0)) {
        resolved = false;
        break;
      }
      const Real step = std::arg(r[s] / r[s - 1]);
      if (std::abs(step) > 0.45 * pi) resolved = false;
      total += step;
    }
    if (resolved) return total;
    n *= 2;
    if (n > (1 << 20))
      throw UndersampledError("residual phase varies too fast to unwrap");
  }
}

}  // namespace

Real geometric_phase_extract(const DoubletDynamics& d, StateKind which) {
  const Real sign = surviving_branch(d, which);
  const int comp = which == StateKind::ground ? 0 : 1;
  const Real period = 2.0 * pi / d.omega();
  const Real k = d.quasi_energy();
  return unwrap_total(
      [&](Real t) {
        return closed_form_amplitudes(d, t)[comp] * std::exp(-iu * (sign * k * t));
      },
      period);
}

Real branch_residual_phase(const DoubletDynamics& d, StateKind which,
                           int component) {
  if (component < 0 || component > 1) throw InputError("component must be 0 or 1");
  const Real sign = surviving_branch(d, which);
  const Products p = products(d);
  const Real w = d.omega();
  const Complex x1 = d.chi0()[0], x2 = d.chi0()[1];

  // coefficient bracket of the surviving exponential branch; the residual
  // after stripping e^{+-iKt} is e^{-+iwt/2} times this bracket
  auto bracket = [&](Real t) -> Complex {
    const Complex wp = std::exp(iu * (w * t)), wm = std::conj(wp);
    if (sign > 0.0) {
      if (component == 0)
        return x1 * (p.ap + p.am * wp) + iu * x2 * (p.bp - p.bm * wp);
      return -iu * (x1 * (p.ap - p.am * wp) + iu * x2 * (p.bp + p.bm * wp));
    }
    if (component == 0)
      return x1 * (p.bp + p.bm * wm) - iu * x2 * (p.ap - p.am * wm);
    return iu * (x1 * (p.bp - p.bm * wm) - iu * x2 * (p.ap + p.am * wm));
  };

  const Real period = 2.0 * pi / w;
  return unwrap_total(
      [&](Real t) { return bracket(t) * std::exp(-iu * (sign * 0.5 * w * t)); },
      period);
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n
void gauss_legendre(int n, std::vector<Real>& x, std::vector<Real>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real z = std::cos(pi * (i + 0.75) / (n + 0.5));
    Real pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const Real dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

Vec2c monopole_state(Sheet state, Real theta, Real phi) {
  const Complex lo = std::exp(-iu * (0.5 * phi)), hi = std::conj(lo);
  if (state == Sheet::lower)
    return Vec2c(-std::sin(0.5 * theta) * lo, std::cos(0.5 * theta) * hi);
  return Vec2c(std::cos(0.5 * theta) * lo, std::sin(0.5 * theta) * hi);
}

Real cap_quadrature(Real theta_cap, Sheet state, int n_ct) {
  Mat2c sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -iu, iu, 0;
  sz << 1, 0, 0, -1;

  std::vector<Real> x, w;
  gauss_legendre(n_ct, x, w);
  const Real lo = std::cos(theta_cap), hi = 1.0;
  const int n_phi = 16;

  Real total = 0.0;
  for (int i = 0; i < n_ct; ++i) {
    const Real ct = 0.5 * (hi - lo) * x[i] + 0.5 * (hi + lo);
    const Real theta = std::acos(std::clamp(ct, Real(-1), Real(1)));
    const Real st = std::sin(theta);
    Real ring = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const Real phi = 2.0 * pi * j / n_phi;
      const Vec2c psi = monopole_state(state, theta, phi);
      // dS = rhat R^2 d(cos theta) d phi and the 1/R^2 of the integrand
      // cancel; what is left is <psi| (sigma . rhat) / 2 |psi>
      const Mat2c m = 0.5 * (st * std::cos(phi) * sx + st * std::sin(phi) * sy +
                             ct * sz);
      ring += (psi.adjoint() * m * psi)(0).real();
    }
    total += w[i] * (2.0 * pi / n_phi) * ring;
  }
  return 0.5 * (hi - lo) * total;
}

void check_cap(const Monopole3D& m) {
  if (!(m.radius > 0.0)) throw InputError("monopole radius must be positive");
  if (!(m.theta_cap >= 0.0 && m.theta_cap <= pi))
    throw InputError("cap angle must lie in [0, pi]");
}

}  // namespace

Real berry3d_phase(const Monopole3D& m, Sheet state) {
  check_cap(m);
  const Real v = -(1.0 - std::cos(m.theta_cap)) * pi;
  return state == Sheet::lower ? v : -v;
}

Real berry3d_surface_integral(const Monopole3D& m, Sheet state, Real tol) {
  check_cap(m);
  Real prev = cap_quadrature(m.theta_cap, state, 8);
  for (int n : {16, 32}) {
    const Real cur = cap_quadrature(m.theta_cap, state, n);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  throw ConvergenceError("cap quadrature did not settle");
}

}  // namespace ciphase
