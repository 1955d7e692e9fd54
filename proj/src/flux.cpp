#include "ciphase/flux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ciphase/phase_tracing.hpp"

namespace ciphase {

namespace {

void check_element(int i, int j) {
  if (i < 0 || i > 1 || j < 0 || j > 1)
    throw InputError("matrix element index out of range");
}

// trapezoid over one period with doubling; exact symmetry makes this
// spectrally accurate for the smooth integrands used here
template <class F>
auto periodic_integral(F&& f, Real tol) {
  using T = decltype(f(Real(0)));
  auto sum_at = [&](int n) {
    T s = T(0);
    for (int k = 0; k < n; ++k) s += f(2.0 * pi * k / n);
    return T(s * (2.0 * pi / n));
  };
  T prev = sum_at(16);
  for (int n = 32; n <= (1 << 14); n *= 2) {
    const T cur = sum_at(n);
    if (std::abs(cur - prev) <= tol * std::max(Real(1), std::abs(cur))) return cur;
    prev = cur;
  }
  throw ConvergenceError("azimuthal quadrature did not converge");
}

Real simpson_rec(const std::function<Real(Real)>& f, Real a, Real b, Real fa,
                 Real fm, Real fb, Real whole, Real tol, Real wfloor, int depth) {
  const Real m = 0.5 * (a + b);
  const Real flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  const Real left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Real right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Real delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || b - a <= wfloor)
    return left + right + delta / 15.0;
  if (depth <= 0) throw ConvergenceError("radial quadrature did not converge");
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, wfloor, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, wfloor, depth - 1);
}

Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b, Real tol) {
  if (!(b > a)) return 0.0;
  const Real fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  const Real whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 1e-13 * (b - a), 48);
}

}  // namespace

Complex line_integral(const BerryModel& m, Representation rep, int i, int j,
                      const Ring& ring, Real tol) {
  m.validate();
  check_element(i, j);
  if (!(ring.q > 0.0)) throw InputError("ring radius must be positive");
  const RingLoop loop{ring.q, ring.h, 4, true};
  auto f = [&](Real phi) -> Complex {
    const NactField t = nact(m, rep, ring_point(m, loop, phi));
    // dl = q dphi phihat, A = i tau
    return iu * t.tau[i][j].regular[1] * ring.q;
  };
  return periodic_integral(f, tol);
}

Real surface_flux(const BerryModel& m, Representation rep, int i, int j,
                  FieldKind kind, const Disc& disc, Real tol) {
  m.validate();
  check_element(i, j);
  if (m.axis != ActiveAxis::z_carries_b)
    throw InputError("fluxes are implemented for the z-split frame only");
  if (!(disc.q_max > 0.0)) throw InputError("disc radius must be positive");
  if (disc.h == 0.0) throw InputError("disc passes through the degeneracy point");

  // the disc always pierces the seam at its center
  const Real seam = periodic_integral(
      [&](Real phi) { return seam_flux_density(m, rep, i, j, kind, disc.h, phi); },
      1e-12);

  Real imag_peak = 0.0;
  auto axis_component = [&](Real q, Real phi) {
    const Vec3 r(q * std::cos(phi), q * std::sin(phi), disc.h);
    const GaugeTensor t = (kind == FieldKind::magnetic)
                              ? magnetic_field(m, rep, r)
                              : yang_mills_field(m, rep, r);
    const Complex v = t.f[i][j].regular[2];
    imag_peak = std::max(imag_peak, std::abs(v.imag()));
    return v.real();
  };

  const Real a = m.b * std::abs(disc.h);
  const Real q_cap = 1e3 * std::max(a, Real(1e-12));
  const Real q_near = std::min(disc.q_max, q_cap);
  const bool has_tail = disc.q_max > q_cap;

  // radial quadrature noise must sit far below the azimuthal doubling
  // threshold or the doubling never settles
  const Real rtol = 1e-3 * tol;
  auto radial = [&](Real phi) {
    // q * S has a finite q -> 0 limit; step just inside for the endpoint
    auto f = [&](Real q) {
      if (q <= 0.0) q = std::max(1e-14 * a, Real(1e-280));
      return axis_component(q, phi) * q;
    };
    Real knots[] = {0.0, a, 10.0 * a, 100.0 * a, q_near};
    Real total = 0.0, lo = 0.0;
    for (Real k : knots) {
      const Real hi = std::clamp(k, lo, q_near);
      total += adaptive_simpson(f, lo, hi, rtol);
      lo = hi;
    }
    total += adaptive_simpson(f, lo, q_near, rtol);
    if (has_tail) {
      // u = Q / q maps [Q, inf) to (0, 1]; integrand ~ const near u = 0
      auto g = [&](Real u) {
        const Real q = q_cap / u;
        return axis_component(q, phi) * q * q_cap / (u * u);
      };
      const Real eps = 1e-8;
      total += adaptive_simpson(g, eps, 1.0, rtol) + g(eps) * eps;
    }
    return total;
  };

  const Real regular = periodic_integral(radial, tol);
  if (imag_peak > 1e-8)
    throw ConvergenceError("flux density has an unexpected imaginary part");
  return seam + regular;
}

std::vector<Real> default_b_sequence() {
  return {1e-1, 2.5e-2, 6.25e-3, 1.5625e-3, 3.90625e-4};
}

Extrapolated b_limit(const std::vector<Real>& bs, const std::vector<Real>& values,
                     Real noise_floor) {
  const std::size_t n = bs.size();
  if (n < 4 || values.size() != n)
    throw InputError("limit extrapolation needs at least 4 matching samples");
  const Real rho_b = bs[1] / bs[0];
  if (!(rho_b > 0.0 && rho_b < 1.0))
    throw InputError("b sequence must decrease geometrically");
  for (std::size_t k = 1; k + 1 < n; ++k)
    if (std::abs(bs[k + 1] / bs[k] - rho_b) > 1e-9 * rho_b)
      throw InputError("b sequence must decrease geometrically");

  Real scale = 0.0;
  for (Real v : values) scale = std::max(scale, std::abs(v));
  const Real floor = noise_floor * std::max(scale, Real(1));

  std::vector<Real> d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) d[k] = values[k + 1] - values[k];

  // trailing differences at the noise floor mean the sequence is converged
  std::size_t live = n - 1;
  while (live > 0 && std::abs(d[live - 1]) <= floor) --live;
  Extrapolated out;
  if (live == 0) {
    out.value = values.back();
    for (Real dk : d) out.residual = std::max(out.residual, std::abs(dk));
    return out;
  }
  if (live < 2) {
    // a single live difference cannot support an order estimate
    out.value = values.back();
    out.residual = std::abs(d[live - 1]);
    out.order = 0;
    return out;
  }
  for (std::size_t k = 0; k + 1 < live; ++k) {
    if (std::abs(d[k + 1]) >= std::abs(d[k]))
      throw NoLimitError("successive differences do not shrink; no limit detected");
    if (d[k + 1] * d[k] < 0.0)
      throw NoLimitError("successive differences alternate; no limit detected");
  }

  // d_{k+1}/d_k ~ rho_b^p for an O(b^p) leading error
  Real acc = 0.0;
  for (std::size_t k = 0; k + 1 < live; ++k)
    acc += std::log(std::abs(d[k + 1] / d[k])) / std::log(rho_b);
  const int p = std::abs(acc / Real(live - 1) - 1.0) <
                        std::abs(acc / Real(live - 1) - 2.0)
                    ? 1
                    : 2;
  const Real rho = std::pow(rho_b, p);

  std::vector<Real> ex(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    ex[k] = (values[k + 1] - rho * values[k]) / (1.0 - rho);
  out.value = ex.back();
  out.residual = std::abs(ex[ex.size() - 1] - ex[ex.size() - 2]);
  out.order = p;
  return out;
}

FluxTable table_report(Real alpha, Real beta, Representation rep,
                       std::vector<Real> bs, Real tol) {
  if (bs.empty()) bs = default_b_sequence();
  FluxTable table;
  table.rep = rep;
  table.alpha = alpha;
  table.beta = beta;

  const bool ad = rep == Representation::adiabatic;
  const Real mag_t[2][2] = {{ad ? 0.0 : -pi, ad ? -pi : 0.0},
                            {ad ? -pi : 0.0, ad ? 0.0 : pi}};
  const Real ym_t[2][2] = {{ad ? pi : 0.0, ad ? 0.0 : pi},
                           {ad ? 0.0 : pi, ad ? -pi : 0.0}};

  const Disc plane{std::numeric_limits<Real>::infinity(), 1.0};
  table.all_pass = true;
  for (FieldKind kind : {FieldKind::magnetic, FieldKind::yang_mills})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        FluxEntry e;
        e.kind = kind;
        e.i = i;
        e.j = j;
        e.bs = bs;
        for (Real b : bs) {
          const BerryModel m{b, alpha, beta, ActiveAxis::z_carries_b};
          e.values.push_back(surface_flux(m, rep, i, j, kind, plane, 1e-8));
        }
        const Extrapolated lim = b_limit(bs, e.values, 1e-6);
        e.limit = lim.value;
        e.residual = lim.residual;
        e.target = (kind == FieldKind::magnetic) ? mag_t[i][j] : ym_t[i][j];
        e.pass = std::abs(e.limit - e.target) <= tol && e.residual <= tol;
        table.all_pass = table.all_pass && e.pass;
        table.entries.push_back(std::move(e));
      }
  return table;
}

void require_all_pass(const FluxTable& table) {
  if (table.all_pass) return;
  std::string msg = "flux table entries off target:";
  for (const FluxEntry& e : table.entries)
    if (!e.pass) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), " %s[%d][%d] limit %.6e target %.6e;",
                    e.kind == FieldKind::magnetic ? "magnetic" : "yang_mills",
                    e.i + 1, e.j + 1, e.limit, e.target);
      msg += buf;
    }
  throw ConvergenceError(msg);
}

}  // namespace ciphase
