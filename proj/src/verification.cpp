#include "ciphase/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "ciphase/ci_analysis.hpp"
#include "ciphase/dynamics.hpp"
#include "ciphase/flux.hpp"
#include "ciphase/gauge_fields.hpp"
#include "ciphase/models.hpp"
#include "ciphase/phase_tracing.hpp"

namespace ciphase {

namespace {

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// joint worst-tracking: every observation widens worst, pass needs all in
struct Gauge {
  Real worst = 0.0;
  bool ok = true;
  void observe(Real deviation, Real bound) {
    worst = std::max(worst, deviation);
    ok = ok && deviation <= bound;
  }
};

CheckResult quartic_census_check() {
  CheckResult r{1, "quartic census: ring radii, angle sets, sign threshold", false, 0.0, 1e-2, ""};
  const ComplexCoupling m(1.0, 0.3, 0.003);
  const auto cis = locate_complex_cis(m);
  if (cis.size() != 10) {
    r.detail = fmt("census found %zu points, wanted 10", cis.size());
    return r;
  }
  // census is sorted by q0: origin first, then three rings of three
  Gauge g;
  g.observe(cis[0].q0, 1e-12);
  const Real ring_ref[3] = {3.95, 7.42, 11.37};
  Real rings[3] = {0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    rings[k] = cis[1 + 3 * k].q0;
    for (int s = 0; s < 3; ++s) {
      const CiPoint& p = cis[1 + 3 * k + s];
      g.observe(std::abs(p.q0 - ring_ref[k]), 1e-2);
      g.observe(std::abs(p.q0 - rings[k]), 1e-9);  // radii within a ring agree
      // angle family: branch a rings sit on cos(3 phi) = +1, branch b on -1
      const Real c3 = std::cos(3.0 * p.phi0);
      g.observe(std::abs(c3 - (k == 2 ? -1.0 : 1.0)), 1e-9);
      g.observe(std::abs(m.offdiag(p.q0, p.phi0)), 1e-9);  // really a zero
    }
  }
  // sign threshold: the slope-ratio numerator mu q - 3 lambda q^3 changes
  // sign between the two branch-a radii; bisect it and compare to 5.77
  Real lo = rings[0], hi = rings[1];
  for (int it = 0; it < 200; ++it) {
    const Real mid = 0.5 * (lo + hi);
    ((0.3 * mid - 3.0 * 0.003 * mid * mid * mid) > 0.0 ? lo : hi) = mid;
  }
  const Real qstar = 0.5 * (lo + hi);
  g.observe(std::abs(qstar - 5.77), 1e-2);
  // sign sequence: origin -, inner ring +++, outer rings all -
  for (std::size_t i = 0; i < cis.size(); ++i) {
    const SignClass want = (i >= 1 && i <= 3) ? SignClass::plus : SignClass::minus;
    if (cis[i].sign != want) g.observe(1.0, 0.5);
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = fmt("q0 = %.4f/%.4f/%.4f, q* = %.4f, signs -/+++/---/---", rings[0], rings[1],
                 rings[2], qstar);
  return r;
}

CheckResult quartic_loops_check() {
  CheckResult r{2, "quartic loop phases at radii 2/5/9/20, census vs traced", false, 0.0,
                1e-3 * pi, ""};
  const ComplexCoupling m(1.0, 0.3, 0.003);
  const auto cis = locate_complex_cis(m);
  const Real radii[4] = {2.0, 5.0, 9.0, 20.0};
  const Real want[4] = {-pi, 2.0 * pi, -pi, -4.0 * pi};
  Gauge g;
  Real traced[4] = {0, 0, 0, 0};
  for (int k = 0; k < 4; ++k) {
    const Real predicted = predicted_loop_phase(cis, Vec2::Zero(), radii[k]);
    LoopSpec loop;
    loop.radius = radii[k];
    traced[k] = trace_phase(m, loop).total;
    g.observe(std::abs(predicted - want[k]), r.bound);
    g.observe(std::abs(traced[k] - want[k]), r.bound);
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = fmt("traced/pi = %+.6f/%+.6f/%+.6f/%+.6f", traced[0] / pi, traced[1] / pi,
                 traced[2] / pi, traced[3] / pi);
  return r;
}

CheckResult planar_examples_check() {
  CheckResult r{3, "planar examples: per-point signs and loop totals", false, 0.0, 1e-6, ""};
  Gauge g;
  // A = X^2 - 1, B = Y: signed crossings at (+-1, 0), jacobian 2X
  const CartesianCoupling m1(PolyXY::from_terms({{2, 0, 1.0}, {0, 0, -1.0}}),
                             PolyXY::from_terms({{0, 1, 1.0}}));
  const auto c1 = locate_cartesian_cis(m1, {-2.0, 2.0, -2.0, 2.0});
  if (c1.size() != 2 || c1[0].sign != SignClass::minus || c1[1].sign != SignClass::plus)
    g.observe(1.0, 0.5);
  g.observe(std::abs(predicted_loop_phase(c1, Vec2::Zero(), 1.5)), 1e-12);
  LoopSpec big;
  big.radius = 1.5;
  g.observe(std::abs(trace_phase(m1, big).total), r.bound);

  // A = X^2 - 1, B = X Y: jacobian 2X^2, both crossings plus
  const CartesianCoupling m2(PolyXY::from_terms({{2, 0, 1.0}, {0, 0, -1.0}}),
                             PolyXY::from_terms({{1, 1, 1.0}}));
  const auto c2 = locate_cartesian_cis(m2, {-2.0, 2.0, -2.0, 2.0});
  if (c2.size() != 2 || c2[0].sign != SignClass::plus || c2[1].sign != SignClass::plus)
    g.observe(1.0, 0.5);
  g.observe(std::abs(predicted_loop_phase(c2, Vec2::Zero(), 1.5) - 2.0 * pi), 1e-12);
  g.observe(std::abs(trace_phase(m2, big).total - 2.0 * pi), r.bound);
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "signs -/+ then +/+, totals 0 and +2pi";
  return r;
}

CheckResult flux_table_check(Representation rep, int criterion) {
  const bool ad = rep == Representation::adiabatic;
  CheckResult r{criterion,
                ad ? "adiabatic flux table: magnetic {0,-pi}, yang-mills {+pi,0}"
                   : "circulating flux table: magnetic {-pi,0}, yang-mills {0,+pi}",
                false, 0.0, 1e-3, ""};
  const FluxTable t = table_report(1.0, 1.0, rep);
  Gauge g;
  int seen = 0;
  for (const FluxEntry& e : t.entries) {
    g.observe(std::abs(e.limit - e.target), r.bound);
    g.observe(e.residual, r.bound);
    if (!e.pass) g.observe(1.0, 0.5);
    // pin the embedded targets of the canonical (0,0) and (0,1) elements
    const bool mag = e.kind == FieldKind::magnetic;
    Real want = 2.0;  // sentinel: element not pinned by the table
    if (e.i == 0 && e.j == 0) want = ad ? (mag ? 0.0 : pi) : (mag ? -pi : 0.0);
    if (e.i == 0 && e.j == 1) want = ad ? (mag ? -pi : 0.0) : (mag ? 0.0 : pi);
    if (want != 2.0) {
      ++seen;
      if (e.target != want) g.observe(1.0, 0.5);
    }
  }
  if (seen != 4 || !t.all_pass) g.observe(1.0, 0.5);
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = fmt("8 extrapolated entries at alpha=beta=1, all |limit-target| <= %.0e", r.bound);
  return r;
}

CheckResult stokes_check() {
  CheckResult r{6, "stokes consistency: disc flux vs boundary circulation", false, 0.0, 1e-6, ""};
  Gauge g;
  for (Real b : {1.0, 0.1, 0.01})
    for (Real q : {0.5, 1.0, 2.0})
      for (Real z : {0.5, 1.0}) {
        const BerryModel m{b, 1.0, 1.0, ActiveAxis::z_carries_b};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const Real s = surface_flux(m, Representation::adiabatic, i, j,
                                        FieldKind::magnetic, Disc{q, z}, 1e-9);
            const Complex l = line_integral(m, Representation::adiabatic, i, j, Ring{q, z});
            g.observe(std::abs(s - l.real()), r.bound);
          }
      }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "3x3x2 (b, q, Z) grid, all four elements";
  return r;
}

CheckResult monopole_cap_check() {
  CheckResult r{7, "monopole caps: quadrature vs -(1-cos theta) pi, sheets opposite", false, 0.0,
                1e-8, ""};
  Gauge g;
  for (int k = 1; k <= 20; ++k) {
    Monopole3D cap;
    cap.theta_cap = pi * k / 21.0;
    const Real closed = -(1.0 - std::cos(cap.theta_cap)) * pi;
    const Real low = berry3d_surface_integral(cap, Sheet::lower);
    const Real up = berry3d_surface_integral(cap, Sheet::upper);
    g.observe(std::abs(low - closed), r.bound);
    g.observe(std::abs(low - berry3d_phase(cap, Sheet::lower)), r.bound);
    g.observe(std::abs(up + low), r.bound);
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "20 cap angles, both sheets";
  return r;
}

CheckResult dynamics_exact_check() {
  CheckResult r{8, "driven doublet: adaptive integration vs exact amplitudes", false, 0.0, 1e-9,
                ""};
  Gauge g;
  for (const auto& gw : {std::pair<Real, Real>{10.0, 1.0}, {100.0, 1.0}, {2.0, 1.0}}) {
    for (StateKind which : {StateKind::ground, StateKind::excited}) {
      const DoubletDynamics d = DoubletDynamics::make(gw.first, gw.second, which);
      const Real t_end = 2.0 * pi / gw.second;
      const AmplitudeTrace tr = integrate_tdse(d, t_end, 1e-10);
      for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const Vec2c exact = closed_form_amplitudes(d, tr.t[i]);
        g.observe((tr.chi[i] - exact).cwiseAbs().maxCoeff(), r.bound);
      }
    }
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "(G, w) in {(10,1), (100,1), (2,1)}, both launch states, one period";
  return r;
}

CheckResult dynamics_sign_check() {
  CheckResult r{8, "driven doublet: topological phase -pi ground / +pi excited", false, 0.0, 1e-2,
                ""};
  Gauge g;
  const Real lo = geometric_phase_extract(DoubletDynamics::make(1000.0, 1.0, StateKind::ground),
                                          StateKind::ground);
  const Real hi = geometric_phase_extract(DoubletDynamics::make(1000.0, 1.0, StateKind::excited),
                                          StateKind::excited);
  g.observe(std::abs(lo + pi), r.bound);
  g.observe(std::abs(hi - pi), r.bound);
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = fmt("G/w = 1e3: ground %+.5f pi, excited %+.5f pi", lo / pi, hi / pi);
  return r;
}

CheckResult elliptic_loop_check() {
  CheckResult r{9, "elliptic circuits: off-diagonal loop -pi for every aspect ratio", false, 0.0,
                1e-3, ""};
  Gauge g;
  for (Real gamma : {0.25, 0.5, 2.0, 4.0}) {
    const BerryModel m{1e-5, gamma, 1.0, ActiveAxis::z_carries_b};
    const Complex v = line_integral(m, Representation::adiabatic, 0, 1, Ring{1.0, 1.0});
    g.observe(std::abs(v.real() + pi), r.bound);
    g.observe(std::abs(v.imag()), 1e-8);
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "gamma in {1/4, 1/2, 2, 4} at b = 1e-5";
  return r;
}

CheckResult elliptic_profile_check() {
  CheckResult r{9, "elliptic coupling profile: closed form vs finite differences", false, 0.0,
                1e-7, ""};
  Gauge g;
  const Real q = 1.2, z = 1.0;
  const BerryModel closed_m{1.0, 1.3, 0.6, ActiveAxis::z_carries_b};
  // the finite-b coupling differs from the b -> 0 profile at O(b), so the
  // oracle runs at b small enough to park that term well under the bound
  const BerryModel tiny_b{1e-8, 1.3, 0.6, ActiveAxis::z_carries_b};
  for (int k = 0; k < 8; ++k) {
    const Real phi = -2.8 + 5.6 * k / 7.0;
    const FieldVec b0 = nact_b0(closed_m, Representation::adiabatic, 0, 1, q, phi);
    const Vec3 at(q * std::cos(phi), q * std::sin(phi), z);
    const NactField fd = nact_numeric(tiny_b, Representation::adiabatic, at, 1e-5);
    g.observe((b0.regular - fd.tau[0][1].regular).norm(), r.bound);
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "8 azimuths at q = 1.2, b = 1e-8, h = 1e-5 stencil";
  return r;
}

CheckResult antihermiticity_check() {
  CheckResult r{10, "property: coupling matrix anti-hermiticity", false, 0.0, 1e-12, ""};
  Gauge g;
  for (const BerryModel& m : {BerryModel{1.0, 1.0, 1.0, ActiveAxis::z_carries_b},
                              BerryModel{0.3, 1.3, 0.6, ActiveAxis::z_carries_b},
                              BerryModel{2.0, 0.5, 1.7, ActiveAxis::z_carries_b}})
    for (Representation rep : {Representation::adiabatic, Representation::circulating})
      for (Real phi : {0.3, 1.7, 2.9})
        for (Real z : {0.8, -0.5}) {
          const Vec3 at(1.1 * std::cos(phi), 1.1 * std::sin(phi), z);
          const NactField t = nact(m, rep, at);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              g.observe((t.tau[i][j].regular + t.tau[j][i].regular.conjugate()).norm(), r.bound);
              g.observe((t.tau[i][j].seam + t.tau[j][i].seam.conjugate()).norm(), r.bound);
            }
        }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "3 models x 2 representations x 6 points, regular and seam parts";
  return r;
}

CheckResult ym_regular_check() {
  CheckResult r{10, "property: adiabatic yang-mills field has no regular part", false, 0.0,
                1e-10, ""};
  Gauge g;
  for (const BerryModel& m : {BerryModel{1.0, 1.0, 1.0, ActiveAxis::z_carries_b},
                              BerryModel{0.3, 1.3, 0.6, ActiveAxis::z_carries_b},
                              BerryModel{2.0, 0.5, 1.7, ActiveAxis::z_carries_b}})
    for (Real phi : {0.3, 1.7, 2.9})
      for (Real z : {0.8, -0.5}) {
        const Vec3 at(1.1 * std::cos(phi), 1.1 * std::sin(phi), z);
        const GaugeTensor f = yang_mills_field(m, Representation::adiabatic, at);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) g.observe(f.f[i][j].regular.norm(), r.bound);
      }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "3 models x 6 points, all four elements";
  return r;
}

CheckResult norm_conservation_check() {
  CheckResult r{10, "property: integrator conserves the amplitude norm", false, 0.0, 1e-9, ""};
  Gauge g;
  for (const auto& gw : {std::pair<Real, Real>{10.0, 1.0}, {100.0, 1.0}, {2.0, 1.0}}) {
    const DoubletDynamics d = DoubletDynamics::make(gw.first, gw.second, StateKind::ground);
    const AmplitudeTrace tr = integrate_tdse(d, 2.0 * pi / gw.second, 1e-10);
    for (Real n : tr.norm) g.observe(std::abs(n - 1.0), r.bound);
  }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "same (G, w) grid as the exactness check";
  return r;
}

CheckResult axis_equivalence_check() {
  CheckResult r{10, "property: both splitting-axis formalisms give the same couplings", false,
                0.0, 1e-5, ""};
  Gauge g;
  const Vec3 pts[3] = {Vec3(0.9, 0.5, 0.7), Vec3(1.2, -0.4, 0.6), Vec3(0.3, 0.8, -1.1)};
  for (const auto& ab : {std::pair<Real, Real>{1.3, 0.6}, {1.0, 1.0}})
    for (const Vec3& p : pts) {
      const BerryModel mz{1e-6, ab.first, ab.second, ActiveAxis::z_carries_b};
      const BerryModel my{1e-6, ab.second, ab.first, ActiveAxis::y_carries_b};
      // cyclic map: z-frame (c1, c2, h) sits at y-frame point (c2, h, c1)
      const NactField tz = nact(mz, Representation::adiabatic, p);
      const NactField ty = nact(my, Representation::adiabatic, Vec3(p[1], p[2], p[0]));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          g.observe((tz.tau[i][j].regular - ty.tau[i][j].regular).norm(), r.bound);
    }
  r.pass = g.ok;
  r.worst = g.worst;
  r.detail = "b = 1e-6, two coupling pairs, three points";
  return r;
}

CheckResult guarded(const std::function<CheckResult()>& check, int criterion, const char* name) {
  try {
    return check();
  } catch (const std::exception& e) {
    CheckResult r{criterion, name, false, 0.0, 0.0, ""};
    r.detail = fmt("exception: %s", e.what());
    return r;
  }
}

}  // namespace

std::vector<CheckResult> run_acceptance() {
  std::vector<CheckResult> out;
  out.push_back(guarded(quartic_census_check, 1, "quartic census"));
  out.push_back(guarded(quartic_loops_check, 2, "quartic loop phases"));
  out.push_back(guarded(planar_examples_check, 3, "planar examples"));
  out.push_back(guarded([] { return flux_table_check(Representation::adiabatic, 4); }, 4,
                        "adiabatic flux table"));
  out.push_back(guarded([] { return flux_table_check(Representation::circulating, 5); }, 5,
                        "circulating flux table"));
  out.push_back(guarded(stokes_check, 6, "stokes consistency"));
  out.push_back(guarded(monopole_cap_check, 7, "monopole caps"));
  out.push_back(guarded(dynamics_exact_check, 8, "dynamics exactness"));
  out.push_back(guarded(dynamics_sign_check, 8, "dynamics signs"));
  out.push_back(guarded(elliptic_loop_check, 9, "elliptic circuits"));
  out.push_back(guarded(elliptic_profile_check, 9, "elliptic profile"));
  out.push_back(guarded(antihermiticity_check, 10, "anti-hermiticity"));
  out.push_back(guarded(ym_regular_check, 10, "yang-mills regular part"));
  out.push_back(guarded(norm_conservation_check, 10, "norm conservation"));
  out.push_back(guarded(axis_equivalence_check, 10, "axis equivalence"));
  return out;
}

std::string render_report(const std::vector<CheckResult>& checks) {
  std::string out;
  for (const CheckResult& c : checks) {
    out += fmt("[%s] C%-2d %-68s worst %.3e bound %.1e", c.pass ? "PASS" : "FAIL", c.criterion,
               c.name.c_str(), c.worst, c.bound);
    if (!c.detail.empty()) out += "  | " + c.detail;
    out += '\n';
  }
  int passed = 0;
  for (const CheckResult& c : checks) passed += c.pass ? 1 : 0;
  out += fmt("%d/%zu checks passed\n", passed, checks.size());
  return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

}  // namespace ciphase
