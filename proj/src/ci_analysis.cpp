#include "ciphase/ci_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace ciphase {

namespace {

Real principal_angle(Real a) {
  a = std::fmod(a, 2.0 * pi);
  if (a < 0) a += 2.0 * pi;
  return a;
}

// Winding number of the off-diagonal coupling around a small circle; the
// mixing angle advances by winding * pi per loop.
int local_winding(const ComplexCoupling& m, const Vec2& center, Real radius) {
  const int n = 256;
  Real total = 0.0, prev = 0.0;
  for (int k = 0; k <= n; ++k) {
    const Real t = 2.0 * pi * k / n;
    const Vec2 p = center + radius * Vec2(std::cos(t), std::sin(t));
    const Real q = p.norm(), phi = std::atan2(p.y(), p.x());
    const Complex v = m.offdiag(q, phi);
    const Real a = std::arg(v);
    if (k > 0) total += std::remainder(a - prev, 2.0 * pi);
    prev = a;
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

}  // namespace

std::vector<Real> positive_cubic_roots(Real c3, Real c1, Real c0) {
  std::vector<Real> roots;
  if (c3 == 0.0) {
    if (c1 == 0.0) return roots;
    const Real r = -c0 / c1;
    if (r > 1e-12) roots.push_back(r);
    return roots;
  }
  const Real p = c1 / c3, r = c0 / c3;
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(0, 2) = -r;
  comp(1, 0) = 1.0;
  comp(1, 2) = -p;
  comp(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
  for (int i = 0; i < 3; ++i) {
    const Complex z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z.real()))) continue;
    Real q = z.real();
    if (q <= 1e-12) continue;
    for (int it = 0; it < 4; ++it) {
      const Real f = c3 * q * q * q + c1 * q + c0;
      const Real df = 3.0 * c3 * q * q + c1;
      if (df == 0.0) break;
      q -= f / df;
    }
    // a double root sits where the derivative vanishes; snap to it exactly,
    // since plain Newton stalls at linear convergence there
    const Real df = 3.0 * c3 * q * q + c1;
    if (std::abs(df) <= 1e-6 * (3.0 * std::abs(c3) * q * q + std::abs(c1)) &&
        -c1 / c3 > 0.0) {
      const Real qd = std::sqrt(-c1 / (3.0 * c3));
      const Real fd = c3 * qd * qd * qd + c1 * qd + c0;
      const Real scale = std::abs(c3) * qd * qd * qd + std::abs(c1) * qd + std::abs(c0);
      if (std::abs(fd) <= 1e-9 * scale) q = qd;
    }
    if (q > 1e-12) roots.push_back(q);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](Real a, Real b) { return std::abs(a - b) < 1e-7 * std::max(1.0, a); }),
              roots.end());
  return roots;
}

std::vector<CiPoint> locate_cartesian_cis(const CartesianCoupling& m,
                                          const SearchRegion& region, int grid) {
  if (grid < 2) throw InputError("grid must have at least two cells per side");
  if (!(region.xmax > region.xmin) || !(region.ymax > region.ymin))
    throw InputError("empty search region");
  const Real hx = (region.xmax - region.xmin) / grid;
  const Real hy = (region.ymax - region.ymin) / grid;

  Eigen::MatrixXd va(grid + 1, grid + 1), vb(grid + 1, grid + 1);
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      const Real x = region.xmin + i * hx, y = region.ymin + j * hy;
      va(i, j) = m.A(x, y);
      vb(i, j) = m.B(x, y);
    }

  std::vector<CiPoint> out;
  const Real diag = std::hypot(hx, hy);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const Real amin = std::min({va(i, j), va(i + 1, j), va(i, j + 1), va(i + 1, j + 1)});
      const Real amax = std::max({va(i, j), va(i + 1, j), va(i, j + 1), va(i + 1, j + 1)});
      const Real bmin = std::min({vb(i, j), vb(i + 1, j), vb(i, j + 1), vb(i + 1, j + 1)});
      const Real bmax = std::max({vb(i, j), vb(i + 1, j), vb(i, j + 1), vb(i + 1, j + 1)});
      if (amin > 0 || amax < 0 || bmin > 0 || bmax < 0) continue;

      Vec2 p(region.xmin + (i + 0.5) * hx, region.ymin + (j + 0.5) * hy);
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const Vec2 f(m.A(p.x(), p.y()), m.B(p.x(), p.y()));
        const Real scale = m.A.abs_eval(p.x(), p.y()) + m.B.abs_eval(p.x(), p.y());
        if (f.norm() <= 1e-13 * std::max(scale, 1e-30)) {
          ok = true;
          break;
        }
        Eigen::Matrix2d jac;
        jac << m.Ax(p.x(), p.y()), m.Ay(p.x(), p.y()),
               m.Bx(p.x(), p.y()), m.By(p.x(), p.y());
        if (std::abs(jac.determinant()) < 1e-14 * std::max(scale, 1e-30)) break;
        Vec2 step = jac.partialPivLu().solve(-f);
        if (step.norm() > 2.0 * diag) step *= 2.0 * diag / step.norm();
        p += step;
      }
      if (!ok) continue;
      const Real margin = 1e-9 * (1.0 + diag);
      if (p.x() < region.xmin - margin || p.x() > region.xmax + margin ||
          p.y() < region.ymin - margin || p.y() > region.ymax + margin)
        continue;

      bool dup = false;
      for (const auto& e : out)
        if ((e.xy - p).norm() < 1e-7 * (1.0 + p.norm())) dup = true;
      if (dup) continue;

      CiPoint ci;
      ci.xy = p;
      ci.q0 = p.norm();
      ci.phi0 = (ci.q0 == 0.0) ? 0.0 : principal_angle(std::atan2(p.y(), p.x()));
      ci.kind = CiKind::planar_root;
      ci.residual = std::hypot(m.A(p.x(), p.y()), m.B(p.x(), p.y()));
      ci.sign = jacobian_sign(m, p);
      out.push_back(ci);
    }

  std::sort(out.begin(), out.end(), [](const CiPoint& a, const CiPoint& b) {
    return std::make_pair(a.q0, a.phi0) < std::make_pair(b.q0, b.phi0);
  });
  return out;
}

SignClass jacobian_sign(const CartesianCoupling& m, const Vec2& xy, Real j_tol) {
  const Real j = m.Ax(xy.x(), xy.y()) * m.By(xy.x(), xy.y()) -
                 m.Bx(xy.x(), xy.y()) * m.Ay(xy.x(), xy.y());
  if (std::abs(j) <= j_tol) return SignClass::degenerate;
  return j > 0 ? SignClass::plus : SignClass::minus;
}

namespace {

void push_census_point(std::vector<CiPoint>& out, const ComplexCoupling& m,
                       Real q0, Real phi0, CiKind kind) {
  phi0 = principal_angle(phi0);
  for (const auto& e : out)
    if (std::abs(e.q0 - q0) < 1e-7 * std::max(1.0, q0) &&
        (std::abs(std::remainder(e.phi0 - phi0, 2.0 * pi)) < 1e-7 || e.q0 == 0.0))
      return;
  CiPoint ci;
  ci.q0 = q0;
  ci.phi0 = phi0;
  ci.xy = q0 * Vec2(std::cos(phi0), std::sin(phi0));
  ci.kind = kind;
  ci.residual = (kind == CiKind::origin) ? 0.0 : std::abs(m.offdiag(q0, phi0));
  ci.sign = ci_sign(m, ci);
  out.push_back(ci);
}

std::vector<CiPoint> quartic_census(const ComplexCoupling& m) {
  const Real mu = m.mu(), lambda = m.lambda();
  std::vector<CiPoint> out;
  push_census_point(out, m, 0.0, 0.0, CiKind::origin);

  // branch with e^{3 i phi} = +1: lambda q^3 - mu q + 1 = 0
  for (Real q0 : positive_cubic_roots(lambda, -mu, 1.0))
    for (int k = 0; k < 3; ++k)
      push_census_point(out, m, q0, 2.0 * pi * k / 3.0, CiKind::trigonal_a);

  // branch with e^{3 i phi} = -1: -lambda q^3 + mu q + 1 = 0
  for (Real q0 : positive_cubic_roots(-lambda, mu, 1.0))
    for (int k = 0; k < 3; ++k)
      push_census_point(out, m, q0, pi / 3.0 + 2.0 * pi * k / 3.0, CiKind::trigonal_b);

  if (mu * lambda < 0.0) {
    const Real q0 = std::sqrt(-mu / lambda);
    const Real c = 1.0 / (2.0 * mu * q0);
    if (std::abs(c) <= 1.0) {
      const Real phi0 = std::acos(std::clamp(c, -1.0, 1.0)) / 3.0;
      for (int k = 0; k < 3; ++k) {
        push_census_point(out, m, q0, phi0 + 2.0 * pi * k / 3.0, CiKind::shifted_ring);
        push_census_point(out, m, q0, -phi0 + 2.0 * pi * k / 3.0, CiKind::shifted_ring);
      }
    }
  }
  return out;
}

std::vector<CiPoint> series_census(const ComplexCoupling& m, Real q_max) {
  if (!(q_max > 0.0)) throw InputError("q_max must be positive for a series sweep");
  std::vector<CiPoint> out;
  push_census_point(out, m, 0.0, 0.0, CiKind::origin);

  const int nq = 400, nphi = 72;
  Eigen::MatrixXd absw(nq, nphi);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nphi; ++j)
      absw(i, j) = std::abs(m.bracket(q_max * (i + 1.0) / nq, 2.0 * pi * j / nphi));

  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nphi; ++j) {
      if (absw(i, j) > 0.5) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di;
          if (ii < 0 || ii >= nq) continue;
          const int jj = (j + dj + nphi) % nphi;
          if (absw(ii, jj) < absw(i, j)) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;

      Real q = q_max * (i + 1.0) / nq, phi = 2.0 * pi * j / nphi;
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const Complex w = m.bracket(q, phi);
        if (std::abs(w) <= 1e-13) {
          ok = true;
          break;
        }
        const Complex wq = m.bracket_dq(q, phi), wp = m.bracket_dphi(q, phi);
        Eigen::Matrix2d jac;
        jac << wq.real(), wp.real(), wq.imag(), wp.imag();
        if (std::abs(jac.determinant()) < 1e-16) break;
        const Vec2 step = jac.partialPivLu().solve(-Vec2(w.real(), w.imag()));
        const Real cap = 0.5 * q_max / nq + 0.1;
        const Real len = step.norm();
        const Real sc = (len > cap) ? cap / len : 1.0;
        q += sc * step.x();
        phi += sc * step.y();
        if (q < 1e-8) q = 1e-8;
      }
      if (!ok || q < 1e-8 || q > 1.05 * q_max) continue;

      const Real s3 = std::sin(3.0 * phi);
      CiKind kind = CiKind::shifted_ring;
      if (std::abs(s3) < 1e-7)
        kind = (std::cos(3.0 * phi) > 0) ? CiKind::trigonal_a : CiKind::trigonal_b;
      push_census_point(out, m, q, phi, kind);
    }
  return out;
}

}  // namespace

std::vector<CiPoint> locate_complex_cis(const ComplexCoupling& m, Real q_max) {
  std::vector<CiPoint> out = m.quartic() ? quartic_census(m) : series_census(m, q_max);
  std::sort(out.begin(), out.end(), [](const CiPoint& a, const CiPoint& b) {
    return std::make_pair(a.q0, a.phi0) < std::make_pair(b.q0, b.phi0);
  });
  return out;
}

SignClass ci_sign(const ComplexCoupling& m, const CiPoint& p) {
  switch (p.kind) {
    case CiKind::origin:
      return SignClass::minus;
    case CiKind::planar_root:
      throw InputError("planar census points carry their own jacobian sign");
    case CiKind::shifted_ring:
      if (m.quartic()) return SignClass::minus;
      break;
    case CiKind::trigonal_a:
    case CiKind::trigonal_b:
      if (m.quartic()) {
        const Real mu = m.mu(), lambda = m.lambda(), q0 = p.q0;
        const Real num = 3.0 * mu * q0 + 3.0 * lambda * q0 * q0 * q0;
        const Real den = mu * q0 - 3.0 * lambda * q0 * q0 * q0;
        if (std::abs(den) <= 1e-9 * std::max(1.0, std::abs(num)) ||
            std::abs(num) <= 1e-9 * std::max(1.0, std::abs(den)))
          return SignClass::degenerate;
        return (num / den > 0) ? SignClass::plus : SignClass::minus;
      }
      break;
  }
  // series fallback: the bracket's winding around the point decides
  const int w = local_winding(m, p.xy, 1e-4 * std::max(1.0, p.q0));
  if (w == 1) return SignClass::plus;
  if (w == -1) return SignClass::minus;
  return SignClass::degenerate;
}

Real predicted_loop_phase(const std::vector<CiPoint>& cis, const Vec2& center,
                          Real radius, Real clearance) {
  if (!(radius > 0.0)) throw InputError("loop radius must be positive");
  int total = 0;
  for (const auto& p : cis) {
    const Real d = (p.xy - center).norm();
    if (std::abs(d - radius) < clearance)
      throw ContourError("census point lies on the contour");
    if (d > radius) continue;
    if (p.sign == SignClass::degenerate)
      throw InputError("enclosed census point is degenerate");
    total += (p.sign == SignClass::plus) ? 1 : -1;
  }
  return total * pi;
}

}  // namespace ciphase
