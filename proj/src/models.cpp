#include "ciphase/models.hpp"

#include <cmath>

namespace ciphase {

namespace {
constexpr int kMaxDegree = 8;
}

PolyXY::PolyXY() : c_(Eigen::MatrixXd::Zero(1, 1)) {}

PolyXY::PolyXY(Eigen::MatrixXd coeffs) : c_(std::move(coeffs)) {
  if (c_.rows() == 0 || c_.cols() == 0) c_ = Eigen::MatrixXd::Zero(1, 1);
  if (c_.rows() + c_.cols() - 2 > 2 * kMaxDegree)
    throw InputError("polynomial grid larger than the supported degree");
  for (int i = 0; i < c_.rows(); ++i)
    for (int j = 0; j < c_.cols(); ++j)
      if (c_(i, j) != 0.0 && i + j > kMaxDegree)
        throw InputError("polynomial total degree exceeds 8");
}

PolyXY PolyXY::from_terms(const std::vector<std::tuple<int, int, Real>>& terms) {
  int nx = 1, ny = 1;
  for (const auto& [i, j, v] : terms) {
    (void)v;
    if (i < 0 || j < 0) throw InputError("negative polynomial degree");
    if (i + j > kMaxDegree) throw InputError("polynomial total degree exceeds 8");
    nx = std::max(nx, i + 1);
    ny = std::max(ny, j + 1);
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nx, ny);
  for (const auto& [i, j, v] : terms) c(i, j) += v;
  return PolyXY(std::move(c));
}

Real PolyXY::operator()(Real x, Real y) const {
  // Horner in x over row polynomials Horner-evaluated in y.
  Real acc = 0.0;
  for (int i = static_cast<int>(c_.rows()) - 1; i >= 0; --i) {
    Real row = 0.0;
    for (int j = static_cast<int>(c_.cols()) - 1; j >= 0; --j) row = row * y + c_(i, j);
    acc = acc * x + row;
  }
  return acc;
}

Real PolyXY::abs_eval(Real x, Real y) const {
  Real ax = std::abs(x), ay = std::abs(y);
  Real acc = 0.0;
  for (int i = static_cast<int>(c_.rows()) - 1; i >= 0; --i) {
    Real row = 0.0;
    for (int j = static_cast<int>(c_.cols()) - 1; j >= 0; --j)
      row = row * ay + std::abs(c_(i, j));
    acc = acc * ax + row;
  }
  return acc;
}

PolyXY PolyXY::dx() const {
  if (c_.rows() == 1) return PolyXY();
  Eigen::MatrixXd d(c_.rows() - 1, c_.cols());
  for (int i = 1; i < c_.rows(); ++i) d.row(i - 1) = i * c_.row(i);
  return PolyXY(std::move(d));
}

PolyXY PolyXY::dy() const {
  if (c_.cols() == 1) return PolyXY();
  Eigen::MatrixXd d(c_.rows(), c_.cols() - 1);
  for (int j = 1; j < c_.cols(); ++j) d.col(j - 1) = j * c_.col(j);
  return PolyXY(std::move(d));
}

int PolyXY::total_degree() const {
  int deg = 0;
  for (int i = 0; i < c_.rows(); ++i)
    for (int j = 0; j < c_.cols(); ++j)
      if (c_(i, j) != 0.0) deg = std::max(deg, i + j);
  return deg;
}

CartesianCoupling::CartesianCoupling(PolyXY a, PolyXY b)
    : A(std::move(a)),
      B(std::move(b)),
      Ax(A.dx()),
      Ay(A.dy()),
      Bx(B.dx()),
      By(B.dy()) {}

ComplexCoupling::ComplexCoupling(Real K, Real mu, Real lambda)
    : K_(K), quartic_(true), mu_(mu), lambda_(lambda) {
  if (!(K > 0.0)) throw InputError("coupling scale K must be positive");
  plus_ = {Eigen::VectorXd::Constant(1, -mu)};
  minus_ = {Eigen::VectorXd::Constant(1, lambda)};
}

ComplexCoupling::ComplexCoupling(Real K, std::vector<Eigen::VectorXd> plus,
                                 std::vector<Eigen::VectorXd> minus)
    : K_(K), quartic_(false), plus_(std::move(plus)), minus_(std::move(minus)) {
  if (!(K > 0.0)) throw InputError("coupling scale K must be positive");
  for (const auto& p : plus_)
    if (p.size() == 0) throw InputError("empty series polynomial");
  for (const auto& p : minus_)
    if (p.size() == 0) throw InputError("empty series polynomial");
}

Real ComplexCoupling::mu() const {
  if (!quartic_) throw RepresentationError("mu is defined for the quartic truncation only");
  return mu_;
}

Real ComplexCoupling::lambda() const {
  if (!quartic_) throw RepresentationError("lambda is defined for the quartic truncation only");
  return lambda_;
}

namespace {

Real poly1(const Eigen::VectorXd& p, Real u) {
  Real acc = 0.0;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) acc = acc * u + p[k];
  return acc;
}

Real poly1_d(const Eigen::VectorXd& p, Real u) {
  Real acc = 0.0;
  for (int k = static_cast<int>(p.size()) - 1; k >= 1; --k) acc = acc * u + k * p[k];
  return acc;
}

}  // namespace

Complex ComplexCoupling::bracket(Real q, Real phi) const {
  const Real u = q * q;
  Complex w{1.0, 0.0};
  for (std::size_t m = 1; m <= plus_.size(); ++m) {
    const Real radial = std::pow(q, static_cast<Real>(3 * m - 2)) * poly1(plus_[m - 1], u);
    w += radial * std::exp(iu * (3.0 * static_cast<Real>(m) * phi));
  }
  for (std::size_t m = 1; m <= minus_.size(); ++m) {
    const Real radial = std::pow(q, static_cast<Real>(3 * m)) * poly1(minus_[m - 1], u);
    w += radial * std::exp(-iu * (3.0 * static_cast<Real>(m) * phi));
  }
  return w;
}

Complex ComplexCoupling::bracket_dq(Real q, Real phi) const {
  const Real u = q * q;
  Complex w{0.0, 0.0};
  for (std::size_t m = 1; m <= plus_.size(); ++m) {
    const Real n = static_cast<Real>(3 * m - 2);
    const Real radial = n * std::pow(q, n - 1.0) * poly1(plus_[m - 1], u) +
                        std::pow(q, n) * poly1_d(plus_[m - 1], u) * 2.0 * q;
    w += radial * std::exp(iu * (3.0 * static_cast<Real>(m) * phi));
  }
  for (std::size_t m = 1; m <= minus_.size(); ++m) {
    const Real n = static_cast<Real>(3 * m);
    const Real radial = n * std::pow(q, n - 1.0) * poly1(minus_[m - 1], u) +
                        std::pow(q, n) * poly1_d(minus_[m - 1], u) * 2.0 * q;
    w += radial * std::exp(-iu * (3.0 * static_cast<Real>(m) * phi));
  }
  return w;
}

Complex ComplexCoupling::bracket_dphi(Real q, Real phi) const {
  const Real u = q * q;
  Complex w{0.0, 0.0};
  for (std::size_t m = 1; m <= plus_.size(); ++m) {
    const Real radial = std::pow(q, static_cast<Real>(3 * m - 2)) * poly1(plus_[m - 1], u);
    w += radial * (iu * 3.0 * static_cast<Real>(m)) * std::exp(iu * (3.0 * static_cast<Real>(m) * phi));
  }
  for (std::size_t m = 1; m <= minus_.size(); ++m) {
    const Real radial = std::pow(q, static_cast<Real>(3 * m)) * poly1(minus_[m - 1], u);
    w -= radial * (iu * 3.0 * static_cast<Real>(m)) * std::exp(-iu * (3.0 * static_cast<Real>(m) * phi));
  }
  return w;
}

Complex ComplexCoupling::offdiag(Real q, Real phi) const {
  return K_ * q * std::exp(-iu * phi) * bracket(q, phi);
}

void BerryModel::validate() const {
  if (!(b > 0.0)) throw InputError("splitting strength b must be positive");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw InputError("coupling constants alpha, beta must be positive");
}

BerryAngles berry_angles(const BerryModel& m, const Vec3& r) {
  m.validate();
  Real c1, c2, h, g1, g2;
  if (m.axis == ActiveAxis::z_carries_b) {
    c1 = r.x(); c2 = r.y(); h = r.z();
    g1 = m.alpha; g2 = m.beta;
  } else {
    // cyclic in-plane order around y is (z, x); the couplings attach as
    // beta z sz + alpha x sx, so the first leg carries beta.
    c1 = r.z(); c2 = r.x(); h = r.y();
    g1 = m.beta; g2 = m.alpha;
  }
  BerryAngles a;
  a.q = std::hypot(c1, c2);
  a.phi = (a.q == 0.0) ? 0.0 : std::atan2(c2, c1);
  a.qp = std::hypot(g1 * c1, g2 * c2);
  a.phip = (a.qp == 0.0) ? 0.0 : std::atan2(g2 * c2, g1 * c1);
  a.s = (a.q == 0.0) ? std::hypot(g1 * std::cos(a.phi), g2 * std::sin(a.phi)) : a.qp / a.q;
  a.h = h;
  a.Rb = std::hypot(a.qp, m.b * h);
  a.theta = (a.Rb == 0.0) ? 0.0 : std::atan2(a.qp, m.b * h);
  return a;
}

Mat2c eval_potential(const CartesianCoupling& m, const Vec2& xy) {
  const Real A = m.A(xy.x(), xy.y());
  const Real B = m.B(xy.x(), xy.y());
  Mat2c v;
  v << Complex(A, 0), Complex(B, 0), Complex(B, 0), Complex(-A, 0);
  return v;
}

Mat2c eval_potential(const ComplexCoupling& m, const Vec2& xy) {
  const Real q = xy.norm();
  const Real phi = (q == 0.0) ? 0.0 : std::atan2(xy.y(), xy.x());
  const Complex v12 = m.offdiag(q, phi);
  Mat2c v;
  v << Complex(0, 0), v12, std::conj(v12), Complex(0, 0);
  return v;
}

Mat2c eval_potential(const BerryModel& m, const Vec3& r) {
  m.validate();
  Mat2c v;
  if (m.axis == ActiveAxis::z_carries_b) {
    const Complex off(m.alpha * r.x(), -m.beta * r.y());
    v << Complex(m.b * r.z(), 0), off, std::conj(off), Complex(-m.b * r.z(), 0);
  } else {
    const Complex off(m.alpha * r.x(), -m.b * r.y());
    v << Complex(m.beta * r.z(), 0), off, std::conj(off), Complex(-m.beta * r.z(), 0);
  }
  return v;
}

Real mixing_angle(const CartesianCoupling& m, const Vec2& xy) {
  const Real A = m.A(xy.x(), xy.y());
  const Real B = m.B(xy.x(), xy.y());
  const Real scale = m.A.abs_eval(xy.x(), xy.y()) + m.B.abs_eval(xy.x(), xy.y());
  if (std::hypot(A, B) <= 1e-13 * scale)
    throw DegeneracyError("both couplings vanish at the requested point");
  return 0.5 * std::atan2(B, A);
}

Real mixing_angle(const ComplexCoupling& m, const Vec2& xy) {
  const Real q = xy.norm();
  if (q == 0.0) throw DegeneracyError("coupling vanishes at the origin");
  const Real phi = std::atan2(xy.y(), xy.x());
  const Complex w = m.bracket(q, phi);
  if (std::abs(w) <= 1e-12)
    throw DegeneracyError("coupling bracket vanishes at the requested point");
  const Complex v = m.offdiag(q, phi);
  return 0.5 * std::atan2(v.imag(), v.real());
}

SpinorPair states_from_angles(Real theta, Real phi) {
  const Real ct = std::cos(0.5 * theta), st = std::sin(0.5 * theta);
  const Complex em = std::exp(-iu * (0.5 * phi)), ep = std::exp(iu * (0.5 * phi));
  SpinorPair out;
  out.upper = Vec2c(ct * em, st * ep);
  out.lower = Vec2c(-st * em, ct * ep);
  out.rep = Representation::adiabatic;
  return out;
}

SpinorPair adiabatic_states(const BerryModel& m, const Vec3& r) {
  const BerryAngles a = berry_angles(m, r);
  if (a.Rb == 0.0) throw DegeneracyError("eigenvalue splitting vanishes at the requested point");
  SpinorPair s = states_from_angles(a.theta, a.phip);
  if (m.axis == ActiveAxis::y_carries_b) {
    // Frame rotation x->z, y->x, z->y is conjugation by this constant unitary.
    Mat2c uy;
    uy << Complex(1, 0), Complex(1, 0), Complex(0, 1), Complex(0, -1);
    uy *= 1.0 / std::sqrt(2.0);
    s.upper = uy * s.upper;
    s.lower = uy * s.lower;
  }
  return s;
}

SpinorPair to_circulating(const SpinorPair& s) {
  if (s.rep != Representation::adiabatic)
    throw RepresentationError("circulating mix starts from the adiabatic pair");
  const Real r = 1.0 / std::sqrt(2.0);
  SpinorPair out;
  out.upper = r * (s.upper + s.lower);
  out.lower = r * (s.upper - s.lower);
  out.rep = Representation::circulating;
  return out;
}

SpinorPair from_circulating(const SpinorPair& s) {
  if (s.rep != Representation::circulating)
    throw RepresentationError("expected the circulating pair");
  const Real r = 1.0 / std::sqrt(2.0);
  SpinorPair out;
  out.upper = r * (s.upper + s.lower);
  out.lower = r * (s.upper - s.lower);
  out.rep = Representation::adiabatic;
  return out;
}

Vec3c frame_to_cartesian(const BerryModel& m, const Vec3c& v, Real phi) {
  const Real c = std::cos(phi), s = std::sin(phi);
  if (m.axis == ActiveAxis::z_carries_b)
    return Vec3c(v[0] * c - v[1] * s, v[0] * s + v[1] * c, v[2]);
  // y frame: qhat = (sin phi, 0, cos phi), phihat = (cos phi, 0, -sin phi).
  return Vec3c(v[0] * s + v[1] * c, v[2], v[0] * c - v[1] * s);
}

}  // namespace ciphase
