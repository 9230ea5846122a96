#include "cuffdim/hyperbolic.hpp"

#include <array>
#include <cmath>

namespace cuffdim {

double normalize_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double ccw_distance(double from, double to) { return normalize_angle(to - from); }

BoundaryPoint BoundaryPoint::from_complex(Complex z) {
  return BoundaryPoint(std::atan2(z.imag(), z.real()));
}

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!(std::abs(z) < 1.0 - tolerances().disk_margin)) {
    throw Error("DiskPoint outside the open unit disk: |z| = " + std::to_string(std::abs(z)));
  }
}

// ---------------------------------------------------------------------------
// MoebiusTransform

MoebiusTransform::MoebiusTransform(Complex u, Complex v) {
  const double det = std::norm(u) - std::norm(v);
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error("MoebiusTransform: |u|^2 - |v|^2 must be positive");
  }
  const double s = 1.0 / std::sqrt(det);
  u_ = u * s;
  v_ = v * s;
  fix_sign();
}

MoebiusTransform MoebiusTransform::unimodular(Complex u, Complex v) {
  // Above this size |u|^2 - |v|^2 is pure cancellation noise; the inputs are
  // products of unit-determinant factors, so they are kept as they are.
  constexpr double kCancellationLimit = 1e6;
  if (std::norm(u) < kCancellationLimit) return MoebiusTransform(u, v);
  MoebiusTransform m;
  m.u_ = u;
  m.v_ = v;
  m.fix_sign();
  return m;
}

void MoebiusTransform::fix_sign() {
  if (u_.real() < 0.0 || (u_.real() == 0.0 && u_.imag() < 0.0)) {
    u_ = -u_;
    v_ = -v_;
  }
}

MoebiusTransform MoebiusTransform::rotation(double psi) {
  return MoebiusTransform(std::polar(1.0, psi / 2.0), Complex{});
}

MoebiusTransform MoebiusTransform::translation(double length, double direction) {
  return unimodular(Complex(std::cosh(length / 2.0), 0.0),
                    std::polar(std::sinh(length / 2.0), direction));
}

MoebiusTransform MoebiusTransform::to_origin(Complex z) {
  const double s = std::sqrt(1.0 - std::norm(z));
  return MoebiusTransform(Complex(1.0 / s, 0.0), -z / s);
}

Complex MoebiusTransform::apply(Complex z) const {
  return (u_ * z + v_) / (std::conj(v_) * z + std::conj(u_));
}

double MoebiusTransform::derivative_modulus(Complex z) const {
  return 1.0 / std::norm(std::conj(v_) * z + std::conj(u_));
}

MoebiusTransform mobius_compose(const MoebiusTransform& m, const MoebiusTransform& n) {
  const Complex u = m.u() * n.u() + m.v() * std::conj(n.v());
  const Complex v = m.u() * n.v() + m.v() * std::conj(n.u());
  return MoebiusTransform::unimodular(u, v);
}

MoebiusTransform mobius_inverse(const MoebiusTransform& m) {
  return MoebiusTransform::unimodular(std::conj(m.u()), -m.v());
}

double coefficient_distance(const MoebiusTransform& m, const MoebiusTransform& n) {
  const double same = std::abs(m.u() - n.u()) + std::abs(m.v() - n.v());
  const double flipped = std::abs(m.u() + n.u()) + std::abs(m.v() + n.v());
  return std::min(same, flipped);
}

BoundaryImage boundary_action(const MoebiusTransform& m, BoundaryPoint t) {
  const Complex z = t.z();
  return {BoundaryPoint::from_complex(m.apply(z)), m.derivative_modulus(z)};
}

double log_boundary_derivative(const MoebiusTransform& m, BoundaryPoint t) {
  return -2.0 * std::log(std::abs(std::conj(m.v()) * t.z() + std::conj(m.u())));
}

DiskPoint apply(const MoebiusTransform& m, DiskPoint z) { return DiskPoint(m.apply(z.z())); }

// ---------------------------------------------------------------------------
// Geodesic

Geodesic::Geodesic(BoundaryPoint forward, BoundaryPoint backward)
    : forward_(forward), backward_(backward) {
  const double d = ccw_distance(forward.theta(), backward.theta());
  const double gap = std::min(d, kTwoPi - d);
  if (gap <= tolerances().endpoint_separation) {
    throw Error("Geodesic: coincident endpoints");
  }
  double start = forward.theta();
  double width = d;
  if (d > kPi) {
    start = backward.theta();
    width = kTwoPi - d;
  }
  half_width_ = width / 2.0;
  cos_half_ = std::cos(half_width_);
  mid_direction_ = std::polar(1.0, start + half_width_);
  if (cos_half_ < 1e-14) {
    diameter_ = true;
    cos_half_ = 0.0;
    half_width_ = kPi / 2.0;
    const double p0 = std::fmod(forward.theta(), kPi);
    mid_direction_ = std::polar(1.0, p0 - kPi / 2.0);
  }
}

Complex Geodesic::center() const {
  if (diameter_) throw Error("Geodesic::center: diameter has no finite center");
  return mid_direction_ / cos_half_;
}

double Geodesic::radius() const {
  if (diameter_) throw Error("Geodesic::radius: diameter has no finite radius");
  return std::tan(half_width_);
}

double Geodesic::side_value(Complex z) const {
  return (1.0 + std::norm(z)) * cos_half_ - 2.0 * (z * std::conj(mid_direction_)).real();
}

double Geodesic::distance_estimate(Complex z) const {
  const double grad = 2.0 * std::abs(z * cos_half_ - mid_direction_);
  return std::abs(side_value(z)) / grad;
}

double Geodesic::orthogonality_residual() const {
  double worst = 0.0;
  for (const BoundaryPoint& p : {forward_, backward_}) {
    const Complex e = p.z();
    if (diameter_) {
      worst = std::max(worst, std::abs((e * std::conj(mid_direction_)).real()));
    } else {
      const Complex r = e - center();
      worst = std::max(worst, std::abs((r * std::conj(e)).real()) / std::abs(r));
    }
  }
  return worst;
}

Complex Geodesic::nearest_to_origin() const {
  if (diameter_) return Complex{};
  return mid_direction_ * ((1.0 - std::sin(half_width_)) / cos_half_);
}

bool Geodesic::same_as(const Geodesic& other, double tol) const {
  auto close = [tol](BoundaryPoint a, BoundaryPoint b) {
    const double d = ccw_distance(a.theta(), b.theta());
    return std::min(d, kTwoPi - d) <= tol;
  };
  return (close(forward_, other.forward_) && close(backward_, other.backward_)) ||
         (close(forward_, other.backward_) && close(backward_, other.forward_));
}

Geodesic geodesic_from_endpoints(BoundaryPoint p, BoundaryPoint q) { return Geodesic(p, q); }

Geodesic apply(const MoebiusTransform& m, const Geodesic& g) {
  return Geodesic(BoundaryPoint::from_complex(m.apply(g.forward().z())),
                  BoundaryPoint::from_complex(m.apply(g.backward().z())));
}

int signed_side(const Geodesic& g, DiskPoint z) {
  if (g.distance_estimate(z.z()) <= tolerances().on_geodesic) return 0;
  return g.side_value(z.z()) > 0.0 ? 1 : -1;
}

double hyp_distance(DiskPoint z1, DiskPoint z2) {
  const Complex a = z1.z();
  const Complex b = z2.z();
  const double ratio = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
  return 2.0 * std::atanh(std::min(ratio, 1.0));
}

namespace {

double cos_half_of(const Geodesic& g) { return g.is_diameter() ? 0.0 : std::cos(g.half_width()); }

Complex gradient(const Geodesic& g, Complex z) {
  return 2.0 * z * cos_half_of(g) - 2.0 * g.mid_direction();
}

}  // namespace

std::optional<DiskPoint> intersect(const Geodesic& g1, const Geodesic& g2) {
  if (g1.same_as(g2)) return std::nullopt;
  const double k1 = cos_half_of(g1);
  const double k2 = cos_half_of(g2);
  // Both circles are orthogonal to the unit circle, so their radical axis is
  // the line through the origin perpendicular to w.
  const Complex w = k2 * g1.mid_direction() - k1 * g2.mid_direction();
  if (g1.is_diameter() && g2.is_diameter()) return DiskPoint(Complex{});
  if (std::abs(w) < 1e-15) return std::nullopt;
  const Complex dir = Complex(0.0, 1.0) * w / std::abs(w);
  const Geodesic& circle = g1.is_diameter() ? g2 : g1;
  const double k = cos_half_of(circle);
  const double b = (dir * std::conj(circle.mid_direction())).real();
  const double disc = b * b - k * k;
  if (disc <= 0.0) return std::nullopt;
  const double t = k / (b + std::copysign(std::sqrt(disc), b));
  if (!(std::abs(t) < 1.0 - tolerances().disk_margin)) return std::nullopt;
  return DiskPoint(t * dir);
}

double crossing_angle_cos(const Geodesic& g1, const Geodesic& g2, DiskPoint at) {
  const Complex n1 = gradient(g1, at.z());
  const Complex n2 = gradient(g2, at.z());
  return std::abs((n1 * std::conj(n2)).real()) / (std::abs(n1) * std::abs(n2));
}

Perpendicular common_perpendicular(const Geodesic& g1, const Geodesic& g2) {
  // rho(z) = (e conj(z) - k) / (k conj(z) - conj(e)) reflects across a
  // geodesic; the product of two reflections across disjoint geodesics is a
  // translation along their common perpendicular by twice their distance.
  using Mat = std::array<Complex, 4>;
  auto reflection = [](const Geodesic& g) -> Mat {
    const double k = cos_half_of(g);
    const Complex e = g.mid_direction();
    return {e, Complex(-k, 0.0), Complex(k, 0.0), -std::conj(e)};
  };
  const Mat a1 = reflection(g1);
  const Mat a2 = reflection(g2);
  const Mat c1 = {std::conj(a1[0]), std::conj(a1[1]), std::conj(a1[2]), std::conj(a1[3])};
  const Mat h = {a2[0] * c1[0] + a2[1] * c1[2], a2[0] * c1[1] + a2[1] * c1[3],
                 a2[2] * c1[0] + a2[3] * c1[2], a2[2] * c1[1] + a2[3] * c1[3]};
  const MoebiusTransform product(h[0], h[1]);
  const IsometryInfo info = classify_isometry(product);
  if (info.kind != IsometryClass::hyperbolic || !info.axis) {
    throw Error("common_perpendicular: geodesics cross or are asymptotic");
  }
  const auto f1 = intersect(*info.axis, g1);
  const auto f2 = intersect(*info.axis, g2);
  if (!f1 || !f2) throw Error("common_perpendicular: perpendicular misses an input geodesic");
  return {*info.axis, *f1, *f2, hyp_distance(*f1, *f2)};
}

std::optional<RayHit> ray_crossing(DiskPoint start, BoundaryPoint target, const Geodesic& g) {
  const MoebiusTransform to0 = MoebiusTransform::to_origin(start.z());
  const Geodesic moved = apply(to0, g);
  if (moved.distance_estimate(Complex{}) <= tolerances().on_geodesic) {
    return RayHit{0.0, start};
  }
  const Complex dir = to0.apply(target.z()) / std::abs(to0.apply(target.z()));
  const double k = cos_half_of(moved);
  const double b = (dir * std::conj(moved.mid_direction())).real();
  if (b <= k) return std::nullopt;
  const double r = k / (b + std::sqrt(b * b - k * k));
  const Complex local = r * dir;
  return RayHit{2.0 * std::atanh(r), DiskPoint(mobius_inverse(to0).apply(local))};
}

DiskPoint point_along_ray(DiskPoint start, BoundaryPoint target, double t) {
  const MoebiusTransform to0 = MoebiusTransform::to_origin(start.z());
  const Complex dir = to0.apply(target.z()) / std::abs(to0.apply(target.z()));
  return DiskPoint(mobius_inverse(to0).apply(std::tanh(t / 2.0) * dir));
}

IsometryInfo classify_isometry(const MoebiusTransform& m) {
  const Tolerances& tol = tolerances();
  if (std::abs(m.v()) < tol.identity && std::abs(m.u().imag()) < tol.identity) {
    return {IsometryClass::identity, 0.0, std::nullopt};
  }
  const double tr = std::abs(m.trace());
  if (std::abs(tr - 2.0) <= tol.parabolic_trace) {
    return {IsometryClass::parabolic, 0.0, std::nullopt};
  }
  if (tr < 2.0) return {IsometryClass::elliptic, 0.0, std::nullopt};

  const double re = m.u().real();
  const double root = std::sqrt(re * re - 1.0);
  const Complex num_im(0.0, m.u().imag());
  const Complex z1 = (num_im + root) / std::conj(m.v());
  const Complex z2 = (num_im - root) / std::conj(m.v());
  const bool first_attracting = m.derivative_modulus(z1) < m.derivative_modulus(z2);
  const BoundaryPoint attracting = BoundaryPoint::from_complex(first_attracting ? z1 : z2);
  const BoundaryPoint repelling = BoundaryPoint::from_complex(first_attracting ? z2 : z1);
  return {IsometryClass::hyperbolic, 2.0 * std::acosh(tr / 2.0), Geodesic(attracting, repelling)};
}

// ---------------------------------------------------------------------------
// GeodesicFrame

GeodesicFrame::GeodesicFrame(const Geodesic& g) : origin_(g.nearest_to_origin()) {
  const MoebiusTransform shift = MoebiusTransform::to_origin(origin_.z());
  const Complex f = shift.apply(g.forward().z());
  to_standard_ = MoebiusTransform::rotation(-std::arg(f)) * shift;
  from_standard_ = mobius_inverse(to_standard_);
}

double GeodesicFrame::parameter(DiskPoint z) const {
  return 2.0 * std::atanh(to_standard_.apply(z.z()).real());
}

DiskPoint GeodesicFrame::point_at(double t) const {
  return DiskPoint(from_standard_.apply(Complex(std::tanh(t / 2.0), 0.0)));
}

}  // namespace cuffdim
