#pragma once

// Moebius algebra and hyperbolic geometry in the Poincare disk.
//
// Orientation-preserving isometries are stored in SU(1,1) form
//   z -> (u z + v) / (conj(v) z + conj(u)),  |u|^2 - |v|^2 = 1,
// with the overall sign fixed by Re(u) > 0, or Re(u) == 0 and Im(u) > 0.

#include <complex>
#include <numbers>
#include <optional>

#include "cuffdim/tolerances.hpp"

namespace cuffdim {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any finite angle into [0, 2*pi).
double normalize_angle(double theta);

/// Counterclockwise angular distance from `from` to `to`, in [0, 2*pi).
double ccw_distance(double from, double to);

/// A point of the circle at infinity.
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double theta) : theta_(normalize_angle(theta)) {}
  static BoundaryPoint from_complex(Complex z);

  double theta() const { return theta_; }
  Complex z() const { return std::polar(1.0, theta_); }

 private:
  double theta_ = 0.0;
};

/// A point strictly inside the unit disk.
class DiskPoint {
 public:
  DiskPoint() = default;
  explicit DiskPoint(Complex z);

  Complex z() const { return z_; }

 private:
  Complex z_{0.0, 0.0};
};

class MoebiusTransform {
 public:
  /// Identity.
  MoebiusTransform() = default;
  /// Renormalizes (u, v) to unit determinant; throws if |u|^2 - |v|^2 <= 0.
  MoebiusTransform(Complex u, Complex v);

  static MoebiusTransform rotation(double psi);
  /// Hyperbolic translation of length `length` along the diameter through
  /// angle `direction`, moving points toward that boundary point.
  static MoebiusTransform translation(double length, double direction);
  /// The translation sending `z` to the origin along the diameter through z.
  static MoebiusTransform to_origin(Complex z);
  /// For coefficients already of unit determinant up to rounding (products of
  /// valid transforms); renormalizes only where that is numerically meaningful.
  static MoebiusTransform unimodular(Complex u, Complex v);

  Complex u() const { return u_; }
  Complex v() const { return v_; }

  Complex apply(Complex z) const;
  /// |M'(z)|, the conformal stretch factor at z.
  double derivative_modulus(Complex z) const;
  double trace() const { return 2.0 * u_.real(); }
  double determinant() const { return std::norm(u_) - std::norm(v_); }

 private:
  void fix_sign();

  Complex u_{1.0, 0.0};
  Complex v_{0.0, 0.0};
};

/// Action of M after N.
MoebiusTransform mobius_compose(const MoebiusTransform& m, const MoebiusTransform& n);
MoebiusTransform mobius_inverse(const MoebiusTransform& m);

inline MoebiusTransform operator*(const MoebiusTransform& m, const MoebiusTransform& n) {
  return mobius_compose(m, n);
}

/// Coefficient distance up to the global sign of (u, v).
double coefficient_distance(const MoebiusTransform& m, const MoebiusTransform& n);

struct BoundaryImage {
  BoundaryPoint point;
  double derivative;  // angular derivative, always positive
};

BoundaryImage boundary_action(const MoebiusTransform& m, BoundaryPoint t);
/// log of the angular derivative; stays finite where the derivative underflows.
double log_boundary_derivative(const MoebiusTransform& m, BoundaryPoint t);
DiskPoint apply(const MoebiusTransform& m, DiskPoint z);

/// Complete geodesic with ideal endpoints. The endpoints keep the order they
/// were given in (`forward` then `backward`); geometric predicates do not
/// depend on that order.
///
/// Internally the geodesic is the zero set of
///   f(z) = (1 + |z|^2) cos(h) - 2 Re(z e^{-i m}),
/// where m and h are the midpoint and half-width of the short endpoint arc.
/// Diameters have cos(h) = 0; their m is chosen so that f > 0 on the side
/// containing e^{i(p0 + pi/2)}, p0 being the endpoint angle in [0, pi).
class Geodesic {
 public:
  Geodesic(BoundaryPoint forward, BoundaryPoint backward);

  BoundaryPoint forward() const { return forward_; }
  BoundaryPoint backward() const { return backward_; }

  bool is_diameter() const { return diameter_; }
  /// Euclidean center and radius of the supporting circle (not for diameters).
  Complex center() const;
  double radius() const;
  double half_width() const { return half_width_; }
  Complex mid_direction() const { return mid_direction_; }

  /// f(z) from the class comment; positive on the "+1" side.
  double side_value(Complex z) const;
  /// First-order Euclidean distance from z to the geodesic.
  double distance_estimate(Complex z) const;
  /// Largest deviation from a right angle where the arc meets the circle.
  double orthogonality_residual() const;
  /// Euclidean point of the geodesic nearest to the origin.
  Complex nearest_to_origin() const;
  /// True if both geodesics have the same endpoint set.
  bool same_as(const Geodesic& other, double tol = 1e-12) const;

 private:
  BoundaryPoint forward_;
  BoundaryPoint backward_;
  bool diameter_ = false;
  double half_width_ = 0.0;
  double cos_half_ = 0.0;
  Complex mid_direction_{1.0, 0.0};
};

Geodesic geodesic_from_endpoints(BoundaryPoint p, BoundaryPoint q);
Geodesic apply(const MoebiusTransform& m, const Geodesic& g);

/// -1, 0 or +1; +1 is the side containing the origin (see Geodesic for the
/// convention when the geodesic is a diameter).
int signed_side(const Geodesic& g, DiskPoint z);

double hyp_distance(DiskPoint z1, DiskPoint z2);

/// Transversal intersection point, or nothing for disjoint, asymptotic or
/// coincident geodesics.
std::optional<DiskPoint> intersect(const Geodesic& g1, const Geodesic& g2);

/// |cos| of the angle between two geodesics at a common point; 0 means a
/// right angle.
double crossing_angle_cos(const Geodesic& g1, const Geodesic& g2, DiskPoint at);

struct Perpendicular {
  Geodesic geodesic;
  DiskPoint foot1;
  DiskPoint foot2;
  double distance;
};

/// Throws for crossing or asymptotic geodesics.
Perpendicular common_perpendicular(const Geodesic& g1, const Geodesic& g2);

struct RayHit {
  double t;  // hyperbolic arclength from the start
  DiskPoint point;
};

/// First point where the geodesic ray from `start` toward `target` meets `g`.
std::optional<RayHit> ray_crossing(DiskPoint start, BoundaryPoint target, const Geodesic& g);

/// Point at hyperbolic arclength t from `start` toward `target`.
DiskPoint point_along_ray(DiskPoint start, BoundaryPoint target, double t);

enum class IsometryClass { identity, elliptic, parabolic, hyperbolic };

struct IsometryInfo {
  IsometryClass kind;
  double translation_length;
  std::optional<Geodesic> axis;  // forward = attracting fixed point
};

IsometryInfo classify_isometry(const MoebiusTransform& m);

/// Arclength coordinate along an oriented geodesic: 0 at the point nearest
/// the origin, increasing toward the forward endpoint.
class GeodesicFrame {
 public:
  explicit GeodesicFrame(const Geodesic& g);

  DiskPoint origin() const { return origin_; }
  double parameter(DiskPoint z) const;
  DiskPoint point_at(double t) const;

 private:
  MoebiusTransform to_standard_;    // geodesic -> real diameter, forward -> +1
  MoebiusTransform from_standard_;
  DiskPoint origin_;
};

}  // namespace cuffdim
