#pragma once

// The pair of pants with cuff lengths (a, b, c): generators, the right-angled
// octagon R, the four Schottky arcs and the expanding boundary map.
//
// Canonical placement: the axis of g_alpha is the horizontal diameter with
// attracting fixed point at angle 0, and the common perpendicular of the axes
// of g_alpha and g_beta is the vertical diameter, meeting the first axis at
// the origin. Side alpha is the seam side at x < 0, alpha-bar the one at
// x > 0; beta and beta-bar sit on the same sides along the beta axis.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cuffdim/hyperbolic.hpp"
#include "cuffdim/symbol.hpp"

namespace cuffdim {

struct CuffLengths {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

inline constexpr double kMaxCuffLength = 20.0;

/// Throws unless every cuff lies in (0, 20].
void check_cuffs(const CuffLengths& cuffs);

enum class SideLabel : std::uint8_t { alpha, b, alpha_bar, c1, beta_bar, a, beta, c2 };

const char* side_name(SideLabel label);
/// The glued symbol of a seam side, nothing for cuff sides.
std::optional<Symbol> side_symbol(SideLabel label);
SideLabel side_of(Symbol s);

struct OctagonSide {
  SideLabel label;
  Geodesic geodesic;  // complete extension
  DiskPoint start;
  DiskPoint end;

  double length() const { return hyp_distance(start, end); }
  /// True if z lies on the segment between start and end.
  bool contains(DiskPoint z) const;
};

/// Counterclockwise arc [lo, hi) of the boundary circle.
class Arc {
 public:
  Arc() = default;
  Arc(BoundaryPoint lo, BoundaryPoint hi);

  BoundaryPoint lo() const { return lo_; }
  BoundaryPoint hi() const { return hi_; }
  double length() const { return ccw_distance(lo_.theta(), hi_.theta()); }
  BoundaryPoint midpoint() const { return BoundaryPoint(lo_.theta() + length() / 2.0); }
  /// Half-open membership.
  bool contains(BoundaryPoint t) const { return ccw_distance(lo_.theta(), t.theta()) < length(); }
  /// Image under an orientation preserving circle map.
  Arc mapped(const MoebiusTransform& m) const;

 private:
  BoundaryPoint lo_;
  BoundaryPoint hi_{1.0};
};

class PantsGeometry {
 public:
  const CuffLengths& cuffs() const { return cuffs_; }
  const MoebiusTransform& g_alpha() const { return generators_[0]; }
  const MoebiusTransform& g_beta() const { return generators_[2]; }
  /// phi_tau; phi_{bar tau} is its inverse.
  const MoebiusTransform& generator(Symbol s) const { return generators_[index_of(s)]; }
  /// Sign with l(g_alpha g_beta^sigma) = c.
  int sigma() const { return sigma_; }
  /// Length of the seam joining the a and b cuffs (distance between axes).
  double seam_distance() const { return seam_distance_; }

  /// Sides in the cyclic order alpha, b, alpha-bar, c1, beta-bar, a, beta, c2.
  const std::array<OctagonSide, 8>& octagon() const { return octagon_; }
  const OctagonSide& side(SideLabel label) const;
  /// vertices()[i] is the end of octagon()[i].
  std::array<DiskPoint, 8> vertices() const;
  const Arc& arc(Symbol s) const { return arcs_[index_of(s)]; }
  /// A point strictly inside R (midpoint of the a-b seam).
  DiskPoint interior_point() const { return interior_; }
  /// Angle in the middle of the gap following arc alpha-bar; no cylinder arc
  /// contains it, so it is a safe seam for unrolling the circle.
  double chart_offset() const { return chart_offset_; }

  /// Copy with replaced generators and unchanged octagon; used by validation
  /// negative controls.
  PantsGeometry with_generators(const MoebiusTransform& g_alpha, const MoebiusTransform& g_beta) const;

 private:
  friend PantsGeometry build_pants(const CuffLengths& cuffs);

  CuffLengths cuffs_;
  std::array<MoebiusTransform, 4> generators_;
  int sigma_ = -1;
  double seam_distance_ = 0.0;
  std::array<OctagonSide, 8> octagon_;
  std::array<Arc, 4> arcs_;
  DiskPoint interior_;
  double chart_offset_ = 0.0;

  PantsGeometry(std::array<OctagonSide, 8> octagon) : octagon_(std::move(octagon)) {}
};

PantsGeometry build_pants(const CuffLengths& cuffs);

const std::array<OctagonSide, 8>& octagon_of(const PantsGeometry& pants);

/// A, A-bar, B, B-bar in Symbol order.
std::array<Arc, 4> schottky_arcs(const PantsGeometry& pants);

/// Smallest counterclockwise gap between consecutive Schottky arcs.
double min_arc_gap(const PantsGeometry& pants);

/// Symbol of the arc containing t (half-open arcs), if any.
std::optional<Symbol> arc_symbol(const PantsGeometry& pants, BoundaryPoint t);

struct ExpansionStep {
  std::optional<Symbol> symbol;
  BoundaryPoint image;
  double derivative;
};

ExpansionStep expansion_map_step(const PantsGeometry& pants, BoundaryPoint t);

struct ValidationCheck {
  std::string name;
  bool passed;
  double residual;
  double tolerance;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  double min_arc_gap = 0.0;

  bool passed() const;
  const ValidationCheck& check(const std::string& name) const;
};

ValidationReport validate_pants(const PantsGeometry& pants);

/// SVG 1.1 drawing of the octagon, the Schottky arcs and the vertices in the
/// unit-disk frame, coordinates with 3 decimals. When a report is given its
/// checks are embedded as comments.
std::string octagon_svg(const PantsGeometry& pants, const ValidationReport* report = nullptr);

}  // namespace cuffdim
