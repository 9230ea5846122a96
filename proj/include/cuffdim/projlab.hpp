#pragma once

// Projection experiments on product covers of the limit set, transversality
// certification for parametrized projection families, cone densities, and
// sampling of points on complete geodesics crossing the octagon.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cuffdim/thermo.hpp"

namespace cuffdim {

struct Box {
  double x0, x1, y0, y1;
  std::uint32_t xi_code = 0;
  std::uint32_t eta_code = 0;

  double side() const { return std::max(x1 - x0, y1 - y0); }
  double cx() const { return 0.5 * (x0 + x1); }
  double cy() const { return 0.5 * (y0 + y1); }
};

struct BoxCover {
  int depth = 0;
  std::vector<Box> boxes;
  /// Optional weight per box; empty means the side length of each box.
  std::vector<double> masses;

  double mass(std::size_t i) const { return masses.empty() ? boxes[i].side() : masses[i]; }
};

inline constexpr int kMaxProductDepth = 9;
/// Explicit covers are refused beyond this many boxes (memory).
inline constexpr std::size_t kMaxBoxes = std::size_t{1} << 25;

/// Unit-square chart of the circle: x = ((theta - offset) mod 2 pi) / 2 pi.
double chart_coordinate(double theta, double offset);

/// Boxes arc(w_xi) x arc(w_eta) in chart coordinates over all pairs of
/// depth-n words; with restrict only pairs with different first symbols.
BoxCover product_cover(const PantsGeometry& pants, int n, bool restrict_pairs);

/// Standard four-corner Cantor product at depth n: 4^n squares of side 4^-n.
BoxCover four_corner_cover(int n);

/// Rectifiable control: the segment from (0, 1/4) to (1, 3/4) covered by 4^n
/// boxes of width 4^-n and height 4^-n / 2 along it.
BoxCover segment_cover(int n);

/// Length of the union of the projections of all boxes onto the line with
/// direction angle lambda.
double project_cover_length(const BoxCover& cover, double lambda);

/// Mean of the projected length over lambda_k = k pi / grid, k < grid (the
/// trapezoid rule for a pi-periodic integrand). grid >= 16.
double favard_estimate(const BoxCover& cover, int grid);

struct ProjectionProfile {
  std::vector<int> depths;
  std::vector<double> lambdas;
  std::vector<std::vector<double>> lengths;  // [depth index][lambda index]
  std::vector<double> favard;
};

ProjectionProfile favard_profile(const std::vector<BoxCover>& covers, int grid);

/// CSV rows depth,lambda,length with header.
void write_profile_csv(std::ostream& out, const ProjectionProfile& profile);

using Point2 = std::array<double, 2>;

/// A family P_lambda: R^n -> R^m with parameter in an open box of R^l. The
/// evaluators below are the scalar reference case l = m = 1, n = 2.
struct TransversalFamilySpec {
  std::string name;
  int l = 1;
  int m = 1;
  int n = 2;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::function<double(double, const Point2&)> value;
  std::function<double(double, const Point2&)> d_lambda;
  std::function<double(double, const Point2&)> d2_lambda;
};

/// P_lambda(x) = x1 cos(lambda) + x2 sin(lambda) on [0, pi).
TransversalFamilySpec direction_family();
/// P_lambda(x) = x1, a degenerate family.
TransversalFamilySpec constant_family();

/// T_{x,y}(lambda) = (P_lambda(x) - P_lambda(y)) / |x - y|.
double family_t(const TransversalFamilySpec& fam, double lambda, const Point2& x, const Point2& y);

/// Largest mismatch between central differences and the analytic first and
/// second lambda-derivatives on a probe grid.
double family_consistency_residual(const TransversalFamilySpec& fam);

struct TransversalityReport {
  std::string family;
  int lambda_grid = 0;
  std::size_t points = 0;
  double separation = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_excluded = 0;
  double c1 = 0.0;   // max |d P / d lambda|
  double c2 = 0.0;   // max |d^2 P / d lambda^2|
  double c_l = 0.0;  // max |d^2 T / d lambda^2|
  double c_t = 0.0;  // certified constant, 0 if none
  bool passed = false;
  bool c1_finite = false;
  bool c2_finite = false;
  bool c_l_finite = false;
  std::vector<double> levels;               // candidate C_T values tried
  std::vector<double> level_margins;        // min |dT| - C over |T| <= C
  std::vector<std::size_t> level_samples;   // triples with |T| <= C
  std::vector<bool> level_passed;
  double report_tolerance = 0.0;
  double consistency_residual = 0.0;  // finite difference vs analytic derivative
};

inline constexpr double kCertificationTolerance = 1e-12;

/// For l = m = 1 the determinant condition reads (dT/dlambda)^2 >= C_T^2 on
/// the sublevel set |T| <= C_T; levels 0.7, 0.6, ..., 0.1 are tried in order
/// and the first that holds at every sampled triple (and is not vacuous) is
/// certified. Pairs closer than sep are excluded. Throws on inconsistent
/// evaluators, lambda_grid < 32, or a family other than l = m = 1, n = 2.
TransversalityReport transversality_certify(const TransversalFamilySpec& fam, const std::vector<Point2>& points,
                                            int lambda_grid, double sep);

/// Default point sample: the 64 box centers of the four-corner fixture at depth 3.
std::vector<Point2> default_certification_points();

/// (r s)^-1 times the total mass of boxes whose centers lie in
/// X(a, r, lambda, s) = {x : |P(x) - P(a)| < s |x - a|, |x - a| < r}.
double cone_density(const BoxCover& cover, const Point2& a, double lambda, double s, double r);

struct SampleResult {
  std::vector<DiskPoint> points;
  std::size_t attempts = 0;
  std::size_t misses = 0;
  std::vector<double> time_fractions;  // u / l per emitted point
};

/// Word lengths drawn for each endpoint and the cylinder depth of realization.
inline constexpr int kSampleWordLength = 14;

/// Points of complete geodesics with Gibbs-distributed endpoint words
/// (xi_0 != eta_0), placed uniformly in flow time along the chord inside R.
/// Sample i draws from its own generator seeded by (seed, i).
SampleResult sample_complete_geodesic_points(const PantsGeometry& pants, const CylinderMeasure& mu,
                                             std::size_t count, std::uint64_t seed);

/// True if z is on the interior side of every octagon side, or within slack
/// (Euclidean, first order) of that side.
bool inside_octagon(const PantsGeometry& pants, DiskPoint z, double slack = 1e-9);

/// Kolmogorov-Smirnov distance of the values to the uniform law on [0, 1).
double ks_uniform_statistic(std::vector<double> values);

struct BoxDimensionResult {
  double estimate = 0.0;
  double residual = 0.0;  // rms of the fit
  std::vector<int> levels;
  std::vector<double> log_inv_scales;
  std::vector<double> log_counts;
  std::vector<bool> used;
};

/// Slope of log(occupied boxes) against -log(eps) for eps = D 2^-k,
/// k in [k_min, k_max], D the bounding-box side. The coarsest and finest
/// levels are dropped, as are levels where the points stop resolving the set
/// (more than points / 8 boxes occupied). Throws with fewer than three
/// usable levels.
BoxDimensionResult box_dimension(const std::vector<DiskPoint>& points, int k_min = 3, int k_max = 10);

/// Little-endian float64 (x, y) pairs after the 8-byte magic "CSPTS001".
void write_point_cloud(const std::string& path, const std::vector<DiskPoint>& points);
std::vector<DiskPoint> read_point_cloud(const std::string& path);

}  // namespace cuffdim
