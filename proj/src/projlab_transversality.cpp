#include <cmath>

#include "cuffdim/projlab.hpp"

namespace cuffdim {

TransversalFamilySpec direction_family() {
  TransversalFamilySpec fam;
  fam.name = "direction";
  fam.lambda_lo = 0.0;
  fam.lambda_hi = kPi;
  fam.value = [](double l, const Point2& x) { return x[0] * std::cos(l) + x[1] * std::sin(l); };
  fam.d_lambda = [](double l, const Point2& x) { return -x[0] * std::sin(l) + x[1] * std::cos(l); };
  fam.d2_lambda = [](double l, const Point2& x) { return -x[0] * std::cos(l) - x[1] * std::sin(l); };
  return fam;
}

TransversalFamilySpec constant_family() {
  TransversalFamilySpec fam;
  fam.name = "constant";
  fam.lambda_lo = 0.0;
  fam.lambda_hi = kPi;
  fam.value = [](double, const Point2& x) { return x[0]; };
  fam.d_lambda = [](double, const Point2&) { return 0.0; };
  fam.d2_lambda = [](double, const Point2&) { return 0.0; };
  return fam;
}

double family_t(const TransversalFamilySpec& fam, double lambda, const Point2& x, const Point2& y) {
  return (fam.value(lambda, x) - fam.value(lambda, y)) / std::hypot(x[0] - y[0], x[1] - y[1]);
}

double family_consistency_residual(const TransversalFamilySpec& fam) {
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double l = fam.lambda_lo + (fam.lambda_hi - fam.lambda_lo) * (0.05 + 0.9 * i / 8.0);
    for (double px : {0.0, 0.3, 1.0}) {
      for (double py : {0.0, 0.7, 1.0}) {
        const Point2 x{px, py};
        const double d1 = (fam.value(l + h, x) - fam.value(l - h, x)) / (2 * h);
        const double d2 = (fam.d_lambda(l + h, x) - fam.d_lambda(l - h, x)) / (2 * h);
        worst = std::max(worst, std::abs(d1 - fam.d_lambda(l, x)));
        worst = std::max(worst, std::abs(d2 - fam.d2_lambda(l, x)));
      }
    }
  }
  return worst;
}

std::vector<Point2> default_certification_points() {
  std::vector<Point2> points;
  for (const Box& b : four_corner_cover(3).boxes) points.push_back({b.cx(), b.cy()});
  return points;
}

TransversalityReport transversality_certify(const TransversalFamilySpec& fam, const std::vector<Point2>& points,
                                            int lambda_grid, double sep) {
  if (fam.l != 1 || fam.m != 1 || fam.n != 2) {
    throw Error("transversality_certify: only the l = m = 1, n = 2 reduction is implemented");
  }
  if (!fam.value || !fam.d_lambda || !fam.d2_lambda) throw Error("transversality_certify: missing evaluator");
  if (lambda_grid < 32) throw Error("transversality_certify: lambda grid must have at least 32 points");
  if (!(sep > 0.0)) throw Error("transversality_certify: separation must be positive");
  if (points.size() < 2) throw Error("transversality_certify: need at least two points");

  TransversalityReport rep;
  rep.family = fam.name;
  rep.lambda_grid = lambda_grid;
  rep.points = points.size();
  rep.separation = sep;
  rep.report_tolerance = kCertificationTolerance;
  rep.consistency_residual = family_consistency_residual(fam);
  if (!(rep.consistency_residual < 1e-6)) {
    throw Error("transversality_certify: analytic derivatives disagree with finite differences");
  }

  std::vector<double> lambdas(static_cast<std::size_t>(lambda_grid));
  for (int k = 0; k < lambda_grid; ++k) {
    lambdas[static_cast<std::size_t>(k)] = fam.lambda_lo + (fam.lambda_hi - fam.lambda_lo) * (k + 0.5) / lambda_grid;
  }
  for (double l : lambdas) {
    for (const Point2& x : points) {
      rep.c1 = std::max(rep.c1, std::abs(fam.d_lambda(l, x)));
      rep.c2 = std::max(rep.c2, std::abs(fam.d2_lambda(l, x)));
    }
  }

  for (int i = 7; i >= 1; --i) rep.levels.push_back(i / 10.0);
  const std::size_t levels = rep.levels.size();
  rep.level_margins.assign(levels, INFINITY);
  rep.level_samples.assign(levels, 0);

  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Point2& x = points[i];
      const Point2& y = points[j];
      const double dist = std::hypot(x[0] - y[0], x[1] - y[1]);
      if (dist < sep) {
        ++rep.pairs_excluded;
        continue;
      }
      ++rep.pairs_used;
      for (double l : lambdas) {
        const double t = (fam.value(l, x) - fam.value(l, y)) / dist;
        const double dt = (fam.d_lambda(l, x) - fam.d_lambda(l, y)) / dist;
        const double d2t = (fam.d2_lambda(l, x) - fam.d2_lambda(l, y)) / dist;
        rep.c_l = std::max(rep.c_l, std::abs(d2t));
        for (std::size_t k = 0; k < levels; ++k) {
          if (std::abs(t) > rep.levels[k]) continue;
          ++rep.level_samples[k];
          rep.level_margins[k] = std::min(rep.level_margins[k], std::abs(dt) - rep.levels[k]);
        }
      }
    }
  }

  rep.c1_finite = std::isfinite(rep.c1);
  rep.c2_finite = std::isfinite(rep.c2);
  rep.c_l_finite = std::isfinite(rep.c_l);
  for (std::size_t k = 0; k < levels; ++k) {
    // dT * dT^T >= C^2 - tol, evaluated on the worst sample of the sublevel set.
    const double c = rep.levels[k];
    const double worst_dt = rep.level_margins[k] + c;
    const bool ok = rep.level_samples[k] > 0 && worst_dt * worst_dt >= c * c - rep.report_tolerance;
    rep.level_passed.push_back(ok);
    if (ok && !rep.passed) {
      rep.passed = true;
      rep.c_t = c;
    }
  }
  rep.passed = rep.passed && rep.c1_finite && rep.c2_finite && rep.c_l_finite;
  if (!rep.passed) rep.c_t = 0.0;
  return rep;
}

}  // namespace cuffdim
