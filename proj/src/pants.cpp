#include "cuffdim/pants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace cuffdim {

void check_cuffs(const CuffLengths& cuffs) {
  for (double x : {cuffs.a, cuffs.b, cuffs.c}) {
    if (!(x > 0.0) || !(x <= kMaxCuffLength)) {
      throw Error("cuff length out of range (0, 20]: " + std::to_string(x));
    }
  }
}

const char* side_name(SideLabel label) {
  switch (label) {
    case SideLabel::alpha: return "alpha";
    case SideLabel::b: return "b";
    case SideLabel::alpha_bar: return "alpha_bar";
    case SideLabel::c1: return "c1";
    case SideLabel::beta_bar: return "beta_bar";
    case SideLabel::a: return "a";
    case SideLabel::beta: return "beta";
    case SideLabel::c2: return "c2";
  }
  return "?";
}

std::optional<Symbol> side_symbol(SideLabel label) {
  switch (label) {
    case SideLabel::alpha: return Symbol::alpha;
    case SideLabel::alpha_bar: return Symbol::alpha_bar;
    case SideLabel::beta: return Symbol::beta;
    case SideLabel::beta_bar: return Symbol::beta_bar;
    default: return std::nullopt;
  }
}

SideLabel side_of(Symbol s) {
  switch (s) {
    case Symbol::alpha: return SideLabel::alpha;
    case Symbol::alpha_bar: return SideLabel::alpha_bar;
    case Symbol::beta: return SideLabel::beta;
    case Symbol::beta_bar: return SideLabel::beta_bar;
  }
  return SideLabel::alpha;
}

bool OctagonSide::contains(DiskPoint z) const {
  const double slack = tolerances().segment_membership * std::max(1.0, length());
  return hyp_distance(start, z) + hyp_distance(z, end) - length() <= slack;
}

Arc::Arc(BoundaryPoint lo, BoundaryPoint hi) : lo_(lo), hi_(hi) {
  const double len = length();
  if (!(len > 0.0)) throw Error("Arc: empty arc");
}

Arc Arc::mapped(const MoebiusTransform& m) const {
  return Arc(BoundaryPoint::from_complex(m.apply(lo_.z())), BoundaryPoint::from_complex(m.apply(hi_.z())));
}

const OctagonSide& PantsGeometry::side(SideLabel label) const {
  return octagon_[static_cast<int>(label)];
}

std::array<DiskPoint, 8> PantsGeometry::vertices() const {
  std::array<DiskPoint, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = octagon_[i].end;
  return out;
}

PantsGeometry PantsGeometry::with_generators(const MoebiusTransform& g_alpha,
                                             const MoebiusTransform& g_beta) const {
  PantsGeometry copy = *this;
  copy.generators_ = {g_alpha, mobius_inverse(g_alpha), g_beta, mobius_inverse(g_beta)};
  return copy;
}

namespace {

struct Candidate {
  double seam = 0.0;
  bool found = false;
};

// Largest root of |tr(g_alpha g_beta(d)^sigma)| = 2 cosh(c/2) in d.
Candidate solve_seam(const CuffLengths& cuffs, int sigma) {
  const MoebiusTransform g_alpha = MoebiusTransform::translation(cuffs.b, 0.0);
  const MoebiusTransform t_a = MoebiusTransform::translation(cuffs.a, 0.0);
  const double target = 2.0 * std::cosh(cuffs.c / 2.0);
  auto residual = [&](double d) {
    const MoebiusTransform k = MoebiusTransform::translation(d, kPi / 2.0);
    MoebiusTransform g_beta = k * t_a * mobius_inverse(k);
    if (sigma < 0) g_beta = mobius_inverse(g_beta);
    return std::abs((g_alpha * g_beta).trace()) - target;
  };

  // Past this level |tr| grows monotonically in d, so every root lies below.
  const double clear = target + 4.0 * std::cosh(cuffs.a / 2.0) * std::cosh(cuffs.b / 2.0);
  double hi = 1.0;
  while (residual(hi) + target <= clear) {
    hi *= 2.0;
    if (hi > 200.0) return {};
  }
  // |tr| dips below the target on a window that can be very narrow when the
  // cuffs are long; sample densely from the top, then polish the minimum.
  constexpr int kSamples = 2000;
  const double step = hi / kSamples;
  double lo = 0.0;
  bool bracketed = false;
  double best_d = hi;
  double best_r = residual(hi);
  for (int i = kSamples - 1; i >= 1; --i) {
    const double d = step * i;
    const double r = residual(d);
    if (r < 0.0) {
      lo = d;
      hi = d + step;
      bracketed = true;
      break;
    }
    if (r < best_r) {
      best_r = r;
      best_d = d;
    }
  }
  if (!bracketed) {
    const auto m = boost::math::tools::brent_find_minima(
        residual, std::max(best_d - step, step * 1e-3), std::min(best_d + step, hi), 52);
    if (!(m.second < 0.0)) return {};
    lo = m.first;
    hi = std::min(best_d + step, hi);
  }
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(
      residual, lo, hi, boost::math::tools::eps_tolerance<double>(52), iterations);
  return {0.5 * (root.first + root.second), true};
}

}  // namespace

PantsGeometry build_pants(const CuffLengths& cuffs) {
  check_cuffs(cuffs);
  const double a = cuffs.a;
  const double b = cuffs.b;
  const double c = cuffs.c;

  const double xb = std::tanh(b / 4.0);
  const double xa = std::tanh(a / 4.0);
  const double hb = std::acos(std::tanh(b / 2.0));
  const double ha = std::acos(std::tanh(a / 2.0));
  const MoebiusTransform g_alpha = MoebiusTransform::translation(b, 0.0);
  const MoebiusTransform t_a = MoebiusTransform::translation(a, 0.0);

  const Geodesic axis_b(BoundaryPoint(0.0), BoundaryPoint(kPi));
  const Geodesic geo_alpha(BoundaryPoint(kPi - hb), BoundaryPoint(kPi + hb));
  const Geodesic geo_alpha_bar(BoundaryPoint(-hb), BoundaryPoint(hb));

  std::string failure = "no sign sigma admits a solution of |tr(g_alpha g_beta^sigma)| = 2 cosh(c/2)";
  for (int sigma : {-1, 1}) {
    const Candidate cand = solve_seam(cuffs, sigma);
    if (!cand.found) continue;
    const double d = cand.seam;
    const MoebiusTransform k = MoebiusTransform::translation(d, kPi / 2.0);
    const MoebiusTransform g_beta = k * t_a * mobius_inverse(k);
    const Geodesic axis_a = apply(k, axis_b);
    const Geodesic beta_bar_geo = apply(k, Geodesic(BoundaryPoint(-ha), BoundaryPoint(ha)));
    const Geodesic beta_geo = apply(k, Geodesic(BoundaryPoint(kPi - ha), BoundaryPoint(kPi + ha)));

    std::optional<Perpendicular> c1;
    std::optional<Perpendicular> c2;
    try {
      c1 = common_perpendicular(geo_alpha_bar, beta_bar_geo);
      c2 = common_perpendicular(beta_geo, geo_alpha);
    } catch (const Error&) {
      failure = "seam sides cross for sigma = " + std::to_string(sigma);
      continue;
    }
    if (std::abs(c1->distance - c / 2.0) > 1e-6 || std::abs(c2->distance - c / 2.0) > 1e-6) {
      failure = "c-sides do not have length c/2 for sigma = " + std::to_string(sigma);
      continue;
    }

    const DiskPoint v0(Complex(-xb, 0.0));
    const DiskPoint v1(Complex(xb, 0.0));
    const DiskPoint v2 = c1->foot1;
    const DiskPoint v3 = c1->foot2;
    const DiskPoint v4(k.apply(Complex(xa, 0.0)));
    const DiskPoint v5(k.apply(Complex(-xa, 0.0)));
    const DiskPoint v6 = c2->foot1;
    const DiskPoint v7 = c2->foot2;

    PantsGeometry pants(std::array<OctagonSide, 8>{
        OctagonSide{SideLabel::alpha, geo_alpha, v7, v0},
        OctagonSide{SideLabel::b, axis_b, v0, v1},
        OctagonSide{SideLabel::alpha_bar, geo_alpha_bar, v1, v2},
        OctagonSide{SideLabel::c1, c1->geodesic, v2, v3},
        OctagonSide{SideLabel::beta_bar, beta_bar_geo, v3, v4},
        OctagonSide{SideLabel::a, axis_a, v4, v5},
        OctagonSide{SideLabel::beta, beta_geo, v5, v6},
        OctagonSide{SideLabel::c2, c2->geodesic, v6, v7},
    });
    pants.cuffs_ = cuffs;
    pants.generators_ = {g_alpha, mobius_inverse(g_alpha), g_beta, mobius_inverse(g_beta)};
    pants.sigma_ = sigma;
    pants.seam_distance_ = d;
    pants.arcs_ = {
        Arc(BoundaryPoint(kPi - hb), BoundaryPoint(kPi + hb)),
        Arc(BoundaryPoint(-hb), BoundaryPoint(hb)),
        Arc(BoundaryPoint(kPi - ha), BoundaryPoint(kPi + ha)).mapped(k),
        Arc(BoundaryPoint(-ha), BoundaryPoint(ha)).mapped(k),
    };
    pants.interior_ = DiskPoint(Complex(0.0, std::tanh(d / 4.0)));

    if (!(min_arc_gap(pants) > 0.0)) {
      failure = "Schottky arcs overlap for sigma = " + std::to_string(sigma);
      continue;
    }
    const Arc& abar = pants.arc(Symbol::alpha_bar);
    double best = kTwoPi;
    for (Symbol s : kSymbols) {
      if (s == Symbol::alpha_bar) continue;
      best = std::min(best, ccw_distance(abar.hi().theta(), pants.arc(s).lo().theta()));
    }
    pants.chart_offset_ = normalize_angle(abar.hi().theta() + best / 2.0);
    return pants;
  }
  throw Error("build_pants: " + failure);
}

const std::array<OctagonSide, 8>& octagon_of(const PantsGeometry& pants) { return pants.octagon(); }

std::array<Arc, 4> schottky_arcs(const PantsGeometry& pants) {
  return {pants.arc(Symbol::alpha), pants.arc(Symbol::alpha_bar), pants.arc(Symbol::beta),
          pants.arc(Symbol::beta_bar)};
}

double min_arc_gap(const PantsGeometry& pants) {
  std::array<Arc, 4> arcs = schottky_arcs(pants);
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& x, const Arc& y) { return x.lo().theta() < y.lo().theta(); });
  double gap = kTwoPi;
  for (int i = 0; i < 4; ++i) {
    const Arc& cur = arcs[i];
    const Arc& next = arcs[(i + 1) % 4];
    const double to_next = ccw_distance(cur.lo().theta(), next.lo().theta());
    const double g = to_next - cur.length();
    gap = std::min(gap, g);
  }
  return gap;
}

std::optional<Symbol> arc_symbol(const PantsGeometry& pants, BoundaryPoint t) {
  for (Symbol s : kSymbols) {
    if (pants.arc(s).contains(t)) return s;
  }
  return std::nullopt;
}

ExpansionStep expansion_map_step(const PantsGeometry& pants, BoundaryPoint t) {
  const auto s = arc_symbol(pants, t);
  if (!s) return {std::nullopt, t, 1.0};
  const BoundaryImage img = boundary_action(pants.generator(*s), t);
  return {s, img.point, img.derivative};
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("no validation check named " + name);
}

namespace {

double angular_gap(BoundaryPoint x, BoundaryPoint y) {
  const double d = ccw_distance(x.theta(), y.theta());
  return std::min(d, kTwoPi - d);
}

}  // namespace

ValidationReport validate_pants(const PantsGeometry& pants) {
  const Tolerances& tol = tolerances();
  ValidationReport report;
  auto add = [&](std::string name, double residual, double limit) {
    report.checks.push_back({std::move(name), residual <= limit, residual, limit});
  };

  const auto& oct = pants.octagon();
  double angle_res = 0.0;
  double closure_res = 0.0;
  double ortho_res = 0.0;
  for (int i = 0; i < 8; ++i) {
    const OctagonSide& cur = oct[i];
    const OctagonSide& next = oct[(i + 1) % 8];
    angle_res = std::max(angle_res, crossing_angle_cos(cur.geodesic, next.geodesic, cur.end));
    closure_res = std::max(closure_res, std::abs(cur.end.z() - next.start.z()));
    closure_res = std::max(closure_res, cur.geodesic.distance_estimate(cur.start.z()));
    closure_res = std::max(closure_res, cur.geodesic.distance_estimate(cur.end.z()));
    ortho_res = std::max(ortho_res, cur.geodesic.orthogonality_residual());
  }
  add("right_angles", angle_res, tol.right_angle);
  add("vertex_closure", closure_res, 1e-10);
  add("side_orthogonality", ortho_res, tol.orthogonality);

  const CuffLengths& cuffs = pants.cuffs();
  const double len_res = std::max({std::abs(pants.side(SideLabel::a).length() - cuffs.a),
                                   std::abs(pants.side(SideLabel::b).length() - cuffs.b),
                                   std::abs(pants.side(SideLabel::c1).length() - cuffs.c / 2.0),
                                   std::abs(pants.side(SideLabel::c2).length() - cuffs.c / 2.0)});
  add("side_lengths", len_res, tol.side_length);

  report.min_arc_gap = min_arc_gap(pants);
  add("arcs_disjoint", report.min_arc_gap > 0.0 ? 0.0 : -report.min_arc_gap, 0.0);

  // phi_tau maps side tau onto side bar(tau), reversing the segment direction.
  double glue_res = 0.0;
  for (Symbol s : {Symbol::alpha, Symbol::beta}) {
    const OctagonSide& from = pants.side(side_of(s));
    const OctagonSide& to = pants.side(side_of(bar(s)));
    const MoebiusTransform& g = pants.generator(s);
    glue_res = std::max(glue_res, hyp_distance(apply(g, from.start), to.end));
    glue_res = std::max(glue_res, hyp_distance(apply(g, from.end), to.start));
  }
  add("gluing", glue_res, tol.gluing);

  // phi_tau(T) is the complement of the interior of T-bar.
  double arc_map_res = 0.0;
  for (Symbol s : kSymbols) {
    const Arc img = pants.arc(s).mapped(pants.generator(s));
    arc_map_res = std::max(arc_map_res, angular_gap(img.lo(), pants.arc(bar(s)).hi()));
    arc_map_res = std::max(arc_map_res, angular_gap(img.hi(), pants.arc(bar(s)).lo()));
  }
  add("arc_images", arc_map_res, tol.gluing);

  const MoebiusTransform beta_sigma =
      pants.sigma() < 0 ? mobius_inverse(pants.g_beta()) : pants.g_beta();
  const double l_alpha = classify_isometry(pants.g_alpha()).translation_length;
  const double l_beta = classify_isometry(pants.g_beta()).translation_length;
  const double l_prod = classify_isometry(pants.g_alpha() * beta_sigma).translation_length;
  const double cuff_res = std::max(
      {std::abs(l_alpha - cuffs.b), std::abs(l_beta - cuffs.a), std::abs(l_prod - cuffs.c)});
  add("cuff_recovery", cuff_res, tol.cuff_recovery);

  // Fricke: tr A^2 + tr B^2 + tr AB^2 - trA trB trAB - 2 = tr [A,B].
  const MoebiusTransform& ga = pants.g_alpha();
  const MoebiusTransform& gb = pants.g_beta();
  const double ta = ga.trace();
  const double tb = gb.trace();
  const double tab = (ga * gb).trace();
  const double tcomm = (ga * gb * mobius_inverse(ga) * mobius_inverse(gb)).trace();
  const double fricke = ta * ta + tb * tb + tab * tab - ta * tb * tab - 2.0 - tcomm;
  const double fricke_scale = std::max(1.0, ta * tb * std::abs(tab));
  add("fricke_identity", std::abs(fricke) / fricke_scale, 1e-8);

  double expand_res = 0.0;
  for (Symbol s : kSymbols) {
    const double dmid = boundary_action(pants.generator(s), pants.arc(s).midpoint()).derivative;
    expand_res = std::max(expand_res, dmid > 1.0 ? 0.0 : 1.0 - dmid + 1e-300);
  }
  add("expanding", expand_res, 0.0);
  return report;
}

}  // namespace cuffdim
