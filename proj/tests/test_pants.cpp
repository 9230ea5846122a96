#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cuffdim/pants.hpp"

using namespace cuffdim;

namespace {

double angle_gap(double x, double y) {
  const double d = ccw_distance(x, y);
  return std::min(d, kTwoPi - d);
}

double cross_ratio(BoundaryPoint p1, BoundaryPoint p2, BoundaryPoint p3, BoundaryPoint p4) {
  const Complex z1 = p1.z(), z2 = p2.z(), z3 = p3.z(), z4 = p4.z();
  return std::abs((z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3)));
}

bool same_point_set(BoundaryPoint a1, BoundaryPoint a2, BoundaryPoint b1, BoundaryPoint b2, double tol) {
  return (angle_gap(a1.theta(), b1.theta()) < tol && angle_gap(a2.theta(), b2.theta()) < tol) ||
         (angle_gap(a1.theta(), b2.theta()) < tol && angle_gap(a2.theta(), b1.theta()) < tol);
}

}  // namespace

TEST_CASE("cuff range") {
  CHECK_THROWS_AS(build_pants({0.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(build_pants({1.0, -1.0, 1.0}), Error);
  CHECK_THROWS_AS(build_pants({1.0, 1.0, 20.5}), Error);
  CHECK_NOTHROW(build_pants({1.0, 1.0, 20.0}));
}

TEST_CASE("symmetric pants (2,2,2)") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  const ValidationReport r = validate_pants(p);
  CHECK(r.passed());
  CHECK(p.sigma() == -1);
  // The label symmetry exchanging a and b is an isometry carrying the pair
  // (A, A-bar) to (B, B-bar); cross-ratios are its Moebius-invariant trace.
  const Arc& a = p.arc(Symbol::alpha);
  const Arc& abar = p.arc(Symbol::alpha_bar);
  const Arc& b = p.arc(Symbol::beta);
  const Arc& bbar = p.arc(Symbol::beta_bar);
  CHECK(cross_ratio(a.lo(), a.hi(), abar.lo(), abar.hi()) ==
        doctest::Approx(cross_ratio(b.lo(), b.hi(), bbar.lo(), bbar.hi())).epsilon(1e-10));
  CHECK(p.side(SideLabel::a).length() == doctest::Approx(p.side(SideLabel::b).length()).epsilon(1e-12));
}

TEST_CASE("random cuff triples validate") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.3, 8.0);
  for (int i = 0; i < 50; ++i) {
    const CuffLengths c{u(rng), u(rng), u(rng)};
    const ValidationReport r = validate_pants(build_pants(c));
    INFO("cuffs " << c.a << " " << c.b << " " << c.c);
    CHECK(r.passed());
    CHECK(r.min_arc_gap > 0.0);
  }
}

TEST_CASE("validation on small and unit cuffs") {
  CHECK(validate_pants(build_pants({1.0, 1.0, 1.0})).passed());
  const ValidationReport r = validate_pants(build_pants({0.5, 0.5, 0.5}));
  CHECK(r.passed());
  CHECK(r.min_arc_gap > 0.0);
  CHECK(r.min_arc_gap == doctest::Approx(min_arc_gap(build_pants({0.5, 0.5, 0.5}))));
}

TEST_CASE("octagon layout") {
  const CuffLengths c{1.0, 2.0, 3.0};
  const PantsGeometry p = build_pants(c);
  const auto& sides = octagon_of(p);
  const SideLabel order[8] = {SideLabel::alpha,    SideLabel::b, SideLabel::alpha_bar, SideLabel::c1,
                              SideLabel::beta_bar, SideLabel::a, SideLabel::beta,      SideLabel::c2};
  for (int i = 0; i < 8; ++i) {
    CHECK(sides[i].label == order[i]);
    CHECK(hyp_distance(sides[i].end, sides[(i + 1) % 8].start) < 1e-10);
    CHECK(crossing_angle_cos(sides[i].geodesic, sides[(i + 1) % 8].geodesic, sides[i].end) < 1e-8);
  }
  CHECK(p.side(SideLabel::a).length() == doctest::Approx(c.a).epsilon(1e-10));
  CHECK(p.side(SideLabel::b).length() == doctest::Approx(c.b).epsilon(1e-10));
  CHECK(std::abs(p.side(SideLabel::c1).length() - c.c / 2) < 1e-8);
  CHECK(std::abs(p.side(SideLabel::c2).length() - c.c / 2) < 1e-8);
  // Interior point on the inner side of every side.
  for (const OctagonSide& s : sides) {
    CHECK(signed_side(s.geodesic, p.interior_point()) != 0);
    CHECK(s.contains(s.start));
    CHECK(s.contains(s.end));
  }
}

TEST_CASE("generators glue the seam sides") {
  const PantsGeometry p = build_pants({1.5, 2.5, 3.5});
  // g_alpha carries alpha onto alpha-bar, g_beta carries beta onto beta-bar.
  const OctagonSide& al = p.side(SideLabel::alpha);
  const OctagonSide& alb = p.side(SideLabel::alpha_bar);
  CHECK(hyp_distance(apply(p.g_alpha(), al.start), alb.end) < 1e-9);
  CHECK(hyp_distance(apply(p.g_alpha(), al.end), alb.start) < 1e-9);
  const OctagonSide& be = p.side(SideLabel::beta);
  const OctagonSide& beb = p.side(SideLabel::beta_bar);
  CHECK(hyp_distance(apply(p.g_beta(), be.start), beb.end) < 1e-9);
  CHECK(hyp_distance(apply(p.g_beta(), be.end), beb.start) < 1e-9);
  CHECK(coefficient_distance(p.generator(Symbol::alpha_bar), mobius_inverse(p.g_alpha())) < 1e-15);
  CHECK(coefficient_distance(p.generator(Symbol::beta_bar), mobius_inverse(p.g_beta())) < 1e-15);
}

TEST_CASE("cuff lengths are recovered from the generators") {
  const CuffLengths c{0.7, 3.1, 5.2};
  const PantsGeometry p = build_pants(c);
  CHECK(classify_isometry(p.g_alpha()).translation_length == doctest::Approx(c.b).epsilon(1e-10));
  CHECK(classify_isometry(p.g_beta()).translation_length == doctest::Approx(c.a).epsilon(1e-10));
  const MoebiusTransform gb = p.sigma() > 0 ? p.g_beta() : mobius_inverse(p.g_beta());
  CHECK(classify_isometry(p.g_alpha() * gb).translation_length == doctest::Approx(c.c).epsilon(1e-10));
}

TEST_CASE("Schottky arcs") {
  const PantsGeometry p = build_pants({2.0, 3.0, 4.0});
  const auto arcs = schottky_arcs(p);
  double total = 0.0;
  for (const Arc& a : arcs) total += a.length();
  CHECK(total < kTwoPi);
  CHECK(min_arc_gap(p) > 0.0);

  // The generator of tau maps arc tau onto the closure of the complement of arc bar(tau).
  for (Symbol s : kSymbols) {
    const Arc& from = p.arc(s);
    const Arc& to = p.arc(bar(s));
    const BoundaryPoint lo = boundary_action(p.generator(s), from.lo()).point;
    const BoundaryPoint hi = boundary_action(p.generator(s), from.hi()).point;
    CHECK(same_point_set(lo, hi, to.lo(), to.hi(), 1e-9));
  }

  const IsometryInfo info = classify_isometry(p.g_alpha());
  REQUIRE(info.axis.has_value());
  CHECK(angle_gap(info.axis->forward().theta(), 0.0) < 1e-12);
  CHECK(p.arc(Symbol::alpha).contains(info.axis->backward()));
  CHECK(p.arc(Symbol::alpha_bar).contains(info.axis->forward()));
}

TEST_CASE("expansion map") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  const BoundaryPoint gap(p.chart_offset());
  const ExpansionStep halt = expansion_map_step(p, gap);
  CHECK_FALSE(halt.symbol.has_value());
  CHECK(halt.image.theta() == gap.theta());
  CHECK(halt.derivative == 1.0);

  const BoundaryPoint fixed = classify_isometry(p.g_alpha()).axis->forward();
  const ExpansionStep st = expansion_map_step(p, fixed);
  REQUIRE(st.symbol.has_value());
  CHECK(*st.symbol == Symbol::alpha_bar);
  CHECK(angle_gap(st.image.theta(), fixed.theta()) < 1e-12);
  CHECK(st.derivative > 1.0);

  double margin = INFINITY;
  for (Symbol s : kSymbols) {
    const Arc& arc = p.arc(s);
    for (int k = 0; k < 100; ++k) {
      const BoundaryPoint t(arc.lo().theta() + arc.length() * (k + 0.5) / 100);
      const ExpansionStep e = expansion_map_step(p, t);
      REQUIRE(e.symbol.has_value());
      CHECK(*e.symbol == s);
      margin = std::min(margin, e.derivative - 1.0);
    }
  }
  MESSAGE("expansion margin " << margin);
  CHECK(margin > 0.0);

  // Half-open arcs.
  const Arc& a = p.arc(Symbol::alpha);
  CHECK(arc_symbol(p, a.lo()) == Symbol::alpha);
  CHECK_FALSE(arc_symbol(p, a.hi()).has_value());
}

TEST_CASE("tampered generators fail cuff recovery") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  const PantsGeometry bad = p.with_generators(p.g_alpha(), MoebiusTransform::rotation(1e-3) * p.g_beta());
  const ValidationReport r = validate_pants(bad);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.check("cuff_recovery").passed);
  CHECK(validate_pants(p).check("fricke_identity").residual < 1e-8);
}

TEST_CASE("construction is deterministic") {
  const PantsGeometry p = build_pants({1.1, 2.2, 3.3});
  const PantsGeometry q = build_pants({1.1, 2.2, 3.3});
  CHECK(p.g_alpha().u() == q.g_alpha().u());
  CHECK(p.g_beta().v() == q.g_beta().v());
  CHECK(p.seam_distance() == q.seam_distance());
  for (int i = 0; i < 8; ++i) CHECK(p.vertices()[i].z() == q.vertices()[i].z());
  CHECK(octagon_svg(p) == octagon_svg(q));
}

TEST_CASE("octagon SVG") {
  const PantsGeometry p = build_pants({1.0, 1.0, 1.0});
  const ValidationReport r = validate_pants(p);
  const std::string svg = octagon_svg(p, &r);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  int sides = 0, arcs = 0, checks = 0;
  for (std::size_t pos = 0; (pos = svg.find("id=\"side-", pos)) != std::string::npos; ++pos) ++sides;
  for (std::size_t pos = 0; (pos = svg.find("id=\"arc-", pos)) != std::string::npos; ++pos) ++arcs;
  for (std::size_t pos = 0; (pos = svg.find("<!-- check ", pos)) != std::string::npos; ++pos) ++checks;
  CHECK(sides == 8);
  CHECK(arcs == 4);
  CHECK(checks == static_cast<int>(r.checks.size()));
  CHECK(octagon_svg(p).find("<!-- check") == std::string::npos);
}
