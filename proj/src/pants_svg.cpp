#include <cstdio>
#include <sstream>

#include "cuffdim/pants.hpp"

namespace cuffdim {

namespace {

// Unit disk mapped to a 400x400 canvas; y flipped so angles run counterclockwise.
constexpr double kScale = 180.0;
constexpr double kCenter = 200.0;

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string px(Complex z) { return fixed3(kCenter + kScale * z.real()) + "," + fixed3(kCenter - kScale * z.imag()); }

// Polyline approximation of the geodesic segment between two disk points.
std::string segment_path(const OctagonSide& side) {
  std::ostringstream out;
  const GeodesicFrame frame(side.geodesic);
  const double t0 = frame.parameter(side.start);
  const double t1 = frame.parameter(side.end);
  constexpr int kSteps = 48;
  for (int i = 0; i <= kSteps; ++i) {
    const double t = t0 + (t1 - t0) * i / kSteps;
    out << (i == 0 ? "M" : " L") << px(frame.point_at(t).z());
  }
  return out.str();
}

std::string arc_path(const Arc& arc) {
  std::ostringstream out;
  constexpr int kSteps = 32;
  for (int i = 0; i <= kSteps; ++i) {
    const double th = arc.lo().theta() + arc.length() * i / kSteps;
    out << (i == 0 ? "M" : " L") << px(std::polar(1.0, th));
  }
  return out.str();
}

const char* arc_name(Symbol s) {
  constexpr const char* names[] = {"A", "A_bar", "B", "B_bar"};
  return names[index_of(s)];
}

}  // namespace

std::string octagon_svg(const PantsGeometry& pants, const ValidationReport* report) {
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"400\" height=\"400\" "
         "viewBox=\"0 0 400 400\">\n";
  const CuffLengths& c = pants.cuffs();
  char head[160];
  std::snprintf(head, sizeof head, "<!-- cuffs a=%.17g b=%.17g c=%.17g sigma=%d -->\n", c.a, c.b, c.c,
                pants.sigma());
  svg << head;
  if (report != nullptr) {
    svg << "<!-- validation: " << (report->passed() ? "pass" : "FAIL") << " -->\n";
    for (const auto& check : report->checks) {
      char line[200];
      std::snprintf(line, sizeof line, "<!-- check %s %s residual=%.3e tolerance=%.3e -->\n",
                    check.name.c_str(), check.passed ? "pass" : "fail", check.residual, check.tolerance);
      svg << line;
    }
  }
  svg << "<circle cx=\"200.000\" cy=\"200.000\" r=\"180.000\" fill=\"none\" stroke=\"#999\"/>\n";

  for (Symbol s : kSymbols) {
    svg << "<path id=\"arc-" << arc_name(s) << "\" d=\"" << arc_path(pants.arc(s))
        << "\" fill=\"none\" stroke=\"#c33\" stroke-width=\"4\"/>\n";
    const Complex at = 1.06 * pants.arc(s).midpoint().z();
    svg << "<text x=\"" << fixed3(kCenter + kScale * at.real()) << "\" y=\""
        << fixed3(kCenter - kScale * at.imag()) << "\" font-size=\"11\">" << arc_name(s) << "</text>\n";
  }

  for (const OctagonSide& side : pants.octagon()) {
    svg << "<path id=\"side-" << side_name(side.label) << "\" d=\"" << segment_path(side)
        << "\" fill=\"none\" stroke=\"#236\" stroke-width=\"1.5\"/>\n";
    const GeodesicFrame frame(side.geodesic);
    const double tm = 0.5 * (frame.parameter(side.start) + frame.parameter(side.end));
    const Complex mid = frame.point_at(tm).z();
    svg << "<text x=\"" << fixed3(kCenter + kScale * mid.real() + 3.0) << "\" y=\""
        << fixed3(kCenter - kScale * mid.imag() - 3.0) << "\" font-size=\"10\">" << side_name(side.label)
        << "</text>\n";
  }

  int i = 0;
  for (const DiskPoint& v : pants.vertices()) {
    svg << "<circle id=\"V" << i++ << "\" cx=\"" << fixed3(kCenter + kScale * v.z().real()) << "\" cy=\""
        << fixed3(kCenter - kScale * v.z().imag()) << "\" r=\"2.000\" fill=\"#000\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cuffdim
