#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "cuffdim/projlab.hpp"
#include "parallel.hpp"

namespace cuffdim {

double chart_coordinate(double theta, double offset) {
  return ccw_distance(offset, theta) / kTwoPi;
}

BoxCover product_cover(const PantsGeometry& pants, int n, bool restrict_pairs) {
  if (n < 1 || n > kMaxProductDepth) throw Error("product_cover: depth must be in [1, 9]");
  const std::size_t words = reduced_word_count(n);
  const std::size_t total = restrict_pairs ? words * words / 4 * 3 : words * words;
  if (total > kMaxBoxes) throw Error("product_cover: cover too large to hold explicitly at this depth");
  const CylinderCover cover = cylinder_cover(pants, n);
  const double offset = pants.chart_offset();
  std::vector<std::pair<double, double>> intervals(cover.size());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const Arc& arc = cover.arc(i);
    const double lo = chart_coordinate(arc.lo().theta(), offset);
    intervals[i] = {lo, lo + arc.length() / kTwoPi};
  }
  const unsigned shift = 2 * static_cast<unsigned>(n - 1);
  BoxCover out;
  out.depth = n;
  out.boxes.reserve(total);
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = 0; j < cover.size(); ++j) {
      if (restrict_pairs && (cover.code(i) >> shift) == (cover.code(j) >> shift)) continue;
      out.boxes.push_back({intervals[i].first, intervals[i].second, intervals[j].first, intervals[j].second,
                           cover.code(i), cover.code(j)});
    }
  }
  return out;
}

BoxCover four_corner_cover(int n) {
  if (n < 0 || n > 10) throw Error("four_corner_cover: depth must be in [0, 10]");
  std::vector<double> corners{0.0};
  double side = 1.0;
  for (int k = 0; k < n; ++k) {
    side /= 4.0;
    std::vector<double> next;
    next.reserve(corners.size() * 2);
    for (double c : corners) {
      next.push_back(c);
      next.push_back(c + 3.0 * side);
    }
    corners = std::move(next);
  }
  BoxCover out;
  out.depth = n;
  out.boxes.reserve(corners.size() * corners.size());
  for (std::size_t i = 0; i < corners.size(); ++i) {
    for (std::size_t j = 0; j < corners.size(); ++j) {
      out.boxes.push_back({corners[i], corners[i] + side, corners[j], corners[j] + side,
                           static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  return out;
}

BoxCover segment_cover(int n) {
  if (n < 0 || n > 10) throw Error("segment_cover: depth must be in [0, 10]");
  const std::size_t count = std::size_t{1} << (2 * n);
  const double w = 1.0 / static_cast<double>(count);
  BoxCover out;
  out.depth = n;
  out.boxes.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double x0 = static_cast<double>(k) * w;
    const double x1 = static_cast<double>(k + 1) * w;
    out.boxes.push_back({x0, x1, 0.25 + 0.5 * x0, 0.25 + 0.5 * x1, static_cast<std::uint32_t>(k), 0});
  }
  return out;
}

double project_cover_length(const BoxCover& cover, double lambda) {
  if (cover.boxes.empty()) return 0.0;
  const double c = std::cos(lambda);
  const double s = std::sin(lambda);
  std::vector<std::pair<double, double>> spans(cover.boxes.size());
  for (std::size_t i = 0; i < cover.boxes.size(); ++i) {
    const Box& b = cover.boxes[i];
    const double px0 = c * b.x0;
    const double px1 = c * b.x1;
    const double py0 = s * b.y0;
    const double py1 = s * b.y1;
    spans[i] = {std::min(px0, px1) + std::min(py0, py1), std::max(px0, px1) + std::max(py0, py1)};
  }
  std::sort(spans.begin(), spans.end());
  double total = 0.0;
  double lo = spans[0].first;
  double hi = spans[0].second;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first > hi) {
      total += hi - lo;
      lo = spans[i].first;
      hi = spans[i].second;
    } else {
      hi = std::max(hi, spans[i].second);
    }
  }
  return total + (hi - lo);
}

namespace {

std::vector<double> lambda_grid(int grid) {
  if (grid < 16) throw Error("favard: lambda grid must have at least 16 points");
  std::vector<double> lambdas(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) lambdas[static_cast<std::size_t>(k)] = kPi * k / grid;
  return lambdas;
}

std::vector<double> lengths_over(const BoxCover& cover, const std::vector<double>& lambdas) {
  std::vector<double> lengths(lambdas.size());
  detail::parallel_for(lambdas.size(), [&](std::size_t k) { lengths[k] = project_cover_length(cover, lambdas[k]); });
  return lengths;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

double favard_estimate(const BoxCover& cover, int grid) {
  return mean(lengths_over(cover, lambda_grid(grid)));
}

ProjectionProfile favard_profile(const std::vector<BoxCover>& covers, int grid) {
  ProjectionProfile profile;
  profile.lambdas = lambda_grid(grid);
  for (const BoxCover& cover : covers) {
    profile.depths.push_back(cover.depth);
    profile.lengths.push_back(lengths_over(cover, profile.lambdas));
    profile.favard.push_back(mean(profile.lengths.back()));
  }
  return profile;
}

void write_profile_csv(std::ostream& out, const ProjectionProfile& profile) {
  out << "depth,lambda,length\n";
  char line[96];
  for (std::size_t d = 0; d < profile.depths.size(); ++d) {
    for (std::size_t k = 0; k < profile.lambdas.size(); ++k) {
      std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", profile.depths[d], profile.lambdas[k],
                    profile.lengths[d][k]);
      out << line;
    }
  }
}

double cone_density(const BoxCover& cover, const Point2& a, double lambda, double s, double r) {
  if (!(s > 0.0 && s < 1.0)) throw Error("cone_density: s must be in (0, 1)");
  if (!(r > 0.0)) throw Error("cone_density: r must be positive");
  const bool inside = std::any_of(cover.boxes.begin(), cover.boxes.end(), [&](const Box& b) {
    return a[0] >= b.x0 && a[0] <= b.x1 && a[1] >= b.y0 && a[1] <= b.y1;
  });
  if (!inside) throw Error("cone_density: point lies outside the cover");
  const double c = std::cos(lambda);
  const double sn = std::sin(lambda);
  double mass = 0.0;
  for (std::size_t i = 0; i < cover.boxes.size(); ++i) {
    const Box& b = cover.boxes[i];
    const double dx = b.cx() - a[0];
    const double dy = b.cy() - a[1];
    const double dist = std::hypot(dx, dy);
    if (!(dist < r)) continue;
    if (std::abs(dx * c + dy * sn) < s * dist) mass += cover.mass(i);
  }
  return mass / (r * s);
}

}  // namespace cuffdim
