#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "cuffdim/projlab.hpp"
#include "parallel.hpp"

namespace cuffdim {

namespace {

constexpr std::size_t kMaxSamples = 10'000'000;
constexpr int kAttemptsPerSample = 10;
constexpr double kResolvableArc = 1e-12;

std::mt19937_64 sample_generator(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Longest word whose cylinders stay above double resolution, estimated from
// the smallest per-symbol contraction among the depth-n cylinders of mu.
int realization_depth(const CylinderMeasure& mu) {
  double worst = 0.0;
  for (double l : mu.log_arc_lengths) worst = std::min(worst, l);
  const double per_symbol = worst / mu.depth;
  if (!(per_symbol < 0.0)) return kSampleWordLength;
  const int n = static_cast<int>(std::floor(std::log(kResolvableArc) / per_symbol));
  return std::clamp(n, 2, kSampleWordLength);
}

struct Draw {
  bool hit = false;
  DiskPoint point;
  double fraction = 0.0;
};

Draw draw_once(const PantsGeometry& pants, const CylinderMeasure& mu, int depth, std::mt19937_64& rng) {
  const ReducedWord xi = sample_gibbs_word(mu, static_cast<std::size_t>(depth), rng);
  ReducedWord eta = sample_gibbs_word(mu, static_cast<std::size_t>(depth), rng);
  while (eta.front() == xi.front()) eta = sample_gibbs_word(mu, static_cast<std::size_t>(depth), rng);
  const GeodesicPair pair{SymbolSequence{xi, {}}, SymbolSequence{eta, {}}};
  const Geodesic g = geodesic_from_pair(pants, pair, depth);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const auto crossings = octagon_crossings(pants, g);
  Draw d;
  if (crossings.size() < 2) return d;
  const double entry = crossings.front().t;
  const double length = crossings.back().t - entry;
  if (!(length > tolerances().vertex_tie)) return d;
  d.hit = true;
  d.fraction = u;
  d.point = GeodesicFrame(g).point_at(entry + u * length);
  return d;
}

}  // namespace

SampleResult sample_complete_geodesic_points(const PantsGeometry& pants, const CylinderMeasure& mu,
                                             std::size_t count, std::uint64_t seed) {
  if (mu.depth < 4) throw Error("sample_complete_geodesic_points: measure depth must be at least 4");
  if (count > kMaxSamples) throw Error("sample_complete_geodesic_points: at most 10^7 points");
  const int depth = realization_depth(mu);
  SampleResult out;
  out.points.resize(count);
  out.time_fractions.resize(count);
  std::vector<std::uint8_t> attempts(count, 0);
  detail::parallel_for(count, [&](std::size_t i) {
    std::mt19937_64 rng = sample_generator(seed, i);
    for (int a = 1; a <= kAttemptsPerSample; ++a) {
      const Draw d = draw_once(pants, mu, depth, rng);
      if (d.hit) {
        out.points[i] = d.point;
        out.time_fractions[i] = d.fraction;
        attempts[i] = static_cast<std::uint8_t>(a);
        return;
      }
    }
    throw Error("sample_complete_geodesic_points: attempt cap reached");
  });
  for (std::uint8_t a : attempts) out.attempts += a;
  out.misses = out.attempts - count;
  return out;
}

bool inside_octagon(const PantsGeometry& pants, DiskPoint z, double slack) {
  for (const OctagonSide& side : pants.octagon()) {
    const int inner = signed_side(side.geodesic, pants.interior_point());
    if (signed_side(side.geodesic, z) != inner && side.geodesic.distance_estimate(z.z()) > slack) return false;
  }
  return true;
}

double ks_uniform_statistic(std::vector<double> values) {
  if (values.empty()) throw Error("ks_uniform_statistic: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

BoxDimensionResult box_dimension(const std::vector<DiskPoint>& points, int k_min, int k_max) {
  if (points.size() < 100'000) throw Error("box_dimension: need at least 10^5 points");
  if (k_min < 0 || k_max > 30 || k_max - k_min + 1 < 4) throw Error("box_dimension: need at least 4 dyadic scales");
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const DiskPoint& p : points) {
    x_lo = std::min(x_lo, p.z().real());
    x_hi = std::max(x_hi, p.z().real());
    y_lo = std::min(y_lo, p.z().imag());
    y_hi = std::max(y_hi, p.z().imag());
  }
  const double side = std::max(x_hi - x_lo, y_hi - y_lo);
  if (!(side > 0.0)) throw Error("box_dimension: points are all equal");

  BoxDimensionResult res;
  const double saturation = static_cast<double>(points.size()) / 8.0;
  std::vector<std::uint64_t> keys(points.size());
  for (int k = k_min; k <= k_max; ++k) {
    const double cells = std::ldexp(1.0, k);
    const double eps = side / cells;
    const auto last = static_cast<std::uint64_t>(cells) - 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto ix = std::min(last, static_cast<std::uint64_t>((points[i].z().real() - x_lo) / eps));
      const auto iy = std::min(last, static_cast<std::uint64_t>((points[i].z().imag() - y_lo) / eps));
      keys[i] = (ix << 32) | iy;
    }
    std::sort(keys.begin(), keys.end());
    const auto occupied = static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin());
    res.levels.push_back(k);
    res.log_inv_scales.push_back(-std::log(eps));
    res.log_counts.push_back(std::log(occupied));
    const bool interior = k != k_min && k != k_max;
    res.used.push_back(interior && occupied <= saturation);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    if (!res.used[i]) continue;
    sx += res.log_inv_scales[i];
    sy += res.log_counts[i];
    sxx += res.log_inv_scales[i] * res.log_inv_scales[i];
    sxy += res.log_inv_scales[i] * res.log_counts[i];
    m += 1;
  }
  if (m < 3) throw Error("box_dimension: fewer than 3 usable scales");
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    if (!res.used[i]) continue;
    const double r = res.log_counts[i] - (intercept + slope * res.log_inv_scales[i]);
    ss += r * r;
  }
  res.estimate = slope;
  res.residual = std::sqrt(ss / m);
  return res;
}

namespace {

constexpr char kMagic[8] = {'C', 'S', 'P', 'T', 'S', '0', '0', '1'};

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

double get_le(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_point_cloud(const std::string& path, const std::vector<DiskPoint>& points) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_point_cloud: cannot open " + path);
  out.write(kMagic, 8);
  for (const DiskPoint& p : points) {
    put_le(out, p.z().real());
    put_le(out, p.z().imag());
  }
  if (!out) throw Error("write_point_cloud: write failed for " + path);
}

std::vector<DiskPoint> read_point_cloud(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_point_cloud: cannot open " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 8 || std::memcmp(data.data(), kMagic, 8) != 0) {
    throw Error("read_point_cloud: missing CSPTS001 header in " + path);
  }
  if ((data.size() - 8) % 16 != 0) throw Error("read_point_cloud: truncated file " + path);
  std::vector<DiskPoint> points;
  points.reserve((data.size() - 8) / 16);
  for (std::size_t off = 8; off < data.size(); off += 16) {
    points.emplace_back(Complex(get_le(data.data() + off), get_le(data.data() + off + 8)));
  }
  return points;
}

}  // namespace cuffdim
