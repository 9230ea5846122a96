#include "cuffdim/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <boost/math/tools/toms748_solve.hpp>

namespace cuffdim {

namespace {

struct CylinderPoints {
  std::vector<std::uint32_t> codes;
  std::vector<Complex> lo;
  std::vector<Complex> hi;
  std::vector<double> log_length;
};

double log_chord_arc(Complex lo, Complex hi) {
  const double chord = std::abs(hi - lo);
  return std::log(2.0 * std::asin(std::min(1.0, chord / 2.0)));
}

// Cylinder arcs kept as complex endpoint pairs, which stay meaningful after
// the angular length drops below double resolution: the bisector of two
// nearly equal unit vectors is well conditioned. Lengths below 1e-9 are
// continued through the branch derivative.
CylinderPoints cylinder_points(const PantsGeometry& pants, int n) {
  CylinderPoints cur;
  for (Symbol s : kSymbols) {
    const Arc& arc = pants.arc(s);
    cur.codes.push_back(static_cast<std::uint32_t>(s));
    cur.lo.push_back(arc.lo().z());
    cur.hi.push_back(arc.hi().z());
    cur.log_length.push_back(std::log(arc.length()));
  }
  constexpr double kDirectLengthFloor = 1e-9;
  for (int k = 1; k < n; ++k) {
    CylinderPoints next;
    const std::size_t m = cur.codes.size() * 3;
    next.codes.reserve(m);
    next.lo.reserve(m);
    next.hi.reserve(m);
    next.log_length.reserve(m);
    const int lead_shift = 2 * k;
    for (Symbol s : kSymbols) {
      const MoebiusTransform& g = pants.generator(bar(s));
      const std::uint32_t lead = static_cast<std::uint32_t>(s) << lead_shift;
      for (std::size_t j = 0; j < cur.codes.size(); ++j) {
        if (static_cast<Symbol>(cur.codes[j] >> (lead_shift - 2)) == bar(s)) continue;
        const Complex lo = g.apply(cur.lo[j]);
        const Complex hi = g.apply(cur.hi[j]);
        double log_len = log_chord_arc(lo, hi);
        if (!(log_len > std::log(kDirectLengthFloor))) {
          const Complex mid = (cur.lo[j] + cur.hi[j]) / std::abs(cur.lo[j] + cur.hi[j]);
          log_len = cur.log_length[j] + log_boundary_derivative(g, BoundaryPoint::from_complex(mid));
        }
        next.codes.push_back(lead | cur.codes[j]);
        next.lo.push_back(lo / std::abs(lo));
        next.hi.push_back(hi / std::abs(hi));
        next.log_length.push_back(log_len);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Complex bisector(Complex lo, Complex hi) {
  const Complex sum = lo + hi;
  return sum / std::abs(sum);
}

std::uint32_t successor_code(std::uint32_t code, int n, Symbol sigma) {
  const std::uint32_t mask = n >= 16 ? 0xffffffffu : ((1u << (2 * n)) - 1u);
  return ((code << 2) | static_cast<std::uint32_t>(sigma)) & mask;
}

void check_depth(int n) {
  if (n < 1 || n > kMaxTransferDepth) {
    throw Error("transfer depth must be in [1, 10], got " + std::to_string(n));
  }
}

}  // namespace

TransferOperator transfer_operator(const PantsGeometry& pants, int n) {
  check_depth(n);
  const CylinderPoints pts = cylinder_points(pants, n);
  TransferOperator op;
  op.depth = n;
  op.codes = pts.codes;
  op.log_arc_lengths = pts.log_length;
  const std::size_t count = op.codes.size();
  op.successors.reserve(3 * count);
  op.log_weights.reserve(3 * count);
  for (std::size_t i = 0; i < count; ++i) {
    const ReducedWord w = ReducedWord::from_code(op.codes[i], n);
    const MoebiusTransform& branch = pants.generator(bar(w.front()));
    for (Symbol sigma : kSymbols) {
      if (sigma == bar(w.back())) continue;
      const ReducedWord next = ReducedWord::from_code(successor_code(op.codes[i], n, sigma), n);
      const std::size_t j = lexicographic_rank(next);
      const BoundaryPoint x = BoundaryPoint::from_complex(bisector(pts.lo[j], pts.hi[j]));
      op.successors.push_back(static_cast<std::uint32_t>(j));
      op.log_weights.push_back(log_boundary_derivative(branch, x));
    }
  }
  return op;
}

TransferMatrix transfer_matrix(const TransferOperator& op, double s) {
  if (!(s >= 0.0 && s <= 1.5)) throw Error("transfer_matrix: s must be in [0, 1.5]");
  TransferMatrix m;
  m.depth = op.depth;
  m.s = s;
  m.columns = op.successors;
  m.entries.resize(op.log_weights.size());
  for (std::size_t k = 0; k < op.log_weights.size(); ++k) m.entries[k] = std::exp(s * op.log_weights[k]);
  return m;
}

TransferMatrix transfer_matrix(const PantsGeometry& pants, double s, int n) {
  return transfer_matrix(transfer_operator(pants, n), s);
}

namespace {

template <typename Step>
PerronResult power_iterate(std::size_t n, Step step) {
  const Tolerances& tol = tolerances();
  PerronResult out;
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> w(n);
  // Nearly periodic chains (long cuffs) have a second eigenvalue close to
  // -lambda; if plain iteration stalls, continue on M + mu I with mu ~ lambda.
  constexpr int kPlainSteps = 300;
  double mu = 0.0;
  for (int it = 1; it <= tol.power_iteration_max_steps; ++it) {
    step(v, w);
    if (mu > 0.0) {
      for (std::size_t i = 0; i < n; ++i) w[i] += mu * v[i];
    }
    // Collatz-Wielandt: min and max of (Mv)_i / v_i bracket the Perron root.
    double lo = INFINITY;
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double norm = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    const double lambda = norm - mu;
    if (hi - lo <= tol.power_iteration * lambda) {
      out.eigenvalue = lambda;
      out.vector = std::move(v);
      out.iterations = it;
      out.residual = (hi - lo) / lambda;
      return out;
    }
    if (it == kPlainSteps) mu = lambda;
  }
  throw Error("power iteration did not converge");
}

}  // namespace

PerronResult perron_right(const TransferMatrix& m) {
  return power_iterate(m.rows(), [&](const std::vector<double>& v, std::vector<double>& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t k = 3 * i;
      w[i] = m.entries[k] * v[m.columns[k]] + m.entries[k + 1] * v[m.columns[k + 1]] +
             m.entries[k + 2] * v[m.columns[k + 2]];
    }
  });
}

PerronResult perron_left(const TransferMatrix& m) {
  return power_iterate(m.rows(), [&](const std::vector<double>& v, std::vector<double>& w) {
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t k = 3 * i; k < 3 * i + 3; ++k) w[m.columns[k]] += v[i] * m.entries[k];
    }
  });
}

double pressure(const TransferOperator& op, double s) {
  return std::log(perron_right(transfer_matrix(op, s)).eigenvalue);
}

double pressure(const PantsGeometry& pants, double s, int n) { return pressure(transfer_operator(pants, n), s); }

RootDiagnostics pressure_root(const TransferOperator& op, double tol) {
  constexpr double kLo = 0.001;
  constexpr double kHi = 0.999;
  auto f = [&](double s) { return pressure(op, s); };
  const double f_lo = f(kLo);
  const double f_hi = f(kHi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw Error("pressure has no sign change on [0.001, 0.999] at depth " + std::to_string(op.depth));
  }
  boost::uintmax_t iterations = 100;
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto br = boost::math::tools::toms748_solve(f, kLo, kHi, f_lo, f_hi, done, iterations);
  RootDiagnostics out;
  out.depth = op.depth;
  out.bracket_lo = br.first;
  out.bracket_hi = br.second;
  out.root = 0.5 * (br.first + br.second);
  out.pressure_residual = std::abs(f(out.root));
  return out;
}

RootDiagnostics pressure_root(const PantsGeometry& pants, int n, double tol) {
  return pressure_root(transfer_operator(pants, n), tol);
}

DeltaResult hausdorff_delta(const PantsGeometry& pants, double tol) {
  if (!(tol >= 1e-6)) throw Error("hausdorff_delta: tol must be >= 1e-6");
  DeltaResult out;
  for (int n : {4, 6, 8, 10}) {
    out.per_depth.push_back(pressure_root(pants, n, std::min(1e-10, tol * 1e-3)));
    const RootDiagnostics& last = out.per_depth.back();
    out.delta = last.root;
    out.depth_used = n;
    out.pressure_residual = last.pressure_residual;
    if (out.per_depth.size() >= 2) {
      out.refinement_change = std::abs(last.root - out.per_depth[out.per_depth.size() - 2].root);
      if (out.refinement_change < tol) break;
    }
  }
  return out;
}

CoverScalingResult cover_scaling_estimate(const PantsGeometry& pants, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi <= n_lo + 1) throw Error("cover_scaling_estimate: need at least three depths");
  CoverScalingResult out;
  std::vector<std::vector<double>> log_lengths;
  for (int n = n_lo; n <= n_hi; ++n) {
    const CylinderCover cover = cylinder_cover(pants, n);
    std::vector<double> logs(cover.size());
    for (std::size_t i = 0; i < cover.size(); ++i) logs[i] = std::log(cover.arc(i).length());
    log_lengths.push_back(std::move(logs));
    out.depths.push_back(n);
    out.log_counts.push_back(std::log(static_cast<double>(cover.size())));
  }
  // Slope of log N_n against -log(power mean of order s of the arc lengths).
  auto slope = [&](double s) {
    std::vector<double> x;
    for (const auto& logs : log_lengths) {
      const double top = *std::max_element(logs.begin(), logs.end());
      double acc = 0.0;
      for (double l : logs) acc += std::exp(s * (l - top));
      x.push_back(-(top + std::log(acc / static_cast<double>(logs.size())) / s));
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(out.log_counts.begin(), out.log_counts.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (out.log_counts[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
  };
  double s = slope(1.0);
  out.first_iterate = s;
  out.iterations = 1;
  for (; out.iterations < 200; ++out.iterations) {
    const double next = slope(s);
    const bool settled = std::abs(next - s) < 1e-13;
    s = next;
    if (settled) break;
  }
  out.estimate = s;
  return out;
}

CylinderMeasure gibbs_measure(const TransferOperator& op, double s) {
  const TransferMatrix m = transfer_matrix(op, s);
  const PerronResult right = perron_right(m);
  const PerronResult left = perron_left(m);
  CylinderMeasure mu;
  mu.depth = op.depth;
  mu.s = s;
  mu.eigenvalue = right.eigenvalue;
  mu.codes = op.codes;
  mu.successors = op.successors;
  mu.log_weights = op.log_weights;
  mu.log_arc_lengths = op.log_arc_lengths;
  const std::size_t n = op.states();
  mu.weights.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mu.weights[i] = left.vector[i] * right.vector[i];
    total += mu.weights[i];
  }
  for (double& w : mu.weights) w /= total;
  mu.kernel.resize(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t k = 3 * i; k < 3 * i + 3; ++k) {
      mu.kernel[k] = m.entries[k] * right.vector[m.columns[k]] / (right.eigenvalue * right.vector[i]);
      row += mu.kernel[k];
    }
    for (std::size_t k = 3 * i; k < 3 * i + 3; ++k) mu.kernel[k] /= row;
  }
  return mu;
}

CylinderMeasure gibbs_measure(const PantsGeometry& pants, double s, int n) {
  return gibbs_measure(transfer_operator(pants, n), s);
}

double stationarity_residual(const CylinderMeasure& mu) {
  if (mu.depth == 1) return std::abs(std::accumulate(mu.weights.begin(), mu.weights.end(), 0.0) - 1.0);
  const std::size_t buckets = std::size_t{1} << (2 * (mu.depth - 1));
  const std::uint32_t mask = static_cast<std::uint32_t>(buckets - 1);
  std::vector<double> by_prefix(buckets, 0.0);
  std::vector<double> by_suffix(buckets, 0.0);
  for (std::size_t i = 0; i < mu.states(); ++i) {
    by_prefix[mu.codes[i] >> 2] += mu.weights[i];
    by_suffix[mu.codes[i] & mask] += mu.weights[i];
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < buckets; ++v) worst = std::max(worst, std::abs(by_prefix[v] - by_suffix[v]));
  return worst;
}

double ahlfors_ratio(const CylinderMeasure& mu) {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < mu.states(); ++i) {
    const double log_r = std::log(mu.weights[i]) - mu.s * mu.log_arc_lengths[i];
    lo = std::min(lo, log_r);
    hi = std::max(hi, log_r);
  }
  return std::exp(hi - lo);
}

EntropyCheck entropy_identity_check(const PantsGeometry& pants, double delta, int n) {
  const CylinderMeasure mu = gibbs_measure(pants, delta, n);
  EntropyCheck out;
  for (std::size_t i = 0; i < mu.states(); ++i) {
    for (std::size_t k = 3 * i; k < 3 * i + 3; ++k) {
      const double p = mu.kernel[k];
      if (p > 0.0) out.entropy -= mu.weights[i] * p * std::log(p);
      out.lyapunov -= mu.weights[i] * p * mu.log_weights[k];
    }
  }
  out.residual = std::abs(out.entropy - delta * out.lyapunov) / out.lyapunov;
  return out;
}

ReducedWord sample_gibbs_word(const CylinderMeasure& mu, std::size_t length, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  std::size_t state = mu.states() - 1;
  for (std::size_t i = 0; i < mu.states(); ++i) {
    u -= mu.weights[i];
    if (u < 0.0) {
      state = i;
      break;
    }
  }
  ReducedWord w = ReducedWord::from_code(mu.codes[state], mu.depth);
  if (length <= w.size()) return w.prefix(length);
  while (w.size() < length) {
    double v = unit(rng);
    std::size_t k = 3 * state;
    while (k < 3 * state + 2 && (v -= mu.kernel[k]) >= 0.0) ++k;
    state = mu.successors[k];
    w.push_back(static_cast<Symbol>(mu.codes[state] & 3u));
  }
  return w;
}

namespace {

LocusResult solve_one_parameter(const std::function<CuffLengths(double)>& cuffs_of, double target, double tol,
                                int depth) {
  if (!(target > 0.05 && target < 0.95)) throw Error("locus target must be in (0.05, 0.95)");
  check_depth(depth);
  auto delta_at = [&](double x) { return pressure_root(build_pants(cuffs_of(x)), depth, 1e-12).root; };

  LocusResult out;
  out.depth = depth;
  constexpr int kScan = 8;
  constexpr double kLo = 0.05;
  constexpr double kHi = 20.0;
  for (int i = 0; i < kScan; ++i) {
    const double x = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kScan - 1));
    out.scan_values.push_back(x);
    // Degenerate extremes of the range may not resolve at this depth; they
    // are recorded as NaN and simply cannot bracket.
    double d = NAN;
    try {
      d = delta_at(x);
    } catch (const Error&) {
    }
    out.scan_deltas.push_back(d);
  }
  int bracket = -1;
  for (int i = 0; i + 1 < kScan; ++i) {
    if ((out.scan_deltas[i] - target) * (out.scan_deltas[i + 1] - target) <= 0.0) {
      bracket = i;
      break;
    }
  }
  if (bracket < 0) {
    std::string msg = "no bracket for target " + std::to_string(target) + "; scanned delta:";
    for (double d : out.scan_deltas) msg += " " + std::to_string(d);
    throw Error(msg);
  }
  auto f = [&](double x) { return delta_at(x) - target; };
  const double lo = out.scan_values[bracket];
  const double hi = out.scan_values[bracket + 1];
  boost::uintmax_t iterations = 100;
  auto done = [](double a, double b) { return std::abs(b - a) <= 1e-11 * std::max(1.0, std::abs(a)); };
  const auto br = boost::math::tools::toms748_solve(f, lo, hi, out.scan_deltas[bracket] - target,
                                                    out.scan_deltas[bracket + 1] - target, done, iterations);
  out.value = 0.5 * (br.first + br.second);
  out.delta = delta_at(out.value);
  if (!(std::abs(out.delta - target) < tol)) {
    throw Error("locus solve missed the target: delta = " + std::to_string(out.delta));
  }
  return out;
}

}  // namespace

LocusResult solve_locus(double a, double b, double target, double tol, int depth) {
  check_cuffs({a, b, 1.0});
  return solve_one_parameter([a, b](double c) { return CuffLengths{a, b, c}; }, target, tol, depth);
}

LocusResult solve_symmetric_locus(double target, double tol, int depth) {
  return solve_one_parameter([](double x) { return CuffLengths{x, x, x}; }, target, tol, depth);
}

}  // namespace cuffdim
