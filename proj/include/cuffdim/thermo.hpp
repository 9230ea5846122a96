#pragma once

// Transfer matrices of the boundary map on depth-n cylinders, pressure,
// the dimension delta as the pressure root, and the Gibbs measure.

#include <cstdint>
#include <random>
#include <vector>

#include "cuffdim/symbolic.hpp"

namespace cuffdim {

inline constexpr int kMaxTransferDepth = 10;

/// Log weights of the depth-n transfer matrix, independent of s. State i is
/// the i-th reduced word of length n in lexicographic order; it has exactly
/// three successors w -> w_1 ... w_{n-1} sigma. The weight of a transition is
/// the log derivative of the inverse branch phi_{bar w_0} at the midpoint of
/// the successor's cylinder (always negative).
struct TransferOperator {
  int depth = 0;
  std::vector<std::uint32_t> codes;       // state words
  std::vector<std::uint32_t> successors;  // 3 per state
  std::vector<double> log_weights;        // 3 per state
  std::vector<double> log_arc_lengths;    // per state

  std::size_t states() const { return codes.size(); }
};

TransferOperator transfer_operator(const PantsGeometry& pants, int n);

/// Sparse matrix with exactly three entries per row.
struct TransferMatrix {
  int depth = 0;
  double s = 0.0;
  std::vector<std::uint32_t> columns;
  std::vector<double> entries;

  std::size_t rows() const { return columns.size() / 3; }
};

/// 0 <= s <= 1.5, 1 <= n <= 10.
TransferMatrix transfer_matrix(const PantsGeometry& pants, double s, int n);
TransferMatrix transfer_matrix(const TransferOperator& op, double s);

struct PerronResult {
  double eigenvalue = 0.0;
  std::vector<double> vector;  // positive, unit l1 norm
  int iterations = 0;
  double residual = 0.0;
};

/// Power iteration from the uniform vector; throws without convergence.
PerronResult perron_right(const TransferMatrix& m);
PerronResult perron_left(const TransferMatrix& m);

double pressure(const PantsGeometry& pants, double s, int n);
double pressure(const TransferOperator& op, double s);

struct RootDiagnostics {
  int depth = 0;
  double root = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double pressure_residual = 0.0;
};

/// Root of s -> pressure(s) on [0.001, 0.999] at one depth.
RootDiagnostics pressure_root(const TransferOperator& op, double tol = 1e-12);
RootDiagnostics pressure_root(const PantsGeometry& pants, int n, double tol = 1e-12);

struct DeltaResult {
  double delta = 0.0;
  int depth_used = 0;
  double pressure_residual = 0.0;
  double refinement_change = 0.0;  // |root_n - root_{n-2}|
  std::vector<RootDiagnostics> per_depth;
};

/// Roots at depths 4, 6, 8, 10 until successive roots differ by less than
/// tol (tol >= 1e-6); the last root is reported.
DeltaResult hausdorff_delta(const PantsGeometry& pants, double tol);

struct CoverScalingResult {
  double estimate = 0.0;
  double first_iterate = 0.0;  // plain arithmetic-mean slope
  int iterations = 0;
  std::vector<int> depths;
  std::vector<double> log_counts;
};

/// Box-counting style estimate from cylinder arcs alone: slope of log N_n
/// against -log M_s(n), where M_s is the power mean of order s of the depth-n
/// arc lengths, iterated to the self-consistent s.
CoverScalingResult cover_scaling_estimate(const PantsGeometry& pants, int n_lo = 5, int n_hi = 9);

/// Weights on depth-n cylinders from the Perron vectors at s, together with
/// the Markov kernel of the Gibbs chain.
struct CylinderMeasure {
  int depth = 0;
  double s = 0.0;
  double eigenvalue = 0.0;
  std::vector<std::uint32_t> codes;
  std::vector<double> weights;
  std::vector<std::uint32_t> successors;  // 3 per state
  std::vector<double> kernel;             // 3 per state, rows sum to 1
  std::vector<double> log_weights;        // log branch derivatives, 3 per state
  std::vector<double> log_arc_lengths;

  std::size_t states() const { return codes.size(); }
};

CylinderMeasure gibbs_measure(const PantsGeometry& pants, double s, int n);
CylinderMeasure gibbs_measure(const TransferOperator& op, double s);

/// max over (n-1)-words v of |sum_t mu(v t) - sum_t mu(t v)|.
double stationarity_residual(const CylinderMeasure& mu);

/// max/min over cylinders of mu(w) / |arc(w)|^s.
double ahlfors_ratio(const CylinderMeasure& mu);

struct EntropyCheck {
  double entropy = 0.0;
  double lyapunov = 0.0;
  double residual = 0.0;  // |h - delta chi| / chi
};

EntropyCheck entropy_identity_check(const PantsGeometry& pants, double delta, int n);

/// Reduced word of the given length drawn from the Gibbs chain.
ReducedWord sample_gibbs_word(const CylinderMeasure& mu, std::size_t length, std::mt19937_64& rng);

struct LocusResult {
  double value = 0.0;  // solved cuff length
  double delta = 0.0;
  int depth = 0;
  std::vector<double> scan_values;
  std::vector<double> scan_deltas;
};

inline constexpr int kLocusDepth = 8;

/// c with |delta(a, b, c) - target| < tol at the given depth.
LocusResult solve_locus(double a, double b, double target, double tol, int depth = kLocusDepth);

/// a with |delta(a, a, a) - target| < tol at the given depth.
LocusResult solve_symmetric_locus(double target, double tol, int depth = kLocusDepth);

}  // namespace cuffdim
