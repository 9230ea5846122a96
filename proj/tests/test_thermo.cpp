#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "cuffdim/thermo.hpp"

using namespace cuffdim;

namespace {

const double kLog3 = std::log(3.0);

double word_weight(const CylinderMeasure& mu, const ReducedWord& w) {
  const std::size_t i = lexicographic_rank(w);
  REQUIRE(mu.codes[i] == w.code());
  return mu.weights[i];
}

ReducedWord symbolwise_bar(const ReducedWord& w) {
  std::vector<Symbol> out;
  for (Symbol s : w.symbols()) out.push_back(bar(s));
  return ReducedWord(out);
}

}  // namespace

TEST_CASE("transfer matrices") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  CHECK_THROWS_AS(transfer_matrix(p, 1.6, 3), Error);
  CHECK_THROWS_AS(transfer_matrix(p, -0.1, 3), Error);
  CHECK_THROWS_AS(transfer_matrix(p, 0.5, 0), Error);
  CHECK_THROWS_AS(transfer_matrix(p, 0.5, 11), Error);

  const TransferMatrix zero = transfer_matrix(p, 0.0, 4);
  CHECK(zero.rows() == reduced_word_count(4));
  for (double e : zero.entries) CHECK(e == 1.0);

  const TransferOperator op = transfer_operator(p, 5);
  for (std::size_t i = 0; i < op.states(); ++i) {
    const ReducedWord w = ReducedWord::from_code(op.codes[i], 5);
    for (std::size_t k = 3 * i; k < 3 * i + 3; ++k) {
      const ReducedWord next = ReducedWord::from_code(op.codes[op.successors[k]], 5);
      CHECK(next.prefix(4) == w.shifted());
      CHECK(op.log_weights[k] < 0.0);
    }
  }
  const TransferMatrix m2 = transfer_matrix(op, 0.2), m4 = transfer_matrix(op, 0.4), m6 = transfer_matrix(op, 0.6);
  for (std::size_t k = 0; k < m2.entries.size(); ++k) {
    CHECK(m4.entries[k] < m2.entries[k]);
    CHECK(m6.entries[k] < m4.entries[k]);
  }
}

TEST_CASE("pressure at s = 0 is log 3") {
  for (const CuffLengths c : {CuffLengths{2, 2, 2}, CuffLengths{0.5, 1.0, 7.0}}) {
    const PantsGeometry p = build_pants(c);
    for (int n = 1; n <= 8; ++n) CHECK(std::abs(pressure(p, 0.0, n) - kLog3) < 1e-9);
  }
}

TEST_CASE("pressure is decreasing and convex with one root") {
  for (const CuffLengths c : {CuffLengths{2, 2, 2}, CuffLengths{1, 3, 5}, CuffLengths{0.4, 0.4, 0.4}}) {
    const PantsGeometry p = build_pants(c);
    const TransferOperator op = transfer_operator(p, 6);
    CHECK(pressure(op, 1.0) < 0.0);
    CHECK(pressure(op, 0.3) > pressure(op, 0.6));
    std::vector<double> v;
    for (int i = 0; i <= 10; ++i) v.push_back(pressure(op, i / 10.0));
    for (int i = 1; i <= 10; ++i) CHECK(v[i] < v[i - 1]);
    for (int i = 1; i < 10; ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] > -1e-12);
    int changes = 0;
    double prev = pressure(op, 0.001);
    for (int i = 1; i <= 100; ++i) {
      const double s = std::min(0.999, 0.001 + 0.01 * i);
      const double cur = pressure(op, s);
      if ((prev > 0) != (cur > 0)) ++changes;
      prev = cur;
    }
    CHECK(changes == 1);
  }
}

TEST_CASE("Perron vectors") {
  const PantsGeometry p = build_pants({1.0, 2.0, 3.0});
  const TransferMatrix m = transfer_matrix(p, 0.6, 5);
  const PerronResult r = perron_right(m);
  const PerronResult l = perron_left(m);
  CHECK(r.eigenvalue == doctest::Approx(l.eigenvalue).epsilon(1e-11));
  double sum = 0.0;
  for (double x : r.vector) {
    CHECK(x > 0.0);
    sum += x;
  }
  CHECK(sum == doctest::Approx(1.0));
  // M r = lambda r
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t k = 3 * i; k < 3 * i + 3; ++k) row += m.entries[k] * r.vector[m.columns[k]];
    worst = std::max(worst, std::abs(row - r.eigenvalue * r.vector[i]) / (r.eigenvalue * r.vector[i]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("dimension delta") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  CHECK_THROWS_AS(hausdorff_delta(p, 1e-7), Error);
  const DeltaResult d = hausdorff_delta(p, 1e-4);
  CHECK(d.delta > 0.0);
  CHECK(d.delta < 1.0);
  CHECK(d.refinement_change < 1e-4);
  CHECK(std::abs(d.pressure_residual) < 1e-12);

  // Refinement differences shrink.
  const double r4 = pressure_root(p, 4).root, r6 = pressure_root(p, 6).root, r8 = pressure_root(p, 8).root;
  CHECK(std::abs(r6 - r8) < std::abs(r4 - r6));
  CHECK(std::abs(pressure_root(p, 7).root - pressure_root(p, 9).root) < 5e-3);

  CHECK(hausdorff_delta(build_pants({0.5, 0.5, 0.5}), 1e-3).delta >
        hausdorff_delta(build_pants({6.0, 6.0, 6.0}), 1e-3).delta);
}

TEST_CASE("delta does not depend on the labelling of the cuffs") {
  const double tol = 1e-3;
  const double d123 = hausdorff_delta(build_pants({1, 2, 3}), tol).delta;
  const double d231 = hausdorff_delta(build_pants({2, 3, 1}), tol).delta;
  const double d312 = hausdorff_delta(build_pants({3, 1, 2}), tol).delta;
  CHECK(std::abs(d123 - d231) < 2 * tol);
  CHECK(std::abs(d123 - d312) < 2e-3);
}

TEST_CASE("cover scaling agrees with the pressure root") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  const CoverScalingResult c = cover_scaling_estimate(p, 5, 9);
  const double delta = hausdorff_delta(p, 1e-5).delta;
  CHECK(std::abs(c.estimate - delta) < 0.02);
  MESSAGE("cover scaling " << c.estimate << ", arithmetic-mean slope " << c.first_iterate << ", delta " << delta);
}

TEST_CASE("Gibbs measure") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  const CylinderMeasure flat = gibbs_measure(p, 0.0, 4);
  std::map<Symbol, double> first;
  double total = 0.0;
  for (std::size_t i = 0; i < flat.states(); ++i) {
    first[ReducedWord::from_code(flat.codes[i], 4).front()] += flat.weights[i];
    total += flat.weights[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& [s, w] : first) CHECK(w == doctest::Approx(0.25).epsilon(1e-12));

  const double delta = pressure_root(p, 8).root;
  const CylinderMeasure mu = gibbs_measure(p, delta, 8);
  double sum = 0.0;
  for (double w : mu.weights) sum += w;
  CHECK(std::abs(sum - 1.0) < 1e-12);
  CHECK(stationarity_residual(mu) < 1e-6);
  const double ahlfors = ahlfors_ratio(mu);
  MESSAGE("Ahlfors ratio at depth 8: " << ahlfors);
  CHECK(ahlfors < 50.0);

  // One-step conditional weights stay within a bounded factor of the branch weights.
  double worst = 1.0;
  for (std::size_t k = 0; k < mu.kernel.size(); ++k) {
    const double r = mu.kernel[k] / std::exp(delta * mu.log_weights[k]);
    worst = std::max({worst, r, 1.0 / r});
  }
  MESSAGE("worst conditional-to-branch factor at depth 8: " << worst);
  CHECK(worst < 10.0);
}

TEST_CASE("Gibbs symmetries of the symmetric pants") {
  const PantsGeometry p = build_pants({2.0, 2.0, 2.0});
  std::vector<double> reversal_error;
  for (int n : {4, 6, 8}) {
    const CylinderMeasure mu = gibbs_measure(p, pressure_root(p, n).root, n);
    double bar_err = 0.0, rev_err = 0.0;
    for (std::size_t i = 0; i < mu.states(); ++i) {
      const ReducedWord w = ReducedWord::from_code(mu.codes[i], n);
      const double m = mu.weights[i];
      bar_err = std::max(bar_err, std::abs(word_weight(mu, symbolwise_bar(w)) - m) / m);
      rev_err = std::max(rev_err, std::abs(word_weight(mu, w.inverse()) - m) / m);
    }
    // The reflection z -> -conj(z) realizes the symbolwise bar exactly.
    CHECK(bar_err < 1e-8);
    reversal_error.push_back(rev_err);
  }
  // Time reversal is exact only in the limit; its discretization error decays.
  MESSAGE("inverse-word weight mismatch at depths 4, 6, 8: " << reversal_error[0] << " " << reversal_error[1] << " "
                                                             << reversal_error[2]);
  CHECK(reversal_error[1] < reversal_error[0]);
  CHECK(reversal_error[2] < reversal_error[1]);
  CHECK(reversal_error[2] < 1e-3);
}

TEST_CASE("entropy identity") {
  for (const CuffLengths c : {CuffLengths{2, 2, 2}, CuffLengths{1, 2, 3}, CuffLengths{4, 4, 0.8}}) {
    const PantsGeometry p = build_pants(c);
    const double delta = pressure_root(p, 8).root;
    const EntropyCheck e = entropy_identity_check(p, delta, 8);
    CHECK(e.lyapunov > 0.0);
    CHECK(e.residual < 5e-3);
    CHECK(entropy_identity_check(p, delta + 0.05, 8).residual > 10 * e.residual);
    CHECK(entropy_identity_check(p, delta - 0.05, 8).residual > 10 * e.residual);
  }
}

TEST_CASE("Gibbs words") {
  const PantsGeometry p = build_pants({1.0, 2.0, 3.0});
  const CylinderMeasure mu = gibbs_measure(p, pressure_root(p, 6).root, 6);
  std::mt19937_64 rng(31);
  std::map<Symbol, double> counts;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const ReducedWord w = sample_gibbs_word(mu, 12, rng);
    CHECK(w.size() == 12);
    counts[w.front()] += 1.0 / draws;
  }
  std::map<Symbol, double> expected;
  for (std::size_t i = 0; i < mu.states(); ++i) expected[ReducedWord::from_code(mu.codes[i], 6).front()] += mu.weights[i];
  for (Symbol s : kSymbols) CHECK(std::abs(counts[s] - expected[s]) < 0.02);
  std::mt19937_64 a(5), b(5);
  CHECK(sample_gibbs_word(mu, 30, a) == sample_gibbs_word(mu, 30, b));
}

TEST_CASE("locus") {
  CHECK_THROWS_AS(solve_locus(1.0, 1.0, 0.97, 1e-3, 6), Error);
  CHECK_THROWS_AS(solve_locus(0.0, 1.0, 0.5, 1e-3, 6), Error);
  try {
    solve_locus(20.0, 20.0, 0.9, 1e-3, 6);
    FAIL("expected no bracket");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("scanned delta") != std::string::npos);
  }

  const LocusResult r = solve_locus(1.0, 1.0, 0.5, 1e-3, 6);
  CHECK(std::abs(r.delta - 0.5) < 1e-3);
  CHECK(std::abs(pressure_root(build_pants({1.0, 1.0, r.value}), 8).root - 0.5) < 5e-3);

  const double c0 = 2.7;
  const double target = pressure_root(build_pants({1.5, 2.0, c0}), 6).root;
  const LocusResult back = solve_locus(1.5, 2.0, target, 1e-4, 6);
  CHECK(std::abs(back.value - c0) < 1e-2);
}
