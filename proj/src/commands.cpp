#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "cuffdim/cli.hpp"
#include "cuffdim/projlab.hpp"

namespace cuffdim {

namespace {

constexpr int kExitError = 1;
constexpr int kExitValidation = 3;

struct Outcome {
  Json params = Json::object();
  Json results = Json::object();
  Json residuals = Json::object();
  bool validators_passed = true;
  std::ostream* warnings = nullptr;
};

Json cuffs_json(const CuffLengths& c) { return Json::array({c.a, c.b, c.c}); }

Json cuffs_key(const CuffLengths& c) {
  return Json::array({canonical_parameter(c.a), canonical_parameter(c.b), canonical_parameter(c.c)});
}

std::vector<double> parse_range(const std::string& text, const char* name) {
  if (text.empty()) throw Error(std::string("missing range for ") + name);
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() == 3) {
      const double lo = std::stod(parts[0]);
      const double hi = std::stod(parts[1]);
      const int n = std::stoi(parts[2]);
      if (n < 2 || n > 1000) throw Error("bad count");
      std::vector<double> values;
      for (int i = 0; i < n; ++i) values.push_back(lo + (hi - lo) * i / (n - 1));
      return values;
    }
  } catch (const std::exception&) {
  }
  throw Error(std::string("range for ") + name + " must be x or lo:hi:n (2 <= n <= 1000)");
}

SymbolSequence parse_sequence(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return SymbolSequence{ReducedWord::parse(text), {}};
  if (text.back() != ')' || open + 2 > text.size() - 1) throw Error("sequence must be PREFIX or PREFIX(PERIOD)");
  const ReducedWord prefix = ReducedWord::parse(text.substr(0, open));
  const ReducedWord period = ReducedWord::parse(text.substr(open + 1, text.size() - open - 2));
  if (!period.cyclically_reduced()) throw Error("period must be cyclically reduced");
  std::vector<Symbol> joined = prefix.symbols();
  joined.insert(joined.end(), period.symbols().begin(), period.symbols().end());
  (void)ReducedWord(std::move(joined));  // throws if prefix and period do not join
  return SymbolSequence{prefix, period};
}

std::string sequence_text(const SymbolSequence& seq) {
  return seq.periodic() ? seq.prefix.str() + "(" + seq.period.str() + ")" : seq.prefix.str();
}

std::ofstream open_output(const std::string& path, bool binary = false) {
  if (path.empty()) throw Error("--out is required for this command");
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error("cannot open output file " + path);
  return out;
}

PantsGeometry validated_pants(const CuffLengths& cuffs, Outcome& o) {
  PantsGeometry pants = build_pants(cuffs);
  const ValidationReport report = validate_pants(pants);
  if (!report.passed()) {
    o.validators_passed = false;
    Json failed = Json::array();
    for (const ValidationCheck& c : report.checks) {
      if (!c.passed) failed.push_back(c.name);
    }
    o.results["failed_checks"] = failed;
  }
  return pants;
}

void run_delta(const RunConfig& cfg, Outcome& o) {
  o.params = {{"cuffs", cuffs_json(cfg.cuffs)}, {"tol", cfg.tol}};
  validated_pants(cfg.cuffs, o);
  Ledger ledger(Ledger::default_path(), o.warnings);
  const Json key = cuffs_key(cfg.cuffs);
  if (cfg.use_ledger) {
    if (auto hit = ledger.lookup("delta", key)) {
      const Json& r = (*hit)["results"];
      if (r["refinement_change"].get<double>() < cfg.tol || r["depth_used"].get<int>() >= kMaxTransferDepth) {
        o.results.update(r);
        o.residuals = (*hit)["residuals"];
        return;
      }
    }
  }
  const DeltaResult d = hausdorff_delta(build_pants(cfg.cuffs), cfg.tol);
  Json r = {{"delta", d.delta},
            {"depth_used", d.depth_used},
            {"pressure_residual", d.pressure_residual},
            {"refinement_change", d.refinement_change},
            {"converged", d.refinement_change < cfg.tol}};
  Json res = {{"pressure_residual", d.pressure_residual}, {"refinement_change", d.refinement_change}};
  if (cfg.use_ledger) ledger.append("delta", key, d.depth_used, r, res);
  o.results.update(r);
  o.residuals = res;
}

void run_delta_scan(const RunConfig& cfg, Outcome& o) {
  const auto as = parse_range(cfg.a_range, "a");
  const auto bs = parse_range(cfg.b_range, "b");
  const auto cs = parse_range(cfg.c_range, "c");
  o.params = {{"a", cfg.a_range}, {"b", cfg.b_range}, {"c", cfg.c_range}, {"depth", cfg.depth}};
  std::ofstream out = open_output(cfg.out);
  out << "a,b,c,depth,delta,pressure_residual,wall_ms\n";
  Ledger ledger(Ledger::default_path(), o.warnings);
  double lo = INFINITY, hi = -INFINITY, worst = 0.0;
  std::size_t rows = 0;
  char line[256];
  for (double a : as) {
    for (double b : bs) {
      for (double c : cs) {
        const auto t0 = std::chrono::steady_clock::now();
        const CuffLengths cuffs{a, b, c};
        check_cuffs(cuffs);
        Json key = cuffs_key(cuffs);
        key.push_back(cfg.depth);
        double root = 0.0, residual = 0.0;
        std::optional<Json> hit = cfg.use_ledger ? ledger.lookup("root", key) : std::nullopt;
        if (hit) {
          root = (*hit)["results"]["delta"].get<double>();
          residual = (*hit)["results"]["pressure_residual"].get<double>();
        } else {
          const RootDiagnostics r = pressure_root(build_pants(cuffs), cfg.depth);
          root = r.root;
          residual = r.pressure_residual;
          if (cfg.use_ledger) {
            ledger.append("root", key, cfg.depth, {{"delta", root}, {"pressure_residual", residual}},
                          {{"pressure_residual", residual}});
          }
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.3f\n", a, b, c, cfg.depth, root,
                      residual, ms);
        out << line;
        lo = std::min(lo, root);
        hi = std::max(hi, root);
        worst = std::max(worst, residual);
        ++rows;
      }
    }
  }
  o.results = {{"rows", rows}, {"min_delta", lo}, {"max_delta", hi}, {"csv", cfg.out}};
  o.residuals = {{"max_pressure_residual", worst}};
}

void run_locus(const RunConfig& cfg, Outcome& o) {
  o.params = {{"target", cfg.target}, {"tol", cfg.tol}, {"depth", cfg.depth}};
  LocusResult r;
  CuffLengths solved;
  if (cfg.locus_a || cfg.locus_b) {
    if (!cfg.locus_a || !cfg.locus_b) throw Error("locus: give both --a and --b, or neither");
    o.params["a"] = *cfg.locus_a;
    o.params["b"] = *cfg.locus_b;
    r = solve_locus(*cfg.locus_a, *cfg.locus_b, cfg.target, cfg.tol, cfg.depth);
    solved = {*cfg.locus_a, *cfg.locus_b, r.value};
  } else {
    r = solve_symmetric_locus(cfg.target, cfg.tol, cfg.depth);
    solved = {r.value, r.value, r.value};
  }
  const int verify_depth = std::min(cfg.depth + 2, kMaxTransferDepth);
  const double verified = pressure_root(build_pants(solved), verify_depth).root;
  o.results = {{"value", r.value},         {"cuffs", cuffs_json(solved)},     {"delta", r.delta},
               {"depth", r.depth},         {"verify_depth", verify_depth},    {"verify_delta", verified},
               {"scan_values", r.scan_values}, {"scan_deltas", r.scan_deltas}};
  o.residuals = {{"target_error", std::abs(r.delta - cfg.target)}, {"verify_error", std::abs(verified - cfg.target)}};
}

void run_octagon(const RunConfig& cfg, Outcome& o) {
  o.params = {{"cuffs", cuffs_json(cfg.cuffs)}, {"out", cfg.out}};
  std::ofstream out = open_output(cfg.out);
  const PantsGeometry pants = build_pants(cfg.cuffs);
  const ValidationReport report = validate_pants(pants);
  out << octagon_svg(pants, &report);
  o.validators_passed = report.passed();
  o.results = {{"passed", report.passed()},
               {"sigma", pants.sigma()},
               {"seam_distance", pants.seam_distance()},
               {"min_arc_gap", report.min_arc_gap}};
  for (const ValidationCheck& c : report.checks) o.residuals[c.name] = c.residual;
}

void run_cover(const RunConfig& cfg, Outcome& o) {
  o.params = {{"cuffs", cuffs_json(cfg.cuffs)}, {"depth", cfg.depth}, {"out", cfg.out}};
  std::ofstream out = open_output(cfg.out);
  const PantsGeometry pants = validated_pants(cfg.cuffs, o);
  const CylinderCover cover = cylinder_cover(pants, cfg.depth);
  write_cover_csv(out, cover);
  double total = 0.0, smallest = INFINITY;
  for (const Arc& arc : cover.arcs()) {
    total += arc.length();
    smallest = std::min(smallest, arc.length());
  }
  o.results = {{"count", cover.size()}, {"total_length", total}, {"min_length", smallest}};
}

void run_trace(const RunConfig& cfg, Outcome& o) {
  GeodesicPair pair;
  if (!cfg.word.empty()) {
    if (!cfg.xi.empty() || !cfg.eta.empty()) throw Error("trace: give --word or --xi/--eta, not both");
    pair = periodic_pair(ReducedWord::parse(cfg.word));
  } else {
    pair = {parse_sequence(cfg.xi), parse_sequence(cfg.eta)};
  }
  check_pair(pair);
  o.params = {{"cuffs", cuffs_json(cfg.cuffs)}, {"xi", sequence_text(pair.xi)}, {"eta", sequence_text(pair.eta)},
              {"length", cfg.length},         {"depth", cfg.realize_depth}};
  const PantsGeometry pants = validated_pants(cfg.cuffs, o);
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.length), pair.xi.known());
  const TraceResult t = cutting_sequence_trace(pants, pair, static_cast<int>(n), cfg.realize_depth);
  o.results = {{"word", t.word.str()},
               {"matches_xi", t.word == pair.xi.first(n)},
               {"escaped", t.escaped},
               {"escape_side", t.escape_side ? Json(side_name(*t.escape_side)) : Json(nullptr)},
               {"vertex_ties", t.vertex_ties},
               {"symbolic_mismatch", t.symbolic_mismatch},
               {"suspension_time", suspension_time(pants, pair, cfg.realize_depth)}};
}

void run_favard(const RunConfig& cfg, Outcome& o) {
  o.params = {{"fixture", cfg.fixture}, {"depths", Json::array({cfg.depth_lo, cfg.depth_hi})}, {"grid", cfg.grid}};
  std::function<BoxCover(int)> make;
  std::optional<PantsGeometry> pants;
  if (cfg.fixture == "omega") {
    o.params["cuffs"] = cuffs_json(cfg.cuffs);
    o.params["restrict"] = cfg.restrict_pairs;
    pants = validated_pants(cfg.cuffs, o);
    make = [&](int n) { return product_cover(*pants, n, cfg.restrict_pairs); };
  } else if (cfg.fixture == "four-corner") {
    make = four_corner_cover;
  } else if (cfg.fixture == "segment") {
    make = segment_cover;
  } else {
    throw Error("favard: fixture must be omega, four-corner or segment");
  }
  ProjectionProfile profile;
  // One cover in memory at a time.
  for (int n = cfg.depth_lo; n <= cfg.depth_hi; ++n) {
    const ProjectionProfile one = favard_profile({make(n)}, cfg.grid);
    profile.lambdas = one.lambdas;
    profile.depths.push_back(n);
    profile.lengths.push_back(one.lengths[0]);
    profile.favard.push_back(one.favard[0]);
  }
  if (!cfg.out.empty()) {
    std::ofstream out = open_output(cfg.out);
    write_profile_csv(out, profile);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < profile.favard.size(); ++i) decreasing = decreasing && profile.favard[i] < profile.favard[i - 1];
  o.results = {{"depths", profile.depths},
               {"favard", profile.favard},
               {"ratio_last_first", profile.favard.back() / profile.favard.front()},
               {"strictly_decreasing", decreasing}};
}

Json report_json(const TransversalityReport& r) {
  Json levels = Json::array();
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    levels.push_back({{"c_t", r.levels[k]},
                      {"samples", r.level_samples[k]},
                      {"margin", r.level_samples[k] ? Json(r.level_margins[k]) : Json(nullptr)},
                      {"passed", static_cast<bool>(r.level_passed[k])}});
  }
  return {{"family", r.family},
          {"reduction", "l = m = 1: (dT/dlambda)^2 >= C_T^2 on |T| <= C_T"},
          {"passed", r.passed},
          {"c_t", r.c_t},
          {"c1", r.c1},
          {"c2", r.c2},
          {"c_l", r.c_l},
          {"lambda_grid", r.lambda_grid},
          {"points", r.points},
          {"separation", r.separation},
          {"pairs_used", r.pairs_used},
          {"pairs_excluded", r.pairs_excluded},
          {"report_tolerance", r.report_tolerance},
          {"consistency_residual", r.consistency_residual},
          {"levels", levels}};
}

void run_certify(const RunConfig& cfg, Outcome& o) {
  TransversalFamilySpec fam;
  if (cfg.family == "directions") {
    fam = direction_family();
  } else if (cfg.family == "constant") {
    fam = constant_family();
  } else {
    throw Error("certify: family must be directions or constant");
  }
  const std::vector<Point2> points = default_certification_points();
  double diameter = 0.0;
  for (const Point2& x : points) {
    for (const Point2& y : points) diameter = std::max(diameter, std::hypot(x[0] - y[0], x[1] - y[1]));
  }
  const double sep = cfg.separation.value_or(std::ldexp(diameter, -10));
  o.params = {{"family", cfg.family}, {"grid", cfg.grid}, {"separation", sep}, {"sample", "four-corner-3"}};
  const TransversalityReport r = transversality_certify(fam, points, cfg.grid, sep);
  o.results = report_json(r);
  o.residuals = {{"consistency_residual", r.consistency_residual}};
  o.validators_passed = r.passed;
  if (!cfg.out.empty()) {
    std::ofstream out = open_output(cfg.out);
    out << json_line(o.results) << '\n';
  }
}

void run_sample_cs(const RunConfig& cfg, Outcome& o) {
  o.params = {{"cuffs", cuffs_json(cfg.cuffs)}, {"count", cfg.count}, {"seed", cfg.seed}, {"depth", cfg.depth},
              {"scales", Json::array({cfg.k_min, cfg.k_max})}};
  const PantsGeometry pants = validated_pants(cfg.cuffs, o);
  const TransferOperator op = transfer_operator(pants, cfg.depth);
  const double delta = pressure_root(op).root;
  const double s = cfg.s.value_or(delta);
  o.params["s"] = s;
  const CylinderMeasure mu = gibbs_measure(op, s);
  const SampleResult sample = sample_complete_geodesic_points(pants, mu, cfg.count, cfg.seed);
  std::size_t outside = 0;
  for (const DiskPoint& p : sample.points) outside += inside_octagon(pants, p) ? 0 : 1;
  if (outside > 0) o.validators_passed = false;
  if (!cfg.out.empty()) write_point_cloud(cfg.out, sample.points);
  const BoxDimensionResult bd = box_dimension(sample.points, cfg.k_min, cfg.k_max);
  Json used = Json::array();
  for (bool u : bd.used) used.push_back(u);
  o.results = {{"delta", delta},
               {"target_dimension", 1.0 + 2.0 * delta},
               {"dimension", bd.estimate},
               {"levels", bd.levels},
               {"log_counts", bd.log_counts},
               {"used", used},
               {"attempts", sample.attempts},
               {"misses", sample.misses},
               {"outside", outside},
               {"ks_statistic", ks_uniform_statistic(sample.time_fractions)}};
  o.residuals = {{"fit_residual", bd.residual}, {"dimension_error", std::abs(bd.estimate - (1.0 + 2.0 * delta))}};
}

const std::map<std::string, void (*)(const RunConfig&, Outcome&)>& commands() {
  static const std::map<std::string, void (*)(const RunConfig&, Outcome&)> table{
      {"delta", run_delta},   {"delta-scan", run_delta_scan}, {"locus", run_locus},
      {"octagon", run_octagon}, {"cover", run_cover},         {"trace", run_trace},
      {"favard", run_favard}, {"certify", run_certify},       {"sample-cs", run_sample_cs}};
  return table;
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  if (!commands().count(cfg.command)) throw Error("unknown command '" + cfg.command + "'");
  const std::string& c = cfg.command;
  if (c == "delta" || c == "octagon" || c == "cover" || c == "trace" || c == "sample-cs" ||
      (c == "favard" && cfg.fixture == "omega")) {
    check_cuffs(cfg.cuffs);
  }
  if (c == "delta" && !(cfg.tol >= 1e-6)) throw Error("--tol must be at least 1e-6");
  if (c == "locus" && !(cfg.tol > 0.0)) throw Error("--tol must be positive");
  if ((c == "delta-scan" || c == "locus") && (cfg.depth < 1 || cfg.depth > kMaxTransferDepth)) {
    throw Error("--depth must be in [1, 10]");
  }
  if (c == "sample-cs" && (cfg.depth < 4 || cfg.depth > kMaxTransferDepth)) throw Error("--depth must be in [4, 10]");
  if (c == "cover" && (cfg.depth < 1 || cfg.depth > kMaxCoverDepth)) throw Error("--depth must be in [1, 14]");
  if (c == "trace" && (cfg.length < 0 || cfg.length > kMaxTraceLength)) throw Error("--length must be in [0, 200]");
  if (c == "trace" && (cfg.realize_depth < 1 || cfg.realize_depth > kMaxCoverDepth)) {
    throw Error("--realize-depth must be in [1, 14]");
  }
  if (c == "favard") {
    if (cfg.depth_lo < 0 || cfg.depth_lo > cfg.depth_hi) throw Error("--depths must be lo:hi with 0 <= lo <= hi");
    if (cfg.fixture == "omega" && (cfg.depth_lo < 1 || cfg.depth_hi > kMaxProductDepth)) {
      throw Error("--depths must lie in [1, 9] for the omega fixture");
    }
    if (cfg.grid < 16) throw Error("--grid must be at least 16");
  }
  if (c == "certify" && cfg.grid < 32) throw Error("--grid must be at least 32");
  if (c == "certify" && cfg.separation && !(*cfg.separation > 0.0)) throw Error("--sep must be positive");
  if (c == "sample-cs") {
    if (cfg.count < 100'000 || cfg.count > 10'000'000) throw Error("--count must be in [1e5, 1e7]");
    if (cfg.s && !(*cfg.s >= 0.0 && *cfg.s <= 1.5)) throw Error("--s must be in [0, 1.5]");
  }
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  o.warnings = &err;
  try {
    validate_config(cfg);
    commands().at(cfg.command)(cfg, o);
  } catch (const std::exception& e) {
    err << json_line({{"command", cfg.command}, {"error", e.what()}}) << '\n';
    return kExitError;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  Json summary = {{"command", cfg.command},
                  {"params", o.params},
                  {"results", o.results},
                  {"residuals", o.residuals},
                  {"wall_ms", std::round(ms * 1000.0) / 1000.0},
                  {"version", version_string()}};
  out << json_line(summary) << '\n';
  return o.validators_passed ? 0 : kExitValidation;
}

}  // namespace cuffdim
