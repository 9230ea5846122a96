#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cuffdim/cli.hpp"

namespace {

cuffdim::CuffLengths parse_cuffs(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  double v[3];
  int n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) throw CLI::ValidationError("--cuffs", "expected a,b,c");
    v[n++] = std::stod(part);
  }
  if (n != 3) throw CLI::ValidationError("--cuffs", "expected a,b,c");
  return {v[0], v[1], v[2]};
}

void parse_depths(const std::string& text, cuffdim::RunConfig& cfg) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    cfg.depth_lo = cfg.depth_hi = std::stoi(text);
  } else {
    cfg.depth_lo = std::stoi(text.substr(0, colon));
    cfg.depth_hi = std::stoi(text.substr(colon + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairs of pants, limit-set dimension and projection experiments"};
  app.set_version_flag("--version", std::string(cuffdim::version_string()));
  app.require_subcommand(1);

  cuffdim::RunConfig cfg;
  std::string cuffs = "2,2,2";
  std::string depths = "2:6";
  double a = 0.0, b = 0.0, s = 0.0, sep = 0.0;
  bool unrestricted = false, no_ledger = false;

  auto add_cuffs = [&](CLI::App* sub) { sub->add_option("--cuffs", cuffs, "cuff lengths a,b,c")->capture_default_str(); };
  auto add_out = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--out", cfg.out, "output file");
    if (required) opt->required();
  };

  auto* delta = app.add_subcommand("delta", "dimension delta of one pants");
  add_cuffs(delta);
  delta->add_option("--tol", cfg.tol, "refinement tolerance (>= 1e-6)")->capture_default_str();
  delta->add_flag("--no-ledger", no_ledger, "bypass the result ledger");

  auto* scan = app.add_subcommand("delta-scan", "delta over a grid of cuff triples (CSV)");
  scan->add_option("--a", cfg.a_range, "x or lo:hi:n")->required();
  scan->add_option("--b", cfg.b_range, "x or lo:hi:n")->required();
  scan->add_option("--c", cfg.c_range, "x or lo:hi:n")->required();
  scan->add_option("--depth", cfg.depth, "transfer depth")->capture_default_str();
  scan->add_flag("--no-ledger", no_ledger, "bypass the result ledger");
  add_out(scan, true);

  auto* locus = app.add_subcommand("locus", "cuff length with prescribed delta");
  locus->add_option("--target", cfg.target, "target delta")->capture_default_str();
  locus->add_option("--tol", cfg.tol, "tolerance on delta")->capture_default_str();
  locus->add_option("--depth", cfg.depth, "transfer depth")->capture_default_str();
  auto* la = locus->add_option("--a", a, "fixed cuff a (solve for c)");
  auto* lb = locus->add_option("--b", b, "fixed cuff b (solve for c)");

  auto* octagon = app.add_subcommand("octagon", "SVG of the octagon with validation comments");
  add_cuffs(octagon);
  add_out(octagon, true);

  auto* cover = app.add_subcommand("cover", "cylinder arcs of one depth (CSV)");
  add_cuffs(cover);
  cover->add_option("--depth", cfg.depth, "word length")->capture_default_str();
  add_out(cover, true);

  auto* trace = app.add_subcommand("trace", "cutting sequence of a geodesic given by endpoint words");
  add_cuffs(trace);
  trace->add_option("--xi", cfg.xi, "forward word, PREFIX or PREFIX(PERIOD)");
  trace->add_option("--eta", cfg.eta, "backward word, PREFIX or PREFIX(PERIOD)");
  trace->add_option("--word", cfg.word, "periodic cutting sequence");
  trace->add_option("--length", cfg.length, "symbols to trace")->capture_default_str();
  trace->add_option("--realize-depth", cfg.realize_depth, "cylinder depth for endpoints")->capture_default_str();

  auto* favard = app.add_subcommand("favard", "projected lengths and Favard averages (CSV)");
  add_cuffs(favard);
  favard->add_option("--fixture", cfg.fixture, "omega, four-corner or segment")->capture_default_str();
  favard->add_option("--depths", depths, "lo:hi")->capture_default_str();
  favard->add_option("--grid", cfg.grid, "lambda grid size")->capture_default_str();
  favard->add_flag("--unrestricted", unrestricted, "keep pairs with equal first symbols");
  add_out(favard, false);

  auto* certify = app.add_subcommand("certify", "transversality certificate (JSON)");
  certify->add_option("--family", cfg.family, "directions or constant")->capture_default_str();
  certify->add_option("--grid", cfg.grid, "lambda grid size")->capture_default_str();
  auto* sep_opt = certify->add_option("--sep", sep, "pair separation floor");
  add_out(certify, false);

  auto* sample = app.add_subcommand("sample-cs", "points of complete geodesics and their box dimension");
  add_cuffs(sample);
  sample->add_option("--count", cfg.count, "number of points")->capture_default_str();
  sample->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sample->add_option("--depth", cfg.depth, "Gibbs measure depth")->capture_default_str();
  auto* s_opt = sample->add_option("--s", s, "Gibbs exponent (default delta)");
  sample->add_option("--kmin", cfg.k_min, "coarsest dyadic level")->capture_default_str();
  sample->add_option("--kmax", cfg.k_max, "finest dyadic level")->capture_default_str();
  add_out(sample, false);

  try {
    app.parse(argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.cuffs = parse_cuffs(cuffs);
    parse_depths(depths, cfg);
    if (*la) cfg.locus_a = a;
    if (*lb) cfg.locus_b = b;
    if (*sep_opt) cfg.separation = sep;
    if (*s_opt) cfg.s = s;
    cfg.restrict_pairs = !unrestricted;
    cfg.use_ledger = !no_ledger;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << cuffdim::json_line({{"error", e.what()}}) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << cuffdim::json_line({{"error", e.what()}}) << '\n';
    return 2;
  }
  return cuffdim::run_command(cfg, std::cout, std::cerr);
}
