#include <doctest.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cuffdim/cli.hpp"

#ifndef CUFFDIM_CLI_PATH
#error "CUFFDIM_CLI_PATH must name the command-line binary"
#endif

using namespace cuffdim;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
  double ms = 0.0;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Sandbox {
 public:
  Sandbox() {
    dir_ = fs::temp_directory_path() / ("cuffdim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }
  fs::path ledger() const { return path("ledger.jsonl"); }

  Run run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && CUFFDIM_LEDGER='" + ledger().string() + "' '" +
                            CUFFDIM_CLI_PATH + "' " + args + " > out.txt 2> err.txt";
    Run r;
    const auto t0 = std::chrono::steady_clock::now();
    const int raw = std::system(cmd.c_str());
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(path("out.txt"));
    r.err = slurp(path("err.txt"));
    return r;
  }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

Json summary(const Run& r) {
  REQUIRE(!r.out.empty());
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  const Json j = Json::parse(r.out);
  for (const char* k : {"command", "params", "results", "residuals", "wall_ms", "version"}) CHECK(j.contains(k));
  return j;
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("json lines keep 17 significant digits") {
  Json j;
  j["x"] = 0.1;
  j["n"] = 3;
  j["bad"] = std::nan("");
  j["list"] = {1.0 / 3.0, "s"};
  CHECK(json_line(j) == R"({"x":0.10000000000000001,"n":3,"bad":null,"list":[0.33333333333333331,"s"]})");
  CHECK(Json::parse(json_line(Json(1.0 / 3.0))).get<double>() == 1.0 / 3.0);
  CHECK(canonical_parameter(2.0000000000001) == 2.0);
}

TEST_CASE("delta summary and cache") {
  Sandbox box;
  const Run first = box.run("delta --cuffs 2,2,2 --tol 1e-4");
  CHECK(first.status == 0);
  const Json j = summary(first);
  CHECK(j["command"] == "delta");
  for (const char* k : {"delta", "depth_used", "pressure_residual"}) CHECK(j["results"].contains(k));
  const double delta = j["results"]["delta"].get<double>();
  CHECK(delta > 0.5);
  CHECK(delta < 0.6);
  CHECK(line_count(box.ledger()) == 1);

  const Run second = box.run("delta --cuffs 2,2,2 --tol 1e-4");
  CHECK(second.status == 0);
  MESSAGE("cached invocation took " << second.ms << " ms");
  CHECK(second.ms < 50.0);
  CHECK(line_count(box.ledger()) == 1);
  CHECK(json_line(summary(second)["results"]) == json_line(j["results"]));

  // Deleting the ledger recomputes the same bits.
  fs::remove(box.ledger());
  const Run third = box.run("delta --cuffs 2,2,2 --tol 1e-4");
  CHECK(json_line(summary(third)["results"]) == json_line(j["results"]));
  CHECK(line_count(box.ledger()) == 1);
}

TEST_CASE("higher-depth ledger entries supersede lower ones") {
  Sandbox box;
  const Json coarse = summary(box.run("delta --cuffs 1,2,3 --tol 1e-2"));
  const Json fine = summary(box.run("delta --cuffs 1,2,3 --tol 1e-5"));
  const int d_coarse = coarse["results"]["depth_used"].get<int>();
  const int d_fine = fine["results"]["depth_used"].get<int>();
  CHECK(d_fine > d_coarse);
  CHECK(line_count(box.ledger()) == 2);
  const Json again = summary(box.run("delta --cuffs 1,2,3 --tol 1e-2"));
  CHECK(again["results"]["depth_used"].get<int>() == d_fine);
  CHECK(line_count(box.ledger()) == 2);

  std::ostringstream warnings;
  const Ledger ledger(box.ledger().string(), &warnings);
  const auto hit = ledger.lookup("delta", Json::array({1.0, 2.0, 3.0}));
  REQUIRE(hit.has_value());
  CHECK((*hit)["depth"].get<int>() == d_fine);
  CHECK(warnings.str().empty());
}

TEST_CASE("corrupt ledger lines are skipped with a warning") {
  Sandbox box;
  {
    std::ofstream out(box.ledger());
    out << "{not json\n" << R"({"kind":"delta"})" << "\n";
  }
  const Run r = box.run("delta --cuffs 3,3,3 --tol 1e-3");
  CHECK(r.status == 0);
  CHECK(r.err.find("warning: skipping corrupt ledger line 1") != std::string::npos);
  CHECK(r.err.find("warning: skipping corrupt ledger line 2") != std::string::npos);
  CHECK(line_count(box.ledger()) == 3);
  const Run cached = box.run("delta --cuffs 3,3,3 --tol 1e-3");
  CHECK(json_line(summary(cached)["results"]) == json_line(summary(r)["results"]));
}

TEST_CASE("octagon emits a labelled SVG") {
  Sandbox box;
  const Run r = box.run("octagon --cuffs 1,1,1 --out oct.svg");
  CHECK(r.status == 0);
  CHECK(summary(r)["results"]["passed"] == true);
  const std::string svg = slurp(box.path("oct.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("<!-- validation: pass -->") != std::string::npos);
  std::size_t sides = 0;
  for (std::size_t pos = svg.find("id=\"side-"); pos != std::string::npos; pos = svg.find("id=\"side-", pos + 1)) ++sides;
  CHECK(sides == 8);
}

TEST_CASE("certify") {
  Sandbox box;
  const Run ok = box.run("certify --family directions --grid 256");
  CHECK(ok.status == 0);
  const Json j = summary(ok);
  CHECK(j["results"]["passed"] == true);
  CHECK(j["results"]["c_t"].get<double>() >= 0.7 - 1e-12);
  const Run bad = box.run("certify --family constant --grid 64");
  CHECK(bad.status == 3);
  CHECK(summary(bad)["results"]["passed"] == false);
}

TEST_CASE("favard, cover and trace emit files") {
  Sandbox box;
  const Run f = box.run("favard --fixture four-corner --depths 1:3 --grid 32 --out f.csv");
  CHECK(f.status == 0);
  const std::string csv = slurp(box.path("f.csv"));
  CHECK(csv.rfind("depth,lambda,length\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 32);
  const auto fav = summary(f)["results"]["favard"];
  REQUIRE(fav.size() == 3);
  CHECK(fav[1].get<double>() < fav[0].get<double>());

  const Run c = box.run("cover --cuffs 2,2,2 --depth 2 --out c.csv");
  CHECK(c.status == 0);
  const std::string cover = slurp(box.path("c.csv"));
  CHECK(std::count(cover.begin(), cover.end(), '\n') == 1 + 12);

  const Run t = box.run("trace --cuffs 2,2,2 --xi 'a(bA)' --eta 'B(B)' --length 10");
  CHECK(t.status == 0);
  CHECK(summary(t)["results"]["matches_xi"] == true);
}

TEST_CASE("invalid input gives an error JSON and a nonzero exit") {
  Sandbox box;
  const Run range = box.run("delta --cuffs 2,2,99");
  CHECK(range.status == 1);
  CHECK(range.out.empty());
  const Json e = Json::parse(range.err);
  CHECK(e["command"] == "delta");
  CHECK(e["error"].get<std::string>().find("cuff") != std::string::npos);

  const Run flag = box.run("delta --bogus");
  CHECK(flag.status != 0);
  CHECK(Json::parse(flag.err).contains("error"));

  const Run tol = box.run("delta --cuffs 2,2,2 --tol -1");
  CHECK(tol.status != 0);
  CHECK(Json::parse(tol.err).contains("error"));
  CHECK_FALSE(fs::exists(box.ledger()));
}

TEST_CASE("repeated runs are byte-identical apart from wall time") {
  Sandbox box;
  const auto strip = [](Json j) {
    j.erase("wall_ms");
    return json_line(j);
  };
  const Run a = box.run("favard --fixture segment --depths 1:3 --grid 32 --out a.csv");
  const Run b = box.run("favard --fixture segment --depths 1:3 --grid 32 --out b.csv");
  CHECK(slurp(box.path("a.csv")) == slurp(box.path("b.csv")));
  Json ja = summary(a), jb = summary(b);
  ja["params"].erase("out");
  jb["params"].erase("out");
  CHECK(strip(ja) == strip(jb));
}
