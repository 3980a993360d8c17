#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "manispline/spline.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("manispline-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI and returns the process exit code.
int run_cli(const std::string& args) {
  std::string cmd = std::string(MANISPLINE_CLI_PATH) + " " + args +
                    " > /dev/null 2> /dev/null";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json solve_config_circle_dirac() {
  return json{{"manifold", "circle"},
              {"t", 1.0},
              {"functionals", json::array({{{"kind", "dirac"}, {"theta", 0.0}}})},
              {"values", {1.0}}};
}

}  // namespace

TEST_CASE("solve: closed-form circle dirac artifact") {
  TempDir d;
  write_file(d.file("cfg.json"), solve_config_circle_dirac().dump());
  int rc = run_cli("solve --config " + d.file("cfg.json").string() + " --out " +
                   d.file("spline.json").string());
  CHECK(rc == 0);
  json art = json::parse(read_file(d.file("spline.json")));
  CHECK(art["format"] == "manispline.spline");
  CHECK(art["version"] == 1);
  CHECK(art["manifold"] == "circle");
  CHECK(art["closed_form"] == true);
  double alpha = art["alpha"][0].get<double>();
  CHECK(std::fabs(alpha - 2.0 * std::tanh(manispline::kPi)) < 1e-9);
  CHECK(art["residual_max"].get<double>() <= 1e-9);
  double norm = art["sobolev_norm"].get<double>();
  CHECK(std::fabs(norm - std::sqrt(2.0 * std::tanh(manispline::kPi))) < 1e-9);
}

TEST_CASE("solve: zero values give zero alpha") {
  TempDir d;
  json cfg{{"manifold", "sphere2"},
           {"t", 2.0},
           {"functionals",
            json::array({{{"kind", "dirac"}, {"point", {0.0, 0.0, 1.0}}},
                         {{"kind", "dirac"}, {"point", {1.0, 0.0, 0.0}}}})},
           {"values", {0.0, 0.0}}};
  write_file(d.file("cfg.json"), cfg.dump());
  CHECK(run_cli("solve --config " + d.file("cfg.json").string() + " --out " +
                d.file("s.json").string()) == 0);
  json art = json::parse(read_file(d.file("s.json")));
  for (const auto& a : art["alpha"]) CHECK(a.get<double>() == 0.0);
}

TEST_CASE("solve: duplicate diracs exit 3, unknown key exits 2") {
  TempDir d;
  json dup{{"manifold", "circle"},
           {"t", 2.0},
           {"truncation", {{"max_degree", 40}}},
           {"functionals",
            json::array({{{"kind", "dirac"}, {"theta", 1.0}},
                         {{"kind", "dirac"}, {"theta", 1.0}}})},
           {"values", {1.0, 1.0}}};
  write_file(d.file("dup.json"), dup.dump());
  CHECK(run_cli("solve --config " + d.file("dup.json").string() + " --out " +
                d.file("o.json").string()) == 3);

  json bad = solve_config_circle_dirac();
  bad["surprise"] = 1;
  write_file(d.file("bad.json"), bad.dump());
  CHECK(run_cli("solve --config " + d.file("bad.json").string() + " --out " +
                d.file("o2.json").string()) == 2);

  // both values and target present
  json both = solve_config_circle_dirac();
  both["target"] = {{"name", "exp_cos"}};
  write_file(d.file("both.json"), both.dump());
  CHECK(run_cli("solve --config " + d.file("both.json").string() + " --out " +
                d.file("o3.json").string()) == 2);
}

TEST_CASE("eval: round-trips the solve artifact") {
  TempDir d;
  write_file(d.file("cfg.json"), solve_config_circle_dirac().dump());
  REQUIRE(run_cli("solve --config " + d.file("cfg.json").string() + " --out " +
                  d.file("spline.json").string()) == 0);

  json ecfg{{"spline", d.file("spline.json").string()},
            {"grid",
             {{"kind", "points"}, {"points", {0.0, manispline::kPi}}}}};
  write_file(d.file("eval.json"), ecfg.dump());
  REQUIRE(run_cli("eval --config " + d.file("eval.json").string() + " --out " +
                  d.file("eval.csv").string()) == 0);
  std::string csv = read_file(d.file("eval.csv"));
  CHECK(csv.rfind("# manispline eval v1\ntheta,value\n", 0) == 0);

  // parse the two data lines and compare with the library
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // version header
  std::getline(lines, line);  // column header
  std::getline(lines, line);
  double v0 = std::strtod(line.substr(line.find(',') + 1).c_str(), nullptr);
  std::getline(lines, line);
  double vpi = std::strtod(line.substr(line.find(',') + 1).c_str(), nullptr);

  CHECK(std::fabs(v0 - 1.0) < 1e-9);
  CHECK(std::fabs(vpi - 1.0 / std::cosh(manispline::kPi)) < 1e-6);

  // bit-for-bit agreement with the in-memory evaluation
  manispline::SplineProblem pr;
  pr.manifold = manispline::Manifold::circle();
  pr.smoothness = 1.0;
  pr.functionals.push_back(
      manispline::Functional::dirac(pr.manifold, manispline::Point::angle(0)));
  pr.values.push_back(1.0);
  auto s = manispline::solve_spline(pr);
  CHECK(v0 == s.evaluate(manispline::Point::angle(0)));
  CHECK(vpi == s.evaluate(manispline::Point::angle(manispline::kPi)));
}

TEST_CASE("eval: empty grid writes a header-only CSV") {
  TempDir d;
  write_file(d.file("cfg.json"), solve_config_circle_dirac().dump());
  REQUIRE(run_cli("solve --config " + d.file("cfg.json").string() + " --out " +
                  d.file("spline.json").string()) == 0);
  json ecfg{{"spline", d.file("spline.json").string()},
            {"grid", {{"kind", "uniform_circle"}, {"n", 0}}}};
  write_file(d.file("eval.json"), ecfg.dump());
  CHECK(run_cli("eval --config " + d.file("eval.json").string() + " --out " +
                d.file("eval.csv").string()) == 0);
  CHECK(read_file(d.file("eval.csv")) == "# manispline eval v1\ntheta,value\n");
}

TEST_CASE("eval: unknown artifact version is rejected") {
  TempDir d;
  write_file(d.file("cfg.json"), solve_config_circle_dirac().dump());
  REQUIRE(run_cli("solve --config " + d.file("cfg.json").string() + " --out " +
                  d.file("spline.json").string()) == 0);
  json art = json::parse(read_file(d.file("spline.json")));
  art["version"] = 2;
  write_file(d.file("spline.json"), art.dump());
  json ecfg{{"spline", d.file("spline.json").string()},
            {"grid", {{"kind", "uniform_circle"}, {"n", 4}}}};
  write_file(d.file("eval.json"), ecfg.dump());
  CHECK(run_cli("eval --config " + d.file("eval.json").string() + " --out " +
                d.file("eval.csv").string()) == 2);
}

TEST_CASE("convergence: canonical density run, deterministic bytes") {
  TempDir d;
  json cfg{{"manifold", "circle"},
           {"family", "dirac"},
           {"target", {{"name", "exp_cos"}}},
           {"t", 2.0},
           {"mode", "refine_density"},
           {"refine_N", {8, 16, 32, 64}}};
  write_file(d.file("cfg.json"), cfg.dump());
  CHECK(run_cli("convergence --config " + d.file("cfg.json").string() +
                " --out " + d.file("a.csv").string()) == 0);
  CHECK(run_cli("convergence --config " + d.file("cfg.json").string() +
                " --out " + d.file("b.csv").string()) == 0);
  std::string a = read_file(d.file("a.csv"));
  CHECK(a == read_file(d.file("b.csv")));
  CHECK(a.rfind("# manispline convergence v1\n", 0) == 0);
  CHECK(a.find("N,rho,J,condition_estimate,err_L2,err_Linf,flagged\n") !=
        std::string::npos);
  CHECK(a.find("# monotone_linf = true") != std::string::npos);

  // slope comment >= 1.8
  auto pos = a.find("# slope = ");
  REQUIRE(pos != std::string::npos);
  double slope = std::strtod(a.c_str() + pos + 10, nullptr);
  CHECK(slope >= 1.8);
  CHECK(a.find("# slope_valid = true") != std::string::npos);
}

TEST_CASE("convergence: aliasing witness reports a non-monotone table") {
  TempDir d;
  json cfg{{"manifold", "circle"},
           {"family", "dirac"},
           {"target",
            {{"coeffs", json::array({{{"degree", 32}, {"order", 2},
                                      {"value", 1.0}}})}}},
           {"t", 2.0},
           {"mode", "raise_order"},
           {"fixed_N", 32},
           {"orders_m", {0, 1}}};
  write_file(d.file("cfg.json"), cfg.dump());
  CHECK(run_cli("convergence --config " + d.file("cfg.json").string() +
                " --out " + d.file("t.csv").string()) == 0);
  std::string csv = read_file(d.file("t.csv"));
  CHECK(csv.find("# density_guard_ok = false") != std::string::npos);
  CHECK(csv.find("# monotone_linf = false") != std::string::npos);
}

TEST_CASE("audit: multiplier passes, transform guards and fails correctly") {
  TempDir d;
  write_file(d.file("mul.json"), json{{"kind", "multiplier"}, {"J", 12}}.dump());
  CHECK(run_cli("audit --config " + d.file("mul.json").string() + " --out " +
                d.file("mul_out.json").string()) == 0);
  json rep = json::parse(read_file(d.file("mul_out.json")));
  CHECK(rep["format"] == "manispline.audit");
  CHECK(rep["all_pass"] == true);
  bool seen_ratio = false;
  for (const auto& c : rep["checks"])
    if (c["check_id"] == "radon_paper_ratio") {
      seen_ratio = true;
      CHECK(std::fabs(c["measured"].get<double>() - 7.0898154) < 1e-6);
    }
  CHECK(seen_ratio);

  // asymmetric point family violates the transform precondition: exit 2
  json asym{{"kind", "transform"},
            {"target",
             {{"coeffs", json::array({{{"degree", 1}, {"order", 1},
                                       {"value", 1.0}}})}}},
            {"t", 3.0},
            {"points", {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}}};
  write_file(d.file("asym.json"), asym.dump());
  CHECK(run_cli("audit --config " + d.file("asym.json").string() + " --out " +
                d.file("asym_out.json").string()) == 2);

  // even target: audit runs but a parity check fails -> exit 1
  json even{{"kind", "transform"},
            {"target",
             {{"coeffs", json::array({{{"degree", 2}, {"order", 1},
                                       {"value", 1.0}}})}}},
            {"t", 3.0},
            {"truncation", {{"max_degree", 12}}},
            {"N_half", 4}};
  write_file(d.file("even.json"), even.dump());
  CHECK(run_cli("audit --config " + d.file("even.json").string() + " --out " +
                d.file("even_out.json").string()) == 1);
  json erep = json::parse(read_file(d.file("even_out.json")));
  CHECK(erep["all_pass"] == false);
}

TEST_CASE("audit: optimality on the canonical sphere configuration") {
  TempDir d;
  json cfg{{"kind", "optimality"},
           {"trials", 8},
           {"problem",
            {{"manifold", "sphere2"},
             {"t", 2.0},
             {"truncation", {{"max_degree", 64}}},
             {"functionals",
              json::array({{{"kind", "dirac"}, {"point", {0.0, 0.0, 1.0}}},
                           {{"kind", "dirac"}, {"point", {0.0, 0.0, -1.0}}},
                           {{"kind", "dirac"}, {"point", {1.0, 0.0, 0.0}}},
                           {{"kind", "dirac"}, {"point", {0.0, 1.0, 0.0}}}})},
             {"values", {1.0, -0.5, 0.25, 0.7}}}}};
  write_file(d.file("cfg.json"), cfg.dump());
  CHECK(run_cli("audit --config " + d.file("cfg.json").string() + " --out " +
                d.file("out.json").string()) == 0);
  json rep = json::parse(read_file(d.file("out.json")));
  CHECK(rep["all_pass"] == true);
}

TEST_CASE("lattice: uniform circle with validation") {
  TempDir d;
  json cfg{{"manifold", "circle"},
           {"kind", "uniform"},
           {"N", 8},
           {"validate_rho", manispline::kPi / 8}};
  write_file(d.file("cfg.json"), cfg.dump());
  CHECK(run_cli("lattice --config " + d.file("cfg.json").string() + " --out " +
                d.file("out.json").string()) == 0);
  json out = json::parse(read_file(d.file("out.json")));
  CHECK(out["format"] == "manispline.lattice");
  CHECK(out["points"].size() == 8);
  CHECK(out["rho_lattice"]["ok"] == true);
  CHECK(std::fabs(out["separation"].get<double>() - manispline::kPi / 4) <
        1e-12);
  CHECK(std::fabs(out["mesh_norm"].get<double>() - manispline::kPi / 8) <
        1e-12);
}

TEST_CASE("missing config file exits 2") {
  TempDir d;
  CHECK(run_cli("solve --config " + d.file("nope.json").string() + " --out " +
                d.file("o.json").string()) == 2);
}
