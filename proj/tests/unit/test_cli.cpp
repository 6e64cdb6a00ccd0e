#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#ifndef STEINER_CLI_PATH
#error "STEINER_CLI_PATH must name the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("steiner_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  static const fs::path tmp = scratch("io");
  const fs::path o = tmp / "stdout", e = tmp / "stderr";
  const std::string cmd =
      std::string("\"") + STEINER_CLI_PATH + "\" " + args + " >\"" + o.string() + "\" 2>\"" + e.string() + "\"";
  const int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(o), slurp(e)};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("equilibria") {
    const fs::path d = scratch("eq");
    Run r = run("equilibria --alpha0 0.7853981633974483 --out " + d.string());
    REQUIRE(r.code == 0);
    const json j = load(d / "equilibria.json");
    CHECK(j["equilibria"][0]["y"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(fs::exists(d / "config.json"));

    r = run("equilibria --alpha0 1.2");
    CHECK(r.code == 0);
    CHECK(r.out.find("center") != std::string::npos);
    CHECK(r.out.find("saddle") != std::string::npos);

    r = run("equilibria --alpha0 1.391");
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);

    CHECK(run("equilibria --alpha0 1.7").code == 2);
    CHECK(run("equilibria --alpha0 -0.2").code == 2);
  }

  TEST_CASE("degrees switch") {
    const fs::path a = scratch("deg_a"), b = scratch("deg_b");
    REQUIRE(run("equilibria --alpha0 45 --degrees --out " + a.string()).code == 0);
    REQUIRE(run("equilibria --alpha0 0.78539816339744828 --out " + b.string()).code == 0);
    CHECK(load(a / "equilibria.json")["equilibria"][0]["y"] == load(b / "equilibria.json")["equilibria"][0]["y"]);
    CHECK(load(a / "config.json")["degrees"] == false);
  }

  TEST_CASE("bifurcation") {
    const fs::path d = scratch("bif");
    REQUIRE(run("bifurcation --n 50 --out " + d.string()).code == 0);
    const std::string csv = slurp(d / "bifurcation.csv");
    CHECK(csv.rfind("alpha0,y0,y1,stab0,stab1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
  }

  TEST_CASE("manifold") {
    const fs::path d = scratch("man");
    REQUIRE(run("manifold --alpha0 1.45 --branch secondary --out " + d.string()).code == 0);
    const json s = load(d / "series.json");
    CHECK(s["y_center"].get<double>() == doctest::Approx(0.6504).epsilon(1e-4));
    for (const auto& c : s["coeffs"]) {
      if (c["i"] == 2 && c["j"] == 0) CHECK(c["value"].get<double>() == doctest::Approx(2.1064).epsilon(1e-4));
      if (c["i"] == 0 && c["j"] == 2) CHECK(c["value"].get<double>() == doctest::Approx(0.91936).epsilon(1e-4));
    }
    CHECK(load(d / "singularity.json").contains("singular_alphas"));

    const Run r = run("manifold --alpha0 0.870");
    CHECK(r.code == 3);
    CHECK_FALSE(r.err.empty());

    const Run e = run("manifold --alpha0 0.7854");
    REQUIRE(e.code == 0);
    for (const auto& c : json::parse(e.out)["coeffs"]) {
      CHECK(c["i"].get<int>() % 2 == 0);
      CHECK(c["j"].get<int>() % 2 == 0);
    }
  }

  TEST_CASE("simulate recipes") {
    const fs::path b = scratch("sim_b");
    REQUIRE(run("simulate --alpha0 1.2 --recipe bouncing --t-end 20 --out " + b.string()).code == 0);
    CHECK(slurp(b / "trajectory.csv").rfind("t,x,w,y,z\n", 0) == 0);
    CHECK(slurp(b / "section.csv").rfind("n,w,y,z\n", 0) == 0);
    CHECK(fs::exists(b / "embedding-verbatim.csv"));
    CHECK(load(b / "summary.json")["escape"] == "bounded");

    const fs::path r = scratch("sim_r");
    REQUIRE(run("simulate --alpha0 0.7853981633974483 --recipe rocking --t-end 20 --embedding corrected --out " +
                r.string())
                .code == 0);
    CHECK(fs::exists(r / "embedding-corrected.csv"));
    CHECK(load(r / "summary.json")["max_manifold_dev"].get<double>() < 5e-4);

    const fs::path e = scratch("sim_e");
    REQUIRE(run("simulate --alpha0 1.2 --recipe escape --t-end 50 --out " + e.string()).code == 0);
    CHECK(load(e / "summary.json")["escape"] != "bounded");

    CHECK(run("simulate --alpha0 1.2 --state 0 0 0.5 0 --phi 0.3 --out " + e.string()).code == 2);
    CHECK(run("simulate --alpha0 1.2 --state 0 0 -0.5 0 --out " + e.string()).code == 2);
  }

  TEST_CASE("sweep") {
    Run r = run("sweep --list-presets");
    CHECK(r.code == 0);
    for (const char* p : {"quarter-pi", "alpha-dagger", "two-fifths-pi", "post-critical"})
      CHECK(r.out.find(p) != std::string::npos);

    const fs::path d = scratch("sweep");
    REQUIRE(run("sweep --preset quarter-pi --t-end 20 --phi 0.1 0.7853981633974483 1.4 --out " + d.string()).code ==
            0);
    const std::string csv = slurp(d / "summary.csv");
    CHECK(csv.rfind("phi,bounded,max_manifold_dev,section_count\n", 0) == 0);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      CHECK(line.find(",true,") != std::string::npos);
      ++rows;
    }
    CHECK(rows == 3);
    CHECK(fs::exists(d / "sweep.json"));

    const fs::path a = scratch("sweep_dagger");
    REQUIRE(run("sweep --preset alpha-dagger --t-end 5 --phi 0.5 --out " + a.string()).code == 0);
    CHECK(load(a / "sweep.json")["rocking_note"].get<std::string>().find("no differentiable") != std::string::npos);
  }

  TEST_CASE("sessile") {
    const fs::path d = scratch("ses");
    REQUIRE(run("sessile --alpha 1.396 --l 0 --out " + d.string()).code == 0);
    CHECK(slurp(d / "com_trace.csv").find(",bouncing\n") != std::string::npos);
    CHECK(run("sessile --alpha 1.0 --l 1 --k 1 --out " + d.string()).code == 2);

    const fs::path s = scratch("ses3");
    REQUIRE(run("sessile --alpha 1.0 --l 3 --epsilon 0 --oracle --out " + s.string()).code == 0);
    CHECK(load(s / "summary.json")["class"] == "stationary");
    CHECK(fs::exists(s / "oracle.csv"));
  }

  TEST_CASE("usage errors") {
    CHECK(run("").code == 2);
    CHECK(run("equilibria").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
  }

  TEST_CASE("config file with flag override") {
    const fs::path d = scratch("cfg");
    {
      std::ofstream f(d / "in.json");
      f << R"({"simulate": {"alpha0": 1.0, "recipe": "bouncing", "t-end": 3.0, "dt": 0.01}})";
    }
    const fs::path o = d / "out";
    REQUIRE(run("--config " + (d / "in.json").string() + " simulate --t-end 2 --out " + o.string()).code == 0);
    const json c = load(o / "config.json");
    CHECK(c["simulate"]["alpha0"].get<double>() == 1.0);
    CHECK(c["simulate"]["t-end"].get<double>() == 2.0);
    CHECK(c["simulate"]["dt"].get<double>() == 0.01);
  }

  TEST_CASE("determinism and snapshot replay") {
    const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    const std::string args = "simulate --alpha0 0.7853981633974483 --phi 0.7853981633974483 --t-end 30 --out ";
    REQUIRE(run(args + a.string()).code == 0);
    REQUIRE(run(args + b.string()).code == 0);
    REQUIRE(run("--config " + (a / "config.json").string() + " simulate --out " + c.string()).code == 0);
    for (const char* f : {"trajectory.csv", "section.csv", "embedding-verbatim.csv", "summary.json", "config.json"}) {
      CHECK(slurp(a / f) == slurp(b / f));
      CHECK(slurp(a / f) == slurp(c / f));
    }
  }
}
