#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "embed/error.hpp"
#include "embed/io.hpp"

using namespace embed;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const int status = std::system((std::string(EMBED_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(kInf) == "inf");
  CHECK(io::format_double(-kInf) == "-inf");
}

TEST_CASE("config parsing") {
  const io::RunConfig c = io::parse_config(R"({"target": {"family": "double_exponential", "lambda": 1, "gamma": 2},
    "char": {"catalog": "power_signed", "c_plus": 1, "c_minus": 1}, "sampler": {"kind": "ppp", "seed": 3}})");
  CHECK(c.sampler == "ppp");
  CHECK(c.seed == 3);
  CHECK(c.build_target().upper_tail(0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(c.solver_kind(c.build_target()) == SolverKind::signed_law);
  try {
    io::parse_config("{not json");
    FAIL("expected a configuration error");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
  CHECK_THROWS_AS(io::parse_config(R"({"target": {"family": "no_such_family"}, "char": {"catalog": "brownian_extrema"}})")
                      .build_target(),
                  EmbedError);
}

TEST_CASE("boundary table for the positive solver") {
  const Embedding e = solve(target::exponential(1.0), testing::dx_over_x2());
  const auto rows = io::tabulate(e, io::uniform_grid(0, 2, 5));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].phi_minus == 0.0);
  CHECK(rows[2].phi_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(rows[0].survival == 1.0);
}

TEST_CASE("command line") {
  const fs::path dir = fs::temp_directory_path() / "embed_cli_test";
  fs::remove_all(dir);
  const std::string cfg = std::string(EMBED_CONFIGS) + "/dexp.json";
  REQUIRE(run("boundaries --config " + cfg + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run("boundaries --config " + cfg + " --out " + (dir / "b").string()) == 0);
  const std::string a = slurp(dir / "a" / "boundaries.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(dir / "b" / "boundaries.csv"));

  CHECK(run("sample --config " + cfg + " --n 20000 --seed 7 --out " + (dir / "s1").string()) == 0);
  CHECK(run("sample --config " + cfg + " --n 20000 --seed 7 --out " + (dir / "s2").string()) == 0);
  CHECK(slurp(dir / "s1" / "batch.csv") == slurp(dir / "s2" / "batch.csv"));
  CHECK(fs::exists(dir / "s1" / "gof.json"));

  CHECK(run("catalog") == 0);
  CHECK(run("bogus") == 2);
  CHECK(run("boundaries") == 2);
  CHECK(run("boundaries --config /nonexistent.json") == 2);
  CHECK(run("sample --config " + cfg + " --sampler nope") == 2);
  fs::remove_all(dir);
}
