#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef SCPSEUDO_BIN
#error "SCPSEUDO_BIN must point at the CLI binary"
#endif

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  std::string cmd = std::string(SCPSEUDO_BIN) + " " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

std::filesystem::path write_example_spreading() {
  auto p = temp_file("scpseudo_cli_ex1.json");
  std::ofstream(p) << R"({"components":[[[1,1]],[[1,1]]]})";
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_data_lines(const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.find(',') != std::string::npos &&
        line.find("delta") == std::string::npos && line.find("kind") == std::string::npos)
      ++rows;
  return rows;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--no-such-flag").exit_code == 2);
  CHECK(run_cli("construct --kind nope").exit_code == 2);
  CHECK(run_cli("construct --kind terminated --factor 0").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("construct emits the block base matrix with its design rate") {
  RunResult r = run_cli("construct");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["rows"] == json::parse("[[3,3]]"));
  CHECK(j["kind"] == "block");
  CHECK(j["design_rate"] == "1/2");
  CHECK(j["design_rate_value"] == doctest::Approx(0.5));
}

TEST_CASE("construct terminates the built-in spreading") {
  RunResult r = run_cli("construct --kind terminated --factor 2");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["rows"] == json::parse("[[1,2,0,0],[2,1,1,2],[0,0,2,1]]"));
  CHECK(j["kind"] == "terminated");
  CHECK(j["factor"] == 2);
  CHECK(j["design_rate"] == "1/4");
  CHECK(j["design_rate_value"] == doctest::Approx(0.25));
}

TEST_CASE("construct wraps a user spreading into a tail-biting base") {
  auto ex1 = write_example_spreading();
  RunResult r =
      run_cli("construct --base " + ex1.string() + " --kind tailbiting --factor 2");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["rows"] == json::parse("[[1,1,1,1],[1,1,1,1]]"));
  CHECK(j["design_rate"] == "1/2");
  std::filesystem::remove(ex1);
}

TEST_CASE("construct rejects coupling a plain matrix") {
  auto p = temp_file("scpseudo_cli_mat.json");
  std::ofstream(p) << R"({"rows":[[3,3]]})";
  CHECK(run_cli("construct --base " + p.string() + " --kind tailbiting --factor 2")
            .exit_code == 2);
  // Plain matrices are still fine as block inputs.
  RunResult r = run_cli("construct --base " + p.string());
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["rows"] == json::parse("[[3,3]]"));
  std::filesystem::remove(p);
}

TEST_CASE("construct lift output is a deterministic edge list") {
  RunResult a = run_cli("construct --lift 2 --seed 5");
  REQUIRE(a.exit_code == 0);
  std::istringstream ss(a.out);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line == "c kind=block factor=1 lift=2 seed=5");
  REQUIRE(std::getline(ss, line));
  CHECK(line == "p tanner 2 4 12");

  RunResult b = run_cli("construct --lift 2 --seed 5");
  CHECK(a.out == b.out);
  RunResult c = run_cli("construct --lift 2 --seed 6");
  CHECK(a.out != c.out);
}

TEST_CASE("oracle demo reports the worked wrapping example") {
  RunResult r = run_cli("oracle --demo");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["lambda"] == 2);
  CHECK(j["m"] == 2);
  CHECK(j["w"] == json::parse("[1,1,2,0,1,1,1,1,1,1,0,0]"));
  CHECK(j["pseudoweight"] == 9);
  CHECK(j["w_wrapped"] == json::parse("[1,1,1,1]"));
  CHECK(j["pseudoweight_wrapped"] == 4);
}

TEST_CASE("oracle searches the small tail-biting ensemble exhaustively") {
  auto ex1 = write_example_spreading();
  RunResult r = run_cli("oracle --base " + ex1.string() +
                        " --kind tailbiting --factor 2 --m 2 --lift 1 --samples 25");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["w_min"] == 2);
  CHECK(j["witness"] == json::parse("[0,0,1,1]"));
  CHECK(j["exhaustive"] == true);
  CHECK(j["covers_searched"] == 256);
  REQUIRE(j.contains("wrap_samples"));
  CHECK(j["wrap_violations"] == 0);
  std::filesystem::remove(ex1);
}

TEST_CASE("oracle reports budget exhaustion with exit code 3") {
  RunResult r = run_cli("oracle --kind terminated --factor 30 --m 1 --lift 1");
  CHECK(r.exit_code == 3);
}

TEST_CASE("growth solves a coarse curve and writes a stable csv") {
  std::string flags =
      " --kind block --m 1 --starts 2 --grid-step 0.004 --bisect-tol 0.001 --delta-max 0.06";
  auto csv_path = temp_file("scpseudo_cli_growth.csv");

  RunResult r = run_cli("growth" + flags + " --out " + csv_path.string());
  REQUIRE(r.exit_code == 0);
  json meta = json::parse(r.out);
  CHECK(meta["command"] == "growth");
  CHECK(meta["m"] == 1);
  REQUIRE(meta["r_plus"].is_number());
  double crossing = meta["r_plus"].get<double>();
  CHECK(crossing > 0.015);
  CHECK(crossing < 0.035);

  std::string csv = slurp(csv_path);
  std::istringstream ss(csv);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line == "# growth curve");
  REQUIRE(std::getline(ss, line));
  CHECK(line ==
        "# m=1 seed=1 starts=2 grid_step=0.004 bisect_tol=0.001 delta_max=0.06 threads=1");
  REQUIRE(std::getline(ss, line));
  CHECK(line == "delta,r,feasible,starts_used");
  CHECK(count_data_lines(csv) == meta["samples"].get<std::size_t>());

  // Byte-for-byte reproducible.
  auto csv2_path = temp_file("scpseudo_cli_growth2.csv");
  RunResult r2 = run_cli("growth" + flags + " --out " + csv2_path.string());
  REQUIRE(r2.exit_code == 0);
  CHECK(r2.out == r.out);
  CHECK(slurp(csv2_path) == csv);

  // The json format carries the same curve.
  auto json_path = temp_file("scpseudo_cli_growth.json");
  RunResult r3 = run_cli("growth" + flags + " --format json --out " + json_path.string());
  REQUIRE(r3.exit_code == 0);
  json full = json::parse(slurp(json_path));
  CHECK(full["r_plus"] == meta["r_plus"]);
  CHECK(full["curve"].size() == meta["samples"].get<std::size_t>());

  std::filesystem::remove(csv_path);
  std::filesystem::remove(csv2_path);
  std::filesystem::remove(json_path);
}

TEST_CASE("sweep writes bounds and reuses its cache") {
  auto ex1 = write_example_spreading();
  auto cache_path = temp_file("scpseudo_cli_cache.json");
  auto csv_path = temp_file("scpseudo_cli_sweep.csv");
  std::string cmd = "sweep --base " + ex1.string() +
                    " --factors 2..2 --ms 1 --starts 2 --grid-step 0.004"
                    " --bisect-tol 0.001 --delta-max 0.03 --cache " +
                    cache_path.string() + " --out " + csv_path.string();

  RunResult r = run_cli(cmd);
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["command"] == "sweep");
  CHECK(j["factors"] == json::parse("[2,2]"));
  REQUIRE(j["reports"].size() == 1);
  const json& rep = j["reports"][0];
  CHECK(rep["m"] == 1);
  CHECK(rep["bound_scaling"] == "delta_min*factor/(m_s+1)");
  REQUIRE(rep["points"].size() == 2);
  CHECK(rep["points"][0]["kind"] == "tailbiting");
  CHECK(rep["points"][1]["kind"] == "terminated");

  std::string csv = slurp(csv_path);
  std::istringstream ss(csv);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line == "# sweep");
  REQUIRE(std::getline(ss, line));
  CHECK(line.rfind("# seed=1 starts=2", 0) == 0);
  CHECK(line.find("bound_scaling=delta_min*factor/(m_s+1)") != std::string::npos);
  REQUIRE(std::getline(ss, line));
  CHECK(line == "kind,factor,m,delta_min,bound");
  CHECK(count_data_lines(csv) == 2);

  // The cache captured both crossings and a re-run replays them verbatim.
  json cache = json::parse(slurp(cache_path));
  CHECK(cache["entries"].size() == 2);
  RunResult r2 = run_cli(cmd);
  REQUIRE(r2.exit_code == 0);
  CHECK(r2.out == r.out);
  CHECK(slurp(csv_path) == csv);
  CHECK(json::parse(slurp(cache_path))["entries"].size() == 2);

  // A plain matrix cannot be swept.
  auto p = temp_file("scpseudo_cli_mat2.json");
  std::ofstream(p) << R"({"rows":[[3,3]]})";
  CHECK(run_cli("sweep --base " + p.string() + " --factors 2..2").exit_code == 2);

  std::filesystem::remove(ex1);
  std::filesystem::remove(cache_path);
  std::filesystem::remove(csv_path);
  std::filesystem::remove(p);
}
