#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include "jlt/detfun.hpp"
#include "jlt/experiments.hpp"

using namespace jlt;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("jlt_test_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" JLT_CLI_PATH "' " + args + " > '" + out.string() +
                          "' 2> '" + (workdir() / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
  return out;
}

const char* kRankOne = R"({"offset": 0, "da": [[0,0]], "db": [[1,0]], "dc": [[0,0]]})";

}  // namespace

TEST_CASE("spectrum") {
  write(workdir() / "p.json", kRankOne);
  Run r = cli("spectrum --input p.json");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == eigenvalue_csv_header().substr(0, eigenvalue_csv_header().size() - 1));
  CHECK(ls[1].rfind("input,2.2360679774997", 0) == 0);
  CHECK(ls[1].find("determinant-zero") != std::string::npos);

  r = cli("spectrum --input p.json --format json --truncation 200");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  // One determinant zero and the matching eigenvalue of the 200-site section.
  REQUIRE(j.at("spectrum").size() == 2);
  for (const auto& s : j["spectrum"]) CHECK(std::abs(s["lambda"][0].get<double>() - std::sqrt(5.0)) <= 1e-10);
  CHECK(r.out.find("truncated-eigensolver") != std::string::npos);

  r = cli("spectrum --input p.json --out spec_out");
  CHECK(r.code == 0);
  CHECK(fs::exists(workdir() / "spec_out"));
}

TEST_CASE("detscan matches the library") {
  write(workdir() / "p.json", kRankOne);
  const Run r = cli("detscan --input p.json --p 2 --re-min 2.5 --re-max 3 --im-min 0.1 --im-max 0.5 --steps 3");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 10);
  CHECK(ls[0] == "re_lambda,im_lambda,abs_g,re_g,im_g");
  const DetContext ctx(PerturbationSpec::diagonal(0, 1.0), 2);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    REQUIRE(f.size() == 5);
    const cplx g = perturbation_determinant(ctx, cplx{f[0], f[1]});
    CHECK(std::abs(cplx{f[3], f[4]} - g) <= 1e-14);
    CHECK(f[2] == doctest::Approx(std::abs(g)));
  }
}

TEST_CASE("norms") {
  Run r = cli("norms --lambda 3 --p 1,2");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(fields(ls[1])[3] == doctest::Approx(2.0 * std::numbers::pi / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(std::pow(fields(ls[2])[3], 2) == doctest::Approx(6.0 * std::numbers::pi / std::pow(5.0, 1.5)).epsilon(1e-12));

  write(workdir() / "p.json", kRankOne);
  r = cli("norms --input p.json --lambda 2.5i --p 2");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p,d_norm,schatten_norm,lower,upper") != std::string::npos);
  CHECK(r.out.find("2,1,1,") != std::string::npos);
}

TEST_CASE("ensemble output is independent of the thread count") {
  write(workdir() / "cfg.json",
        R"({"seed": 99, "trials": 8, "support_width": 2, "magnitude": 1.2, "p_grid": [1, 2],
            "tau_grid": [0.5], "truncation_size": 60, "cross_check": false})");
  REQUIRE(cli("ensemble --config cfg.json --threads 1 --out t1").code == 0);
  REQUIRE(cli("ensemble --config cfg.json --threads 8 --out t8").code == 0);
  for (const char* f : {"report.json", "eigenvalues.csv"}) {
    const std::string a = slurp(workdir() / "t1" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(workdir() / "t8" / f));
  }
  CHECK(fs::exists(workdir() / "t1" / "timings.json"));

  // The file report is the in-process report.
  const auto config = load_config(workdir() / "cfg.json");
  const auto expected = run_experiment(config);
  CHECK(load_report(workdir() / "t1" / "report.json") == expected);
  CHECK(slurp(workdir() / "t1" / "report.json") == serialize_report(expected));
  CHECK(slurp(workdir() / "t1" / "eigenvalues.csv") == eigenvalue_csv(expected));

  REQUIRE(cli("ensemble --config cfg.json --seed 100 --out s100").code == 0);
  CHECK(load_report(workdir() / "s100" / "report.json").config.seed == 100);
  CHECK(slurp(workdir() / "s100" / "report.json") != slurp(workdir() / "t1" / "report.json"));
}

TEST_CASE("verify runs selected criteria") {
  const Run r = cli("verify --only 1,9");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() >= 2);
  CHECK(ls[0].rfind("PASS  1", 0) == 0);
  CHECK(ls[1].rfind("PASS  9", 0) == 0);
}

TEST_CASE("errors exit with status 2") {
  write(workdir() / "bad.json", R"({"offset": 0, "da": [[0,0]], "db": [[1,0], [2,0]], "dc": [[0,0]]})");
  write(workdir() / "badcfg.json", R"({"trials": 0})");
  write(workdir() / "unknown.json", R"({"trails": 3})");
  CHECK(cli("spectrum").code == 2);
  CHECK(cli("spectrum --input missing.json").code == 2);
  CHECK(cli("spectrum --input bad.json").code == 2);
  CHECK(cli("spectrum --input p.json --format xml").code == 2);
  CHECK(cli("ensemble --config badcfg.json --out e").code == 2);
  CHECK(cli("ensemble --config unknown.json --out e").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("cleanup") { fs::remove_all(workdir()); }
