#include "cli.hpp"
#include "json.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = relspin::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("relspin_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const double h = std::sqrt(0.5);

}  // namespace

TEST_CASE("state: axis basis at threshold", "[cli]") {
  const Result r = run({"state", "--mass-ratio", "1.0", "--vertex", "ps", "--basis", "axis:0,0"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["vertex"] == "pseudoscalar");
  CHECK(j["basis"]["kind"] == "axis");
  CHECK_THAT(j["amplitudes"][0][0][0].get<double>(), WithinAbs(0.0, 1e-12));
  CHECK_THAT(j["amplitudes"][0][1][0].get<double>(), WithinAbs(h, 1e-12));
  CHECK_THAT(j["amplitudes"][1][0][0].get<double>(), WithinAbs(h, 1e-12));
  CHECK_THAT(j["kinematics"]["mass_ratio"].get<double>(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("state: helicity basis and mass pair", "[cli]") {
  const Result r = run({"state", "--mass-ratio", "0.5", "--vertex", "ps", "--basis", "helicity"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK_THAT(std::hypot(j["amplitudes"][0][0][0].get<double>(), j["amplitudes"][0][0][1].get<double>()),
             WithinAbs(h, 1e-12));
  CHECK_THAT(std::hypot(j["amplitudes"][1][1][0].get<double>(), j["amplitudes"][1][1][1].get<double>()),
             WithinAbs(h, 1e-12));

  const Result m = run({"state", "--parent-mass", "4", "--fermion-mass", "1"});
  REQUIRE(m.code == 0);
  CHECK_THAT(json::parse(m.out)["kinematics"]["mass_ratio"].get<double>(), WithinAbs(0.5, 1e-15));

  CHECK(run({"state", "--mass-ratio", "0.5", "--parent-mass", "4", "--fermion-mass", "1"}).code == 2);
  CHECK(run({"state", "--parent-mass", "4"}).code == 2);
  CHECK(run({"state", "--parent-mass", "1", "--fermion-mass", "1"}).code == 2);
  CHECK(run({"state", "--basis", "axis:1"}).code == 2);
  CHECK(run({"state", "--vertex", "vector"}).code == 2);
  CHECK(run({"state", "--mass-ratio", "0.5", "--format", "text"}).code == 0);
}

TEST_CASE("state: scalar vertex at threshold fails", "[cli]") {
  const Result r = run({"state", "--mass-ratio", "1.0", "--vertex", "s"});
  CHECK(r.code == 1);
  CHECK_THAT(r.err, ContainsSubstring("vanishing amplitude at threshold"));
}

TEST_CASE("chsh-scan: CSV schema and values", "[cli]") {
  const Result w = run({"chsh-scan", "--family", "wigner", "--r-min", "0.1", "--r-max", "1", "--steps", "4"});
  REQUIRE(w.code == 0);
  const auto rows = csv_rows(w.out);
  REQUIRE(rows.size() == 5);
  CHECK(w.out.substr(0, w.out.find('\n')) == "r,chsh_max,chsh_oracle,t_xx,t_yy,t_zz,converged");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    CHECK_THAT(std::stod(rows[i][1]), WithinAbs(2.0 * std::sqrt(2.0), 1e-6));
    CHECK(rows[i][6] == "true");
  }

  const Result d = run({"chsh-scan", "--family", "dirac", "--r-values", "1,0.01,0.00714285714285714"});
  REQUIRE(d.code == 0);
  const auto dr = csv_rows(d.out);
  REQUIRE(dr.size() == 4);
  CHECK_THAT(std::stod(dr[1][1]), WithinAbs(2.0 * std::sqrt(2.0), 1e-6));
  CHECK(std::stod(dr[2][1]) - 2.0 < 1e-7);
  CHECK(std::stod(dr[3][1]) - 2.0 < 1e-7);
  CHECK(dr[2][1] == "2.00000001");  // 12 significant digits
}

TEST_CASE("chsh-scan: log spacing, json, file output, determinism", "[cli]") {
  const Result l = run({"chsh-scan", "--spacing", "log", "--r-min", "0.01", "--r-max", "1", "--steps", "3"});
  const auto rows = csv_rows(l.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "0.01");
  CHECK(rows[2][0] == "0.1");
  CHECK(rows[3][0] == "1");

  const Result j = run({"chsh-scan", "--format", "json", "--steps", "2", "--family", "moment"});
  REQUIRE(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["rows"].size() == 2);
  CHECK(parsed["rows"][0].contains("chsh_oracle"));

  const auto p1 = temp_path("a.csv"), p2 = temp_path("b.csv");
  REQUIRE(run({"chsh-scan", "-o", p1.string()}).code == 0);
  REQUIRE(run({"chsh-scan", "-o", p2.string()}).code == 0);
  CHECK(!slurp(p1).empty());
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1) == run({"chsh-scan"}).out);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("chsh-scan: usage errors", "[cli]") {
  CHECK(run({"chsh-scan", "--output", "/nonexistent-dir/x.csv"}).code == 2);
  CHECK(run({"chsh-scan", "--r-min", "0.5", "--r-max", "0.1"}).code == 2);
  CHECK(run({"chsh-scan", "--r-max", "1.5"}).code == 2);
  CHECK(run({"chsh-scan", "--steps", "0"}).code == 2);
  CHECK(run({"chsh-scan", "--family", "helicity"}).code == 2);
  CHECK(run({"chsh-scan", "--r-values", "0.5,abc"}).code == 2);
}

TEST_CASE("chsh-scan: non-convergence warns but succeeds", "[cli]") {
  const Result r = run({"chsh-scan", "--r-values", "0.37", "--max-iterations", "1"});
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  if (rows[1][6] == "false") CHECK_THAT(r.err, ContainsSubstring("did not converge"));
}

TEST_CASE("config file mirrors flags and flags win", "[cli]") {
  const auto cfg = temp_path("scan.toml");
  {
    std::ofstream f(cfg);
    f << "[chsh-scan]\nfamily = \"wigner\"\nsteps = 2\n";
  }
  const Result a = run({"--config", cfg.string(), "chsh-scan"});
  REQUIRE(a.code == 0);
  auto rows = csv_rows(a.out);
  REQUIRE(rows.size() == 3);
  CHECK_THAT(std::stod(rows[1][1]), WithinAbs(2.0 * std::sqrt(2.0), 1e-6));
  const Result b = run({"--config", cfg.string(), "chsh-scan", "--steps", "3", "--family", "dirac"});
  rows = csv_rows(b.out);
  REQUIRE(rows.size() == 4);
  CHECK_THAT(std::stod(rows[1][1]), WithinAbs(2.0 * std::sqrt(1.0 + 1e-8), 1e-6));
  std::filesystem::remove(cfg);
}

TEST_CASE("hv-check", "[cli]") {
  const Result h = run({"hv-check", "--test", "helicity"});
  CHECK(h.code == 0);
  CHECK(json::parse(h.out)["verdict"] == "match");

  const Result f = run({"hv-check", "--test", "factorization", "--sprime", "z,+", "--sdprime", "z,+"});
  CHECK(f.code == 0);
  const json fj = json::parse(f.out);
  CHECK_THAT(fj["lhs"].get<double>(), WithinAbs(0.0, 1e-12));
  CHECK_THAT(fj["rhs"].get<double>(), WithinAbs(0.25, 1e-12));
  CHECK(fj["verdict"] == "inseparable");
  CHECK(fj.contains("inputs"));
  CHECK(fj.contains("delta"));

  const Result x = run({"hv-check", "--test", "factorization", "--sprime", "z,+", "--sdprime", "x,+"});
  CHECK(x.code == 0);
  const json xj = json::parse(x.out);
  CHECK_THAT(xj["lhs"].get<double>(), WithinAbs(0.25, 1e-12));
  CHECK(xj["verdict"] == "factorizes");

  CHECK(run({"hv-check", "--test", "factorization", "--sprime", "q,+"}).code == 2);
  CHECK(run({"hv-check", "--test", "factorization", "--sprime", "z,*"}).code == 2);
  CHECK(run({"hv-check", "--test", "factorization", "--sprime", "1.0:0.5,-"}).code == 0);
  CHECK(run({"hv-check", "--test", "bogus"}).code == 2);
  CHECK(run({"hv-check"}).code == 2);
}

TEST_CASE("photon", "[cli]") {
  const Result d = run({"photon"});
  REQUIRE(d.code == 0);
  CHECK_THAT(json::parse(d.out)["chsh_max"].get<double>(), WithinAbs(2.0 * std::sqrt(2.0), 1e-9));
  const Result c = run({"photon", "--angles", "0,0"});
  REQUIRE(c.code == 0);
  CHECK_THAT(json::parse(c.out)["correlation"].get<double>(), WithinAbs(-1.0, 1e-12));
  const Result four = run({"photon", "--angles", "0.7853981633974483,0,0.39269908169872414,1.1780972450961724"});
  CHECK_THAT(std::abs(json::parse(four.out)["chsh"].get<double>()), WithinAbs(2.0 * std::sqrt(2.0), 1e-9));
  CHECK(run({"photon", "--mass-ratio", "0.5"}).code == 2);
  CHECK(run({"photon", "--angles", "0,1,2"}).code == 2);
}

TEST_CASE("gnuplot script and general usage", "[cli]") {
  const Result g = run({"gnuplot-script", "--csv", "scan.csv"});
  CHECK(g.code == 0);
  CHECK_THAT(g.out, ContainsSubstring("'scan.csv'"));
  CHECK(run({"gnuplot-script"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  const Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK_THAT(help.out, ContainsSubstring("chsh-scan"));
}
