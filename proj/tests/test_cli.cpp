#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "momentdet/cli.hpp"

using namespace momentdet;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::vector<const char*> argv{"momentdet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempFile {
  explicit TempFile(const std::string& text) {
    path = std::string("cli_test_") + std::to_string(counter++) + ".json";
    std::ofstream(path) << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
  static inline int counter = 0;
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("analyze: indeterminate family exits 0 with the verdict") {
  const auto r = run({"analyze", "--family", "qgauss-pos", "--q", "2", "--max-terms", "500"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("verdict") == "Indeterminate");
  CHECK(j.at("certificate").at("kind") == "condition_star");
}

TEST_CASE("analyze: determinate power family") {
  const auto r = run({"analyze", "--family", "power", "--p", "2"});
  CHECK(r.exit_code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("verdict") == "Determinate");
}

TEST_CASE("analyze: sequence file with a zero term exits 10") {
  TempFile f(R"({"family":"explicit","omega":[1.0,0.0,2.0]})");
  const auto r = run({"analyze", "--file", f.path});
  CHECK(r.exit_code == kExitInvalidInput);
  CHECK(r.err.find("omega_2") != std::string::npos);
}

TEST_CASE("analyze: inconclusive explicit input exits 2") {
  nlohmann::json j;
  j["family"] = "explicit";
  std::vector<double> wobble;
  for (int n = 1; n <= 64; ++n) wobble.push_back(n % 2 ? 1.0 : 2.0);
  j["omega"] = wobble;
  TempFile f(j.dump());
  const auto r = run({"analyze", "--file", f.path, "--max-terms", "64"});
  CHECK(r.exit_code == kExitInconclusive);
  CHECK(nlohmann::json::parse(r.out).at("verdict") == "Inconclusive");
}

TEST_CASE("trace: CSV output with the fixed column contract") {
  const auto r = run({"trace", "--family", "constant", "--c", "1", "--max-terms", "4"});
  CHECK(r.exit_code == kExitOk);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "m,omega_m,C_m,iG_m,delta_m,sumC_m,log_prod_m");
  std::string row;
  double ig4 = 0;
  while (std::getline(lines, row))
    if (row.rfind("4,", 0) == 0) std::sscanf(row.c_str(), "4,%*f,%*f,%lf", &ig4);
  CHECK(ig4 == doctest::Approx(0.625).epsilon(1e-13));
}

TEST_CASE("trace: json format carries the same fields") {
  const auto r = run({"trace", "--family", "constant", "--c", "1", "--max-terms", "4",
                      "--format", "json"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("trace").size() == 4);
  CHECK(j.at("trace").back().at("iG_m") == doctest::Approx(0.625));
}

TEST_CASE("measure: 2x2 truncation of the constant family") {
  const auto r = run({"measure", "--family", "constant", "--c", "1", "--m", "1"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("atoms").size() == 2);
  CHECK(j.at("atoms")[0] == doctest::Approx(-1.0));
  CHECK(j.at("weights")[0] == doctest::Approx(0.5));
  CHECK(j.at("parity") == "odd");
}

TEST_CASE("measure: power p=3 at odd level 101") {
  const auto r = run({"measure", "--family", "power", "--p", "3", "--m", "101", "--parity",
                      "odd"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("atoms").size() == 102);
  double sum = 0;
  for (const auto& w : j.at("weights")) sum += w.get<double>();
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("measure: parity contradiction and budget are invalid input") {
  CHECK(run({"measure", "--family", "power", "--p", "3", "--m", "100", "--parity", "odd"})
            .exit_code == kExitInvalidInput);
  CHECK(run({"measure", "--family", "power", "--p", "3", "--m", "2001"}).exit_code ==
        kExitInvalidInput);
}

TEST_CASE("measure: --parity both emits the extremal pair") {
  const auto r = run({"measure", "--family", "qgauss-pos", "--q", "2", "--m", "40", "--parity",
                      "both"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("mu_even").at("level") == 40);
  CHECK(j.at("mu_odd").at("level") == 41);
  CHECK(j.at("stieltjes_gap").get<double>() > 0.1);
}

TEST_CASE("convert: inline moments to a sequence") {
  const auto r = run({"convert", "--moments", "[1,1,3,15]"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("family") == "explicit");
  REQUIRE(j.at("omega").size() == 3);
  CHECK(j.at("omega")[0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.at("omega")[1].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j.at("omega")[2].get<double>() == doctest::Approx(3.0).epsilon(1e-12));

  const auto exact = run({"convert", "--moments", "[1,1,3,15]", "--mode", "exact"});
  const auto je = nlohmann::json::parse(exact.out);
  CHECK(je.at("omega")[1].get<double>() == 2.0);
}

TEST_CASE("convert: sequence file to moments and back") {
  TempFile f(R"({"family":"power","p":1})");
  const auto r = run({"convert", "--file", f.path, "--n-moments", "3"});
  CHECK(r.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("even_moments") == nlohmann::json::array({1.0, 1.0, 3.0, 15.0}));

  TempFile m(j.dump());
  const auto back = run({"convert", "--file", m.path, "--mode", "exact"});
  CHECK(back.exit_code == kExitOk);
  const auto jb = nlohmann::json::parse(back.out);
  CHECK(jb.at("omega") == nlohmann::json::array({1.0, 2.0, 3.0}));
}

TEST_CASE("convert: non-positive-definite moments exit 10") {
  const auto r = run({"convert", "--moments", "[1,1,1]"});
  CHECK(r.exit_code == kExitInvalidInput);
  CHECK(r.err.find("Hankel") != std::string::npos);
}

TEST_CASE("invalid configurations exit 10") {
  CHECK(run({"analyze"}).exit_code == kExitInvalidInput);  // no source
  CHECK(run({"analyze", "--family", "power", "--p", "2", "--file", "x.json"}).exit_code ==
        kExitInvalidInput);  // two sources
  CHECK(run({"analyze", "--family", "power", "--p", "2", "--max-terms", "2"}).exit_code ==
        kExitInvalidInput);
  CHECK(run({"analyze", "--family", "power", "--p", "2", "--tol", "3"}).exit_code ==
        kExitInvalidInput);
  CHECK(run({"analyze", "--family", "power"}).exit_code == kExitInvalidInput);  // missing --p
  CHECK(run({"analyze", "--family", "warp"}).exit_code == kExitInvalidInput);
  CHECK(run({"nope"}).exit_code == kExitInvalidInput);
  TempFile bad("{not json");
  CHECK(run({"analyze", "--file", bad.path}).exit_code == kExitInvalidInput);
  CHECK(run({"convert", "--family", "power", "--p", "1"}).exit_code == kExitInvalidInput);
}

TEST_CASE("--out writes the payload to a file") {
  TempFile sink("");
  const auto r = run({"analyze", "--family", "power", "--p", "3", "--out", sink.path});
  CHECK(r.exit_code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(sink.path);
  nlohmann::json j;
  in >> j;
  CHECK(j.at("verdict") == "Indeterminate");
}

TEST_CASE("deterministic output for a fixed config") {
  const auto a = run({"analyze", "--family", "qgauss-neg", "--q", "-2", "--max-terms", "300"});
  const auto b = run({"analyze", "--family", "qgauss-neg", "--q", "-2", "--max-terms", "300"});
  CHECK(a.out == b.out);
  CHECK(a.exit_code == 0);
}

TEST_SUITE_END();
