#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "effdof/cli.hpp"
#include "effdof/io.hpp"

using namespace effdof;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / "effdof_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto& row = rows.emplace_back();
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(f);
    if (!line.empty() && line.back() == ',') row.emplace_back();
  }
  return rows;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("components file parsing") {
  {
    std::istringstream in("weight,variance,dof\n1,1,4\n1,2,4\n");
    CHECK(io::parse_components(in).size() == 2);
  }
  {
    std::istringstream in("weight,variance,dof\r\n+1.5,2e-1,3\r\n\n");
    const auto set = io::parse_components(in);
    CHECK(set.components()[0].weight == 1.5);
    CHECK(set.components()[0].variance == 0.2);
  }
  auto parse_error = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    std::istringstream in(text);
    try {
      io::parse_components(in);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 99};
  };
  CHECK(parse_error("weight,variance,dof\n") == std::pair<std::size_t, std::size_t>{2, 0});
  CHECK(parse_error("") == std::pair<std::size_t, std::size_t>{1, 0});
  CHECK(parse_error("w,v,d\n1,1,1\n") == std::pair<std::size_t, std::size_t>{1, 0});
  CHECK(parse_error("weight,variance,dof\n1,1,4\n1,abc,4\n") ==
        std::pair<std::size_t, std::size_t>{3, 2});
  CHECK(parse_error("weight,variance,dof\n1,1\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(parse_error("weight,variance,dof\n1,1,1,1\n") ==
        std::pair<std::size_t, std::size_t>{2, 4});
  CHECK(parse_error("weight,variance,dof\n1,1,0\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(parse_error("weight,variance,dof\n-1,1,2\n") ==
        std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(parse_error("weight,variance,dof\n1,inf,2\n") ==
        std::pair<std::size_t, std::size_t>{2, 2});
}

TEST_CASE("estimate: single component") {
  const auto path = write_file("single.csv", "weight,variance,dof\n1,3.7,5\n");
  const auto r = run_cli({"estimate", "--input", path.string()});
  REQUIRE(r.code == cli::kSuccess);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"estimator", "value", "numerator", "denominator"});
  CHECK(rows[1][0] == "satterthwaite");
  CHECK(rows[1][1] == "5.000");
  CHECK(rows[2][0] == "boardman");
  CHECK(rows[2][1] == "7.000");
  CHECK(rows[3][0] == "corrected");
  CHECK(rows[3][1] == "5.000");
  CHECK(rows[4][0] == "kish_neff");
  CHECK(rows[4][1] == "1.000");
  CHECK(rows[5][0] == "design_effect");
}

TEST_CASE("estimate: two components, csv round trip at 12 decimals") {
  const auto path = write_file("two.csv", "weight,variance,dof\n1,1,4\n1,2,4\n");
  const auto r = run_cli({"estimate", "--input", path.string(), "--precision", "12"});
  REQUIRE(r.code == cli::kSuccess);
  const auto rows = parse_csv(r.out);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(7.2).epsilon(1e-12));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(10.8).epsilon(1e-12));
  CHECK(std::stod(rows[3][1]) == doctest::Approx(8.8).epsilon(1e-12));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(std::stod(rows[1][3]) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(std::stod(rows[4][1]) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::stod(rows[5][1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimate: json and markdown") {
  const auto path = write_file("two_json.csv", "weight,variance,dof\n1,1,4\n1,2,4\n");
  const auto json = run_cli({"estimate", "--input", path.string(), "--format", "json"});
  REQUIRE(json.code == cli::kSuccess);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc[2]["estimator"] == "corrected");
  CHECK(doc[2]["value"].get<double>() == doctest::Approx(8.8).epsilon(1e-14));
  CHECK(doc[2]["denominator"].get<double>() == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK(doc[3]["numerator"].is_null());

  const auto md = run_cli({"estimate", "--input", path.string(), "--format", "markdown"});
  REQUIRE(md.code == cli::kSuccess);
  CHECK(md.out.find(" corrected |") != std::string::npos);
  CHECK(md.out.find("8.800") != std::string::npos);
}

TEST_CASE("estimate: exit codes") {
  const auto empty = write_file("empty.csv", "weight,variance,dof\n");
  CHECK(run_cli({"estimate", "--input", empty.string()}).code == cli::kParseError);
  CHECK(run_cli({"estimate", "--input", (scratch_dir() / "missing.csv").string()}).code ==
        cli::kParseError);
  const auto zero = write_file("zero.csv", "weight,variance,dof\n0,1,4\n1,0,4\n");
  const auto r = run_cli({"estimate", "--input", zero.string()});
  CHECK(r.code == cli::kDegenerate);
  CHECK(r.err.find("weight * variance") != std::string::npos);
  CHECK(run_cli({"estimate"}).code == cli::kValidationError);
  CHECK(run_cli({"estimate", "--input", empty.string(), "--precision", "13"}).code ==
        cli::kValidationError);
  CHECK(run_cli({}).code == cli::kValidationError);
  CHECK(run_cli({"--help"}).code == cli::kSuccess);
  for (const char* sub : {"estimate", "simulate", "jackknife", "welch", "mi"}) {
    const auto help = run_cli({sub, "--help"});
    CHECK(help.code == cli::kSuccess);
    CHECK(help.err.empty());
    CHECK(help.out.find("Usage:") != std::string::npos);
  }
}

TEST_CASE("jackknife command") {
  const auto a = write_file("pv1.txt", "0\n0\n2\n2\n");
  auto r = run_cli({"jackknife", "--input", a.string()});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(r.out == "statistic,value\njackknife_df,10.000\n");

  const auto b = write_file("pv2.txt", "-1\n1\n");
  r = run_cli({"jackknife", "--input", b.string()});
  CHECK(r.out == "statistic,value\njackknife_df,4.000\n");

  const auto c = write_file("pv3.txt", "5\n5\n5\n");
  CHECK(run_cli({"jackknife", "--input", c.string()}).code == cli::kDegenerate);
  const auto d = write_file("pv4.txt", "5\nfive\n");
  CHECK(run_cli({"jackknife", "--input", d.string()}).code == cli::kParseError);
  const auto e = write_file("pv5.txt", "5\n");
  CHECK(run_cli({"jackknife", "--input", e.string()}).code == cli::kValidationError);
}

TEST_CASE("welch command") {
  auto r = run_cli({"welch", "--n1", "10", "--n2", "10", "--s1sq", "1", "--s2sq", "1"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(r.out == "estimator,df\nsatterthwaite,18.000\ncorrected,20.000\n");
  r = run_cli({"welch", "--n1", "10", "--n2", "10", "--s1sq", "1", "--s2sq", "0"});
  CHECK(r.out == "estimator,df\nsatterthwaite,9.000\ncorrected,9.000\n");
  r = run_cli({"welch", "--n1", "2", "--n2", "2", "--s1sq", "1", "--s2sq", "1"});
  CHECK(r.out == "estimator,df\nsatterthwaite,2.000\ncorrected,4.000\n");
  CHECK(run_cli({"welch", "--n1", "1", "--n2", "10", "--s1sq", "1", "--s2sq", "1"}).code ==
        cli::kValidationError);
  CHECK(run_cli({"welch", "--n1", "3", "--n2", "10", "--s1sq", "0", "--s2sq", "0"}).code ==
        cli::kDegenerate);
  CHECK(run_cli({"welch", "--n1", "x", "--n2", "10", "--s1sq", "0", "--s2sq", "0"}).code ==
        cli::kValidationError);
}

TEST_CASE("mi command") {
  auto r = run_cli({"mi", "--var-sampling", "1", "--nu-sampling", "100", "--var-imputation",
                    "0.2", "--m", "5"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(r.out == "quantity,value\ntotal_variance,1.240\ntotal_df,77.242\n");
  r = run_cli({"mi", "--var-sampling", "1", "--nu-sampling", "50", "--var-imputation", "0",
               "--m", "5"});
  CHECK(r.out == "quantity,value\ntotal_variance,1.000\ntotal_df,50.000\n");
  r = run_cli({"mi", "--var-sampling", "0", "--nu-sampling", "10", "--var-imputation", "1",
               "--m", "3"});
  CHECK(r.out == "quantity,value\ntotal_variance,1.333\ntotal_df,2.000\n");
  CHECK(run_cli({"mi", "--var-sampling", "1", "--nu-sampling", "10", "--var-imputation", "1",
                 "--m", "1"})
            .code == cli::kValidationError);
}

TEST_CASE("simulate: determinism, layouts, manifest") {
  const std::vector<std::string> args{"simulate", "--k", "2", "--nu", "1", "--replicates", "1",
                                      "--seed", "7"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.code == cli::kSuccess);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("K,df,mean_unc,sd_unc,mean_corr,sd_corr,K_x_df\n2,1,", 0) == 0);

  const auto ratio = run_cli({"simulate", "--k", "16", "--nu", "5", "--weights", "random",
                              "--replicates", "100", "--seed", "3", "--format", "markdown"});
  REQUIRE(ratio.code == cli::kSuccess);
  CHECK(ratio.out.find("kish_over_k") != std::string::npos);

  const auto dir = scratch_dir() / "sim_out";
  fs::remove_all(dir);
  const auto first = run_cli({"simulate", "--k", "4,8", "--nu", "2", "--weights", "random",
                              "--replicates", "5000", "--seed", "11", "--threads", "3", "--out",
                              dir.string()});
  REQUIRE(first.code == cli::kSuccess);
  CHECK(fs::exists(dir / "table.csv"));
  const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  CHECK(manifest["config"]["seed"] == 11);
  CHECK(manifest["config"]["replicates"] == 5000);
  CHECK(manifest["seed_source"] == "flag");
  CHECK(manifest.contains("wall_clock_seconds"));
  CHECK(manifest["rng"].get<std::string>().find("xoshiro256**") != std::string::npos);
  const auto cells = read_file(dir / "cells.csv");

  // re-running from the manifest reproduces the output bitwise
  const auto again = run_cli({"simulate", "--config", (dir / "manifest.json").string(),
                              "--threads", "1", "--out", (scratch_dir() / "sim_again").string()});
  REQUIRE(again.code == cli::kSuccess);
  CHECK(again.out == first.out);
  CHECK(read_file(scratch_dir() / "sim_again" / "cells.csv") == cells);
}

TEST_CASE("simulate: presets and validation") {
  const auto r = run_cli({"simulate", "--preset", "tables123", "--replicates", "2", "--seed", "1"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(parse_csv(r.out).size() == 37);
  const auto t45 =
      run_cli({"simulate", "--preset", "tables45-equal", "--replicates", "2", "--seed", "1"});
  REQUIRE(t45.code == cli::kSuccess);
  const auto rows = parse_csv(t45.out);
  CHECK(rows.size() == 13);
  CHECK(rows[1][2] == "16.000");

  CHECK(run_cli({"simulate", "--replicates", "2"}).code == cli::kValidationError);
  CHECK(run_cli({"simulate", "--k", "2", "--nu", "0", "--seed", "1"}).code ==
        cli::kValidationError);
  CHECK(run_cli({"simulate", "--preset", "nope"}).code == cli::kValidationError);
  CHECK(run_cli({"simulate", "--config", "/nonexistent/manifest.json"}).code == cli::kParseError);

  const auto entropy = run_cli({"simulate", "--k", "2", "--nu", "1", "--replicates", "1"});
  CHECK(entropy.code == cli::kSuccess);
  CHECK(entropy.err.rfind("seed: ", 0) == 0);
}

TEST_CASE("render precision bounds and markdown alignment") {
  io::Table t{{"a", "b"}, {{io::Label{"x"}, 1.23456}}};
  CHECK(io::render(t, io::Format::Csv, 2) == "a,b\nx,1.23\n");
  CHECK(io::render(t, io::Format::Markdown, 1) == "|   a |   b |\n| --: | --: |\n|   x | 1.2 |\n");
  CHECK_THROWS_AS(io::render(t, io::Format::Csv, 13), ValidationError);
  CHECK(io::shortest(0.3) == "0.3");
  CHECK(io::shortest(2048.0) == "2048");
}
