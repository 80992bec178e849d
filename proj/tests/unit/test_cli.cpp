#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "qdiff/field.hpp"

namespace fs = std::filesystem;
using qdiff::cli::run;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qdiff_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

const std::vector<std::string> kSmallGp{"qdiff",    "gp",    "--length", "200", "--w",  "5",
                                        "--h",      "0.3",   "--lambda", "0.5", "--tmax", "20",
                                        "--snapshot-every", "5"};

std::vector<std::string> with_out(std::vector<std::string> args, const fs::path& out) {
  args.push_back("--out");
  args.push_back(out.string());
  return args;
}

}  // namespace

TEST_CASE("numbers keep 17 significant digits") {
  CHECK(qdiff::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(qdiff::cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(qdiff::cli::format_number(std::nan("")).empty());
}

TEST_CASE("speed parsing") {
  CHECK(qdiff::cli::parse_speed("c") == qdiff::kSoundSpeed);
  CHECK(qdiff::cli::parse_speed("-c") == -qdiff::kSoundSpeed);
  CHECK(qdiff::cli::parse_speed("0.5c") == doctest::Approx(0.5 * qdiff::kSoundSpeed));
  CHECK(qdiff::cli::parse_speed("2") == 2.0);
  CHECK_THROWS(qdiff::cli::parse_speed("fast"));
}

TEST_CASE("gp output is deterministic and complete") {
  const auto a = scratch("gp_a"), b = scratch("gp_b");
  REQUIRE(run(with_out(kSmallGp, a)) == 0);
  REQUIRE(run(with_out(kSmallGp, b)) == 0);
  for (const char* name : {"density.csv", "series.csv", "summary.json"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(first_line(a / "density.csv") == "t,x,rho,theta");
  CHECK(first_line(a / "series.csv") == "t,min_rho,total_number");

  const auto m = load(a / "manifest.json");
  CHECK(m["command"] == "gp");
  CHECK(m["parameters"]["lambda"] == 0.5);
  CHECK(m["wall_time"].is_number());
  for (const auto& f : m["outputs"]) CHECK(fs::exists(a / f.get<std::string>()));
  CHECK(m["outputs"].size() == 3);
}

TEST_CASE("exit codes") {
  const auto out = scratch("codes");
  CHECK(run({"qdiff", "gp", "--dx", "-1", "--out", out.string()}) == 2);
  CHECK(run({"qdiff", "gp", "--no-such-flag"}) == 2);
  CHECK(run({"qdiff"}) == 2);
  CHECK(run({"qdiff", "sweep", "--lambdas", "", "--out", out.string()}) == 2);
  CHECK(run({"qdiff", "soliton", "--u", "0.5c", "--out", out.string()}) == 4);
  CHECK_FALSE(fs::exists(out / "manifest.json"));
}

TEST_CASE("flat initial data has no singularity") {
  auto args = kSmallGp;
  args[7] = "0";  // --h
  const auto out = scratch("flat");
  REQUIRE(run(with_out(args, out)) == 0);
  CHECK_FALSE(load(out / "summary.json").contains("tau_sing"));
}

TEST_CASE("soliton residual report") {
  const auto out = scratch("soliton");
  REQUIRE(run({"qdiff", "soliton", "--u", "c", "--lambda", "0.4", "--out", out.string()}) == 0);
  const auto s = load(out / "summary.json");
  CHECK(s["residual_continuity"].get<double>() < 1e-6);
  CHECK(s["residual_euler"].get<double>() < 1e-6);
  CHECK(s["class"] == "valid_v_negative");
  CHECK(first_line(out / "profile.csv") == "z,v,rho");
}

TEST_CASE("single-run sweep flags a degenerate fit") {
  const auto out = scratch("sweep");
  REQUIRE(run({"qdiff", "sweep", "--lambdas", "2", "--heights", "0.1", "--widths", "15",
               "--length", "1000", "--tmax", "200", "--out", out.string()}) == 0);
  const auto s = load(out / "summary.json");
  CHECK(s["degenerate"] == true);
  CHECK(s["succeeded"] == 1);
  CHECK(first_line(out / "collapse.csv") == "lambda,h,w,tau_sing,z,y");
}

TEST_CASE("compare without loss has no soliton panel") {
  const auto out = scratch("compare");
  REQUIRE(run({"qdiff", "compare", "--lambda", "0", "--h", "0.05", "--w", "20", "--length", "400",
               "--tmax", "50", "--dt", "0.02", "--out", out.string()}) == 0);
  CHECK(fs::exists(out / "overlay.csv"));
  CHECK(first_line(out / "overlay.csv") == "t,x,rho_gp,rho_kpz");
  CHECK(first_line(out / "disagreement.csv") == "t,linf,max_drho_gp,max_drho_kpz");
  CHECK_FALSE(fs::exists(out / "soliton.csv"));
}

TEST_CASE("polariton scan without a crossing") {
  const auto out = scratch("polariton");
  REQUIRE(run({"qdiff", "polariton", "--scan", "0.1:0.5:3", "--out", out.string()}) == 0);
  CHECK(load(out / "summary.json")["crossing"].is_null());
  CHECK(first_line(out / "scan.csv") ==
        "kappa_rb,re_inv_ma_num,im_inv_ma_num,re_inv_ma_sq,im_inv_ma_sq,crossing");
}
