#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "ait/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = ait::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / ("ait_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("enumerate writes the cache", "[cli]") {
  const auto cache = scratch() / "rec.csv";
  std::filesystem::remove(cache);
  const auto r = run({"enumerate", "--machine", "sdvm", "--stage", "12", "--cache", cache.string()});
  CHECK(r.code == 0);
  REQUIRE(std::filesystem::exists(cache));
  const std::string text = slurp(cache);
  CHECK(text.rfind("sdvm,12\n11,,1\n", 0) == 0);
  CHECK(r.out.rfind("# ait 0.1.0 enumerate\n", 0) == 0);
  // reuse and extend
  CHECK(run({"enumerate", "--stage", "14", "--cache", cache.string()}).code == 0);
  CHECK(slurp(cache).rfind("sdvm,14\n", 0) == 0);
  // an earlier stage is answered from the cache and leaves it alone
  const auto low = run({"ptable", "--stage", "8", "--max-len", "1", "--cache", cache.string()});
  CHECK(low.code == 0);
  CHECK(low.out == run({"ptable", "--stage", "8", "--max-len", "1"}).out);
  CHECK(slurp(cache).rfind("sdvm,14\n", 0) == 0);
  // the wrong machine's cache is a computation failure
  const auto bad = run({"enumerate", "--machine", "spinner", "--stage", "14", "--cache", cache.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("sdvm") != std::string::npos);
}

TEST_CASE("AIT_CACHE_DIR is the default cache location", "[cli]") {
  const auto dir = scratch() / "cachedir";
  std::filesystem::remove_all(dir);
  ::setenv("AIT_CACHE_DIR", dir.c_str(), 1);
  CHECK(run({"omega", "--machine", "spinner", "--stage", "8"}).code == 0);
  ::unsetenv("AIT_CACHE_DIR");
  CHECK(std::filesystem::exists(dir / "spinner.csv"));
}

TEST_CASE("construct sqy reports an enclosure of y", "[cli]") {
  const auto r = run({"construct", "sqy", "--q", "2", "--y", "0.25", "--stage", "24", "--precision", "64", "--format",
                      "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["version"] == ait::kVersion);
  const std::string lo = j["sq_m"][0];
  const std::string hi = j["sq_m"][1];
  CHECK(std::stod(lo) <= 0.25);
  CHECK(std::stod(hi) >= 0.25);
  CHECK(j["c"] == "1/8");
  CHECK(j["stage"] == 24);
}

TEST_CASE("validation errors exit with 1", "[cli]") {
  const auto q1 = run({"entropy", "tsallis", "--q", "1", "--stage", "4"});
  CHECK(q1.code == 1);
  CHECK(q1.err.find("q must exclude 1") != std::string::npos);
  CHECK(run({"omega", "--bogus"}).code == 1);
  CHECK(run({"entropy", "renyi"}).code == 1);
  CHECK(run({"theta", "--D", "0.1.2"}).code == 1);
  CHECK(run({"theta", "--D", "-1"}).code == 1);
  CHECK(run({"omega", "--machine", "utm"}).code == 1);
  CHECK(run({"omega", "--format", "xml"}).code == 1);
  CHECK(run({"construct", "sqy", "--q", "2", "--y", "1/3"}).code == 1);
  CHECK(run({"construct", "sqy", "--q", "2", "--y", "1/2"}).code == 1);
  CHECK(run({"deficiency", "--alpha", "012"}).code == 1);
  CHECK(run({"omega", "--precision", "2"}).code == 1);
  CHECK(run({}).code == 1);
}

TEST_CASE("computation errors exit with 2", "[cli]") {
  // too few stages to certify y > 0 from theta^D
  const auto r = run({"construct", "sqy-thetaD", "--q", "2", "--a", "1/4", "--D", "1", "--stage", "2"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help and version exit with 0", "[cli]") {
  const auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("construct") != std::string::npos);
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("report formats", "[cli]") {
  const auto p = run({"ptable", "--stage", "5"});
  REQUIRE(p.code == 0);
  CHECK(p.out ==
        "# ait 0.1.0 ptable\n"
        "s,p_hat,p_hat_decimal,p_upper\n"
        ",5/16,0.312500000000000000000,0.333333333333333333334\n"
        "0,1/16,0.062500000000000000000,0.083333333333333333334\n"
        "1,1/16,0.062500000000000000000,0.083333333333333333334\n"
        "machine,stage\n"
        "sdvm,5\n");

  const auto e = run({"entropy", "shannon", "--stage", "5", "--base", "binary"});
  REQUIRE(e.code == 0);
  CHECK(e.out.rfind("# ait 0.1.0 entropy shannon binary\ns,term_lo,term_hi\n", 0) == 0);
  CHECK(e.out.find("cumulative_lo,cumulative_hi,tail_bound\n") != std::string::npos);

  const auto j = run({"theta", "--stage", "5", "--D", "1/2", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["theta_D_lo"] == "0.070312500000000000000");

  const auto w = run({"witness", "--q", "1/4", "--B", "10"});
  REQUIRE(w.code == 0);
  CHECK(w.out.find("exceeds,5,") != std::string::npos);
  const auto c = run({"witness", "--q", "3/4", "--B", "10"});
  CHECK(c.out.find("converges") != std::string::npos);

  const auto d = run({"deficiency", "--alpha", "1", "--D", "1", "--stage", "5"});
  REQUIRE(d.code == 0);
  CHECK(d.out.find("1,4,3\n") != std::string::npos);

  const auto out = scratch() / "report.csv";
  CHECK(run({"kgap", "--stage", "6", "--output", out.string()}).code == 0);
  CHECK(slurp(out).rfind("# ait 0.1.0 kgap\n", 0) == 0);
}

TEST_CASE("output is byte-identical across runs and worker counts", "[cli][property]") {
  const std::vector<std::vector<std::string>> commands = {
      {"ptable", "--stage", "16"},
      {"ktable", "--stage", "16", "--support-bound", "100"},
      {"entropy", "tsallis", "--q", "3/2", "--stage", "16"},
      {"entropy", "powersum", "--q", "2", "--stage", "16", "--source", "k_hat"},
      {"weighted-sum", "--stage", "16", "--over", "strings"},
      {"construct", "tewcr", "--q", "2", "--stage", "12", "--format", "json"},
      {"construct", "ceps", "--c", "2", "--stage", "12"},
  };
  for (const auto& base : commands) {
    std::string first;
    for (const char* jobs : {"1", "2", "7"}) {
      auto args = base;
      args.push_back("--jobs");
      args.push_back(jobs);
      const auto r = run(args);
      REQUIRE(r.code == 0);
      if (first.empty()) {
        first = r.out;
      } else {
        REQUIRE(r.out == first);
      }
    }
  }
}
