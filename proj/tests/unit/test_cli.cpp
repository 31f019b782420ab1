#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"cobranet"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cobranet::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "cobranet_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("theory prints JSON") {
    const auto r = cli({"theory", "--blocks", "100:6:6", "--p", "0.3"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["q_star_closed"].get<double>() == doctest::Approx(0.7795918).epsilon(1e-6));
  }

  TEST_CASE("theory reads a profile file") {
    const auto path = scratch("profile.json");
    std::ofstream(path) << R"({"blocks": [{"count": 10, "d_in": 2, "d_out": 2}]})";
    const auto r = cli({"theory", "--profile", path.string(), "--p", "0.2", "--p", "0.9"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["results"].size() == 2);
  }

  TEST_CASE("bad input exits non-zero with a message") {
    CHECK(cli({"theory", "--blocks", "10:6:6", "--n", "11"}).code != 0);
    CHECK(cli({"theory", "--blocks", "10:6:6", "--p", "1"}).code != 0);
    CHECK(cli({"theory", "--blocks", "10:6:6", "--s", "3"}).code != 0);
    CHECK(cli({"theory", "--blocks", "garbage"}).code != 0);
    CHECK(cli({"simulate", "--blocks", "10:5:6", "--p", "0.3", "--seed", "1"}).code != 0);
    CHECK(cli({"nonsense"}).code != 0);
    const auto r = cli({"theory"});
    CHECK(r.code != 0);
    CHECK(r.err.find("--profile") != std::string::npos);
  }

  TEST_CASE("simulate replays byte for byte from the seed") {
    const auto a = scratch("a.csv"), b = scratch("b.csv"), edges = scratch("edges.txt");
    auto r = cli({"--seed", "99", "--threads", "1", "--out", a.string(), "simulate", "--blocks",
                  "200:4:4", "--p", "0.3", "--t-max", "5", "--trials", "3", "--dump-graph",
                  edges.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("seed 99") != std::string::npos);
    r = cli({"--seed", "99", "--threads", "3", "--out", b.string(), "simulate", "--blocks",
             "200:4:4", "--p", "0.3", "--t-max", "5", "--trials", "3"});
    REQUIRE(r.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("trial,time,red_density", 0) == 0);

    const auto overlay = nlohmann::json::parse(slurp(a.string() + ".theory.json"));
    CHECK(overlay["seed"] == 99);
    CHECK(overlay["q_star"].get<double>() == doctest::Approx(0.7551020).epsilon(1e-6));

    std::ifstream in(edges);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 800);
  }

  TEST_CASE("simulate without theory coverage writes a null overlay") {
    const auto a = scratch("s3.csv");
    const auto r = cli({"--seed", "1", "--out", a.string(), "simulate", "--blocks", "50:3:3",
                        "--p", "0.3", "--s", "3", "--t-max", "1"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(slurp(a.string() + ".theory.json"))["q_star"].is_null());
  }

  TEST_CASE("unseeded runs report the seed they used") {
    const auto r = cli({"dual", "--blocks", "50:3:3", "--p", "0.5", "--vertex", "0", "--trials",
                        "10", "--t-max", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("seed ", 0) == 0);
  }

  TEST_CASE("dual and tree print estimates next to theory") {
    auto r = cli({"--seed", "4", "dual", "--blocks", "100:6:6", "--p", "0.3", "--all-vertices",
                  "--trials", "200", "--t-max", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("survival ") != std::string::npos);
    CHECK(r.out.find("theory 0.7795") != std::string::npos);
    CHECK(cli({"dual", "--blocks", "10:2:2", "--p", "0.3"}).code != 0);

    r = cli({"--seed", "4", "tree", "--blocks", "100:6:6", "--p", "0.3", "--root-degree", "6",
             "--trials", "500"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("theory 0.7795") != std::string::npos);
    CHECK(r.out.find("theory_at_cap") != std::string::npos);
  }

  TEST_CASE("verify-duality passes and can dump marks") {
    const auto marks = scratch("marks.bin");
    const auto r = cli({"--seed", "5", "verify-duality", "--blocks", "20:3:3", "--seeds", "10",
                        "--p", "0.3", "--p", "0.8", "--s", "3", "--dump-marks", marks.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("ok: 0 mismatching runs out of 20") != std::string::npos);
    CHECK(slurp(marks).rfind("CBRDMRK1", 0) == 0);
  }

  TEST_CASE("phase diagram CSV") {
    const auto r = cli({"phase-diagram", "--rho-steps", "3", "--p-steps", "5"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 1 + 15);
  }

  TEST_CASE("help and version") {
    CHECK(cli({"--help"}).code == 0);
    const auto v = cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
  }
}
