#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "cobranet/degree_model.hpp"
#include "support.hpp"

using namespace cobranet;

TEST_SUITE("degree_model") {
  TEST_CASE("profile expands into per-vertex degrees") {
    DegreeProfile profile{{{2, 3, 1}, {1, 0, 6}}};
    const auto seq = build_sequence(profile);
    REQUIRE(seq.n() == 3);
    CHECK(seq.d_minus() == std::vector<std::uint32_t>{3, 3, 0});
    CHECK(seq.d_plus() == std::vector<std::uint32_t>{1, 1, 6});
    CHECK(seq.m() == 8);
    CHECK(profile.total_vertices() == 3);
  }

  TEST_CASE("profile JSON round trip and file loading") {
    DegreeProfile profile{{{5000, 10, 5}, {5000, 5, 10}}};
    const auto back = DegreeProfile::from_json(profile.to_json());
    CHECK(back == profile);

    const auto path = std::filesystem::temp_directory_path() / "cobranet_profile_test.json";
    std::ofstream(path) << R"({"blocks": [{"count": 4, "d_in": 2, "d_out": 2}]})";
    const auto loaded = DegreeProfile::load(path);
    CHECK(loaded.blocks.size() == 1);
    CHECK(loaded.blocks[0].count == 4);
    std::filesystem::remove(path);

    CHECK_THROWS(DegreeProfile::from_json("{\"blocks\": []}"));
    CHECK_THROWS(DegreeProfile::from_json("not json"));
    CHECK_THROWS(DegreeProfile::from_json(R"({"blocks": [{"count": 1, "d_in": 1, "d_out": 0}]})"));
    CHECK_THROWS(DegreeProfile::load("/nonexistent/profile.json"));
  }

  TEST_CASE("sequence construction rejects bad input") {
    CHECK_THROWS_AS(DegreeSequence({1, 2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(DegreeSequence({1, 0}, {1, 0}), std::invalid_argument);
  }

  TEST_CASE("validation modes") {
    const DegreeSequence unbalanced({2, 2}, {2, 3});
    auto r = validate(unbalanced, ValidationMode::Generable);
    CHECK_FALSE(r.ok);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations.front().find("degree sums differ") != std::string::npos);

    const DegreeSequence thin({1, 3}, {1, 3});
    CHECK(validate(thin, ValidationMode::Generable).ok);
    r = validate(thin, ValidationMode::TheoryValid);
    CHECK_FALSE(r.ok);
    CHECK(r.violations.front().find("min out-degree < 2") != std::string::npos);

    const auto wide = testing::regular_sequence(10, 100);
    r = validate(wide, ValidationMode::TheoryValid);
    CHECK(r.ok);
    CHECK_FALSE(r.warnings.empty());
  }

  TEST_CASE("statistics of the three experiment profiles") {
    const auto red = compute_stats(build_sequence({{{100, 6, 6}}}));
    CHECK(red.rho == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(red.lambda == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(red.delta_max == 6);

    const auto green = compute_stats(build_sequence({{{50, 10, 5}, {50, 5, 10}}}));
    CHECK(green.rho == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(green.lambda == doctest::Approx(0.15).epsilon(1e-15));

    const auto blue = compute_stats(build_sequence({{{50, 10, 2}, {50, 2, 10}}}));
    CHECK(blue.rho == doctest::Approx(13.0 / 30.0).epsilon(1e-15));
    CHECK(blue.lambda == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(blue.delta_max == 10);
  }

  TEST_CASE("rho is exact for large sequences") {
    // Half the in-weight on out-degree 3, half on out-degree 7.
    const auto seq = build_sequence({{{1000000, 7, 3}, {1000000, 3, 7}}});
    const auto st = compute_stats(seq);
    CHECK(st.rho == doctest::Approx((7.0 / 3.0 + 3.0 / 7.0) / 10.0).epsilon(1e-15));
  }

  TEST_CASE("statistics require a generable sequence") {
    CHECK_THROWS_AS(compute_stats(DegreeSequence({2, 2}, {2, 3})), std::invalid_argument);
  }
}
