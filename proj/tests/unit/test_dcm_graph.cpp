#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cobranet/dcm_graph.hpp"
#include "support.hpp"

using namespace cobranet;

namespace {

std::vector<Vertex> heads_of(const Digraph& g) {
  std::vector<Vertex> heads;
  for (Vertex x = 0; x < g.n(); ++x)
    for (auto y : g.out_neighbors(x)) heads.push_back(y);
  return heads;
}

}  // namespace

TEST_SUITE("dcm_graph") {
  TEST_CASE("realized degrees match the sequence") {
    Rng rng(5);
    const auto seq = testing::random_sequence(rng, 300, 1, 9);
    const auto g = sample_dcm(seq, rng);
    CHECK(g.n() == seq.n());
    CHECK(g.m() == seq.m());
    CHECK(g.in_degrees() == seq.d_minus());
    for (Vertex x = 0; x < g.n(); ++x) CHECK(g.out_degree(x) == seq.d_plus()[x]);
  }

  TEST_CASE("sampling is a function of the seed") {
    const auto seq = testing::regular_sequence(200, 4);
    Rng a(99), b(99), c(100);
    const auto ga = sample_dcm(seq, a);
    CHECK(ga == sample_dcm(seq, b));
    CHECK_FALSE(ga == sample_dcm(seq, c));
  }

  TEST_CASE("unequal degree sums are rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_dcm(DegreeSequence({1, 1}, {1, 2}), rng), std::invalid_argument);
  }

  TEST_CASE("uniform over bijections: brute-force enumeration of 4! matchings") {
    // Out-slots (0,0) (0,1) (1,0) (2,0); in-slots of vertices 0, 1, 2, 2.
    const DegreeSequence seq({1, 1, 2}, {2, 1, 1});
    const std::vector<Vertex> in_slots{0, 1, 2, 2};

    std::map<std::vector<Vertex>, double> expected;
    std::vector<int> perm(4);
    std::iota(perm.begin(), perm.end(), 0);
    int bijections = 0;
    do {
      std::vector<Vertex> heads(4);
      for (int i = 0; i < 4; ++i) heads[i] = in_slots[perm[i]];
      expected[heads] += 1.0;
      ++bijections;
    } while (std::next_permutation(perm.begin(), perm.end()));
    REQUIRE(bijections == 24);
    for (auto& [heads, w] : expected) w /= 24.0;

    constexpr int kSamples = 60000;
    std::map<std::vector<Vertex>, int> observed;
    Rng rng(2024);
    for (int i = 0; i < kSamples; ++i) ++observed[heads_of(sample_dcm(seq, rng))];

    CHECK(observed.size() == expected.size());
    double chi2 = 0.0;
    for (const auto& [heads, w] : expected) {
      const double e = w * kSamples;
      const double o = observed.count(heads) ? observed.at(heads) : 0.0;
      chi2 += (o - e) * (o - e) / e;
    }
    // 11 degrees of freedom; 99.9% quantile.
    CHECK(chi2 < 31.26);
  }

  TEST_CASE("adjacency access") {
    const Digraph g({{1, 1, 0}, {0}});
    CHECK(g.n() == 2);
    CHECK(g.m() == 4);
    CHECK(g.head(0, 2) == 0);
    CHECK(g.in_degrees() == std::vector<std::uint32_t>{2, 2});
    CHECK_THROWS_AS(g.out_neighbors(2), std::out_of_range);

    std::ostringstream out;
    write_edge_list(g, out);
    CHECK(out.str() == "0 1\n0 1\n0 0\n1 0\n");
  }
}
