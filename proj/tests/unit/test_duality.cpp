#include <doctest.h>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/duality.hpp"
#include "support.hpp"

using namespace cobranet;
using namespace cobranet::duality;

TEST_SUITE("duality") {
  TEST_CASE("pathwise agreement on random graphs") {
    Rng rng(31);
    for (int k = 0; k < 40; ++k) {
      const auto g = sample_dcm(testing::random_sequence(rng, 5 + rng.below(60), 1, 6), rng);
      for (std::uint32_t s : {1u, 2u, 3u})
        for (double p : {0.1, 0.5, 0.9}) {
          for (auto d : {MarkDiscipline::PerVertex, MarkDiscipline::Superposition}) {
            const auto r = verify_pathwise(g, {5.0, p, s, d}, rng.next());
            CHECK_MESSAGE(r.ok(), r.describe());
          }
        }
    }
  }

  TEST_CASE("pathwise agreement on a vertex subset") {
    Rng rng(32);
    const auto g = sample_dcm(testing::regular_sequence(30, 2), rng);
    const std::vector<Vertex> subset{0, 7, 7, 29};
    const auto r = verify_pathwise(g, {8.0, 0.4, 2}, subset, 5);
    CHECK(r.ok());
    CHECK(r.events > 0);
    CHECK_THROWS(verify_pathwise(g, {8.0, 0.4, 2}, std::span<const Vertex>{}, 5));
  }

  TEST_CASE("mismatch description names the seed") {
    MismatchReport r;
    r.seed = 42;
    r.events = 10;
    r.mismatches = {3};
    CHECK_FALSE(r.ok());
    CHECK(r.describe().find("seed 42") != std::string::npos);
  }

  TEST_CASE("distributional agreement on a tiny graph") {
    const Digraph g({{1, 2}, {2, 0}, {0, 0}});
    const auto r = verify_distributional(g, 1.5, 0.4, 2, 40000, 17);
    CHECK(r.forward.size() == 8);
    CHECK(r.max_z < 4.5);
    CHECK(r.max_abs_deviation < 0.02);
    CHECK_THROWS(verify_distributional(Digraph({{0}, {0}, {0}, {0}, {0}}), 1.0, 0.5, 2, 10, 1));
  }
}
