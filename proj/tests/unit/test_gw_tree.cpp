#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cobranet/gw_tree.hpp"
#include "support.hpp"

using namespace cobranet;
using namespace cobranet::tree;

TEST_SUITE("gw_tree") {
  TEST_CASE("offspring law is the in-degree-biased out-degree") {
    const auto seq = build_sequence({{{50, 10, 5}, {50, 5, 10}}});
    const auto law = offspring_law(seq);
    CHECK(law.mass(5) == doctest::Approx(2.0 / 3.0));
    CHECK(law.mass(10) == doctest::Approx(1.0 / 3.0));
    CHECK(law.mass(7) == 0.0);
    CHECK(law.mean_inverse() == doctest::Approx(compute_stats(seq).rho).epsilon(1e-14));

    Rng rng(1);
    int fives = 0;
    for (int i = 0; i < 30000; ++i) fives += law.sample(rng) == 5 ? 1 : 0;
    CHECK(std::abs(fives / 30000.0 - 2.0 / 3.0) < 6 * std::sqrt(2.0 / 9.0 / 30000.0));

    CHECK_THROWS_AS(offspring_law(DegreeSequence({1, 1}, {1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw({2, 3}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw({2, 3}, {0.5, 0.6}), std::invalid_argument);
  }

  TEST_CASE("fixed-point iteration reaches z_star") {
    for (double rho : {0.1, 1.0 / 6.0, 0.3, 13.0 / 30.0}) {
      const double pc = theory::p_critical(rho);
      for (int k = 0; k <= 95; k += 5) {
        const double p = k / 100.0;
        if (std::abs(p - pc) < 0.01) continue;
        const auto r = extinction_prob_iterate(theory::averaged_outcome_probs(rho, p), 1e-15,
                                               10'000'000);
        CHECK(r.converged);
        CHECK(std::abs(r.value - theory::z_star(p, rho)) <= 1e-10);
      }
    }
  }

  TEST_CASE("finite-generation extinction increases to z_hat") {
    const auto seq = build_sequence({{{50, 10, 5}, {50, 5, 10}}});
    const auto law = offspring_law(seq);
    const double rho = compute_stats(seq).rho;
    for (std::uint32_t d : {5u, 10u}) {
      double prev = 0.0;
      for (std::uint32_t gen = 0; gen <= 200; ++gen) {
        const double e = extinction_by_generation(d, law, 0.3, gen);
        CHECK(e >= prev - 1e-15);
        prev = e;
      }
      CHECK(prev == doctest::Approx(theory::z_hat_root(d, 0.3, rho)).epsilon(1e-12));
    }
    CHECK(extinction_by_generation(6, law, 0.3, 0) == 0.0);
  }

  TEST_CASE("Monte-Carlo trees match exact extinction at the generation cap") {
    const auto seq = testing::regular_sequence(100, 6);
    const auto law = offspring_law(seq);
    TreeSimOptions opts;
    opts.generation_cap = 20;
    for (double p : {0.3, 0.45, 0.6}) {
      const auto est = estimate_tree_survival(6, law, p, opts, 40000, 314, 2);
      const double exact = 1.0 - extinction_by_generation(6, law, p, opts.generation_cap);
      CHECK(std::abs(est.mean - exact) <= 4.0 * std::max(est.std_error, 1e-3));
    }
  }

  TEST_CASE("trivial trees") {
    const auto law = offspring_law(testing::regular_sequence(10, 3));
    Rng rng(3);
    TreeSimOptions opts;
    CHECK_FALSE(simulate_percolated_tree(3, law, 1.0, opts, rng));
    CHECK(simulate_percolated_tree(3, law, 0.0, opts, rng));
  }

  TEST_CASE("uniform-root estimate targets q_star") {
    const auto seq = build_sequence({{{50, 10, 5}, {50, 5, 10}}});
    const auto law = offspring_law(seq);
    TreeSimOptions opts;
    const auto est = estimate_tree_survival(seq, law, 0.2, opts, 20000, 8, 2);
    const double q = predicted_red_density(seq, 0.2);
    CHECK(std::abs(est.mean - q) <= 4.0 * est.std_error);
  }
}
