#pragma once

#include <cstdint>
#include <vector>

#include "cobranet/degree_model.hpp"
#include "cobranet/estimate.hpp"
#include "cobranet/rng.hpp"
#include "cobranet/theory.hpp"

namespace cobranet::tree {

/// Number of children of a non-root tree vertex: the out-degree of a vertex
/// drawn with probability proportional to its in-degree.
class OffspringLaw {
 public:
  OffspringLaw(std::vector<std::uint32_t> support, std::vector<double> probs);

  const std::vector<std::uint32_t>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Probability mass at k (0 outside the support).
  double mass(std::uint32_t k) const;
  /// E[1/X]; coincides with rho of the generating sequence.
  double mean_inverse() const;

  std::uint32_t sample(Rng& rng) const;

 private:
  std::vector<std::uint32_t> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// Mass at k is the total in-degree of vertices with out-degree k over m.
/// Requires a theory-valid sequence.
OffspringLaw offspring_law(const DegreeSequence& seq);

struct FixedPointResult {
  double value = 0.0;
  std::uint64_t iterations = 0;
  bool converged = false;
};

/// Iterates z <- p0 + p1 z + p2 z^2 from z = 0 until successive iterates
/// differ by less than tol. On hitting max_iter, returns the last iterate
/// with converged = false.
FixedPointResult extinction_prob_iterate(const theory::OutcomeProbs& probs, double tol,
                                         std::uint64_t max_iter);

/// Probability that the percolated tree is extinct by generation `generations`,
/// i.e. the root-corrected generating function iterated that many times.
double extinction_by_generation(std::uint32_t d_root, const OffspringLaw& law, double p,
                                std::uint32_t generations);

struct TreeSimOptions {
  std::uint32_t generation_cap = 60;
  /// Growth stops once a generation holds this many lineages. The boolean
  /// simulation then reports survival; the estimators instead add the exact
  /// probability that one of them reaches the generation cap.
  std::uint64_t population_cap = 256;
};

/// Grows one percolated tree generation by generation with two uniform
/// child samples and two Bernoulli(p) bias bits per visited vertex. Returns
/// true iff some lineage is alive at the generation cap.
bool simulate_percolated_tree(std::uint32_t d_root, const OffspringLaw& law, double p,
                              const TreeSimOptions& options, Rng& rng);

/// Monte-Carlo probability that the tree is alive at the generation cap, over
/// `trials` independent trees; trial i uses derive_seed(seed, i). Trials
/// stopped at the population cap contribute their exact conditional survival
/// probability, so the estimate is unbiased for any population cap.
Estimate estimate_tree_survival(std::uint32_t d_root, const OffspringLaw& law, double p,
                                const TreeSimOptions& options, std::uint64_t trials,
                                std::uint64_t seed, unsigned threads = 1);

/// Same, with the root out-degree drawn per trial from a uniformly chosen
/// vertex of `seq`; the target is 1 - (mean of z_hat over vertices).
Estimate estimate_tree_survival(const DegreeSequence& seq, const OffspringLaw& law, double p,
                                const TreeSimOptions& options, std::uint64_t trials,
                                std::uint64_t seed, unsigned threads = 1);

/// Tree-level prediction of the long-run red density; same as
/// theory::q_star_sum.
double predicted_red_density(const DegreeSequence& seq, double p);

}  // namespace cobranet::tree
