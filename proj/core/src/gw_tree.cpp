#include "cobranet/gw_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cobranet/parallel.hpp"

namespace cobranet::tree {

OffspringLaw::OffspringLaw(std::vector<std::uint32_t> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty() || support_.size() != probs_.size())
    throw std::invalid_argument("OffspringLaw: support and probabilities must match");
  if (!std::is_sorted(support_.begin(), support_.end()) ||
      std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("OffspringLaw: support must be strictly increasing");
  if (support_.front() == 0) throw std::invalid_argument("OffspringLaw: degree 0 in support");
  cumulative_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
  if (std::abs(cumulative_.back() - 1.0) > 1e-12)
    throw std::invalid_argument("OffspringLaw: probabilities do not sum to 1");
}

double OffspringLaw::mass(std::uint32_t k) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), k);
  return (it != support_.end() && *it == k) ? probs_[it - support_.begin()] : 0.0;
}

double OffspringLaw::mean_inverse() const {
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) total += probs_[i] / support_[i];
  return total;
}

std::uint32_t OffspringLaw::sample(Rng& rng) const {
  if (support_.size() == 1) return support_.front();
  const double u = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(it - cumulative_.begin(), support_.size() - 1);
  return support_[idx];
}

OffspringLaw offspring_law(const DegreeSequence& seq) {
  const auto report = validate(seq, ValidationMode::TheoryValid);
  if (!report.ok) throw std::invalid_argument("offspring_law: " + report.violations.front());

  std::map<std::uint32_t, std::uint64_t> in_mass;
  for (std::size_t x = 0; x < seq.n(); ++x) in_mass[seq.d_plus()[x]] += seq.d_minus()[x];

  std::vector<std::uint32_t> support;
  std::vector<double> probs;
  const auto m = static_cast<long double>(seq.m());
  for (const auto& [k, mass] : in_mass) {
    if (mass == 0) continue;
    support.push_back(k);
    probs.push_back(static_cast<double>(mass / m));
  }
  // Absorb the last-ulp rounding so the law is normalized to working precision.
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (auto& q : probs) q /= total;
  return OffspringLaw(std::move(support), std::move(probs));
}

FixedPointResult extinction_prob_iterate(const theory::OutcomeProbs& probs, double tol,
                                         std::uint64_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("extinction_prob_iterate: tol must be positive");
  FixedPointResult result;
  double z = 0.0;
  while (result.iterations < max_iter) {
    const double next = probs.p0 + (probs.p1 + probs.p2 * z) * z;
    ++result.iterations;
    const double change = std::abs(next - z);
    z = next;
    if (change < tol) {
      result.converged = true;
      break;
    }
  }
  result.value = z;
  return result;
}

namespace {

Estimate summarize(const std::vector<double>& values) {
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  return sample_estimate(sum, sum_sq, values.size());
}

theory::OutcomeProbs law_averaged_probs(const OffspringLaw& law, double p) {
  theory::OutcomeProbs avg;
  for (std::size_t i = 0; i < law.support().size(); ++i) {
    const auto probs = theory::outcome_probs_for_degree(law.support()[i], p);
    avg.p0 += law.probs()[i] * probs.p0;
    avg.p1 += law.probs()[i] * probs.p1;
    avg.p2 += law.probs()[i] * probs.p2;
  }
  return avg;
}

}  // namespace

double extinction_by_generation(std::uint32_t d_root, const OffspringLaw& law, double p,
                                std::uint32_t generations) {
  if (generations == 0) return 0.0;
  const auto avg = law_averaged_probs(law, p);
  double q = 0.0;
  for (std::uint32_t g = 1; g < generations; ++g) q = avg.p0 + (avg.p1 + avg.p2 * q) * q;
  const auto root = theory::outcome_probs_for_degree(d_root, p);
  return root.p0 + (root.p1 + root.p2 * q) * q;
}

namespace {

// Grows the tree. Returns the number of lineages alive after the last
// processed generation and sets `generation` to it; stops early at zero or
// at the population cap.
std::uint64_t grow_tree(std::uint32_t d_root, const OffspringLaw& law, double p,
                        const TreeSimOptions& options, Rng& rng, std::uint32_t& generation) {
  if (options.generation_cap == 0)
    throw std::invalid_argument("simulate_percolated_tree: generation_cap must be >= 1");
  if (d_root == 0) throw std::invalid_argument("simulate_percolated_tree: d_root must be >= 1");

  std::uint64_t alive = 1;
  for (generation = 0; generation < options.generation_cap;) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < alive; ++i) {
      const std::uint32_t d = generation == 0 ? d_root : law.sample(rng);
      const auto first = rng.below(d);
      const auto second = rng.below(d);
      const bool bias_first = rng.bernoulli(p);
      const bool bias_second = rng.bernoulli(p);
      if (bias_first && bias_second) continue;
      if (bias_first || bias_second || first == second)
        next += 1;
      else
        next += 2;
    }
    ++generation;
    alive = next;
    if (next == 0 || next >= options.population_cap) break;
  }
  return alive;
}

// Extinction probability of a non-root lineage within k generations, for
// k = 0 .. cap.
std::vector<double> lineage_extinction_table(const OffspringLaw& law, double p,
                                             std::uint32_t cap) {
  const auto avg = law_averaged_probs(law, p);
  std::vector<double> table(cap + 1, 0.0);
  for (std::uint32_t k = 1; k <= cap; ++k) {
    const double q = table[k - 1];
    table[k] = avg.p0 + (avg.p1 + avg.p2 * q) * q;
  }
  return table;
}

// Survival to the cap given one trajectory: 0 or 1 when the tree dies out or
// reaches the cap, and the exact conditional probability 1 - e^N when it
// stops at the population cap with N lineages.
double survival_weight(std::uint32_t d_root, const OffspringLaw& law, double p,
                       const TreeSimOptions& options, const std::vector<double>& table, Rng& rng) {
  std::uint32_t generation = 0;
  const auto alive = grow_tree(d_root, law, p, options, rng, generation);
  if (alive == 0) return 0.0;
  if (generation >= options.generation_cap) return 1.0;
  const double e = table[options.generation_cap - generation];
  return 1.0 - std::pow(e, static_cast<double>(alive));
}

}  // namespace

bool simulate_percolated_tree(std::uint32_t d_root, const OffspringLaw& law, double p,
                              const TreeSimOptions& options, Rng& rng) {
  std::uint32_t generation = 0;
  return grow_tree(d_root, law, p, options, rng, generation) > 0;
}

Estimate estimate_tree_survival(std::uint32_t d_root, const OffspringLaw& law, double p,
                                const TreeSimOptions& options, std::uint64_t trials,
                                std::uint64_t seed, unsigned threads) {
  const auto table = lineage_extinction_table(law, p, options.generation_cap);
  std::vector<double> weight(trials, 0.0);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    Rng rng(derive_seed(seed, i));
    weight[i] = survival_weight(d_root, law, p, options, table, rng);
  });
  return summarize(weight);
}

Estimate estimate_tree_survival(const DegreeSequence& seq, const OffspringLaw& law, double p,
                                const TreeSimOptions& options, std::uint64_t trials,
                                std::uint64_t seed, unsigned threads) {
  if (seq.n() == 0) throw std::invalid_argument("estimate_tree_survival: empty sequence");
  const auto table = lineage_extinction_table(law, p, options.generation_cap);
  std::vector<double> weight(trials, 0.0);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    Rng rng(derive_seed(seed, i));
    const auto root = seq.d_plus()[rng.below(seq.n())];
    weight[i] = survival_weight(root, law, p, options, table, rng);
  });
  return summarize(weight);
}

double predicted_red_density(const DegreeSequence& seq, double p) {
  return theory::q_star_sum(seq, p);
}

}  // namespace cobranet::tree
