#pragma once

#include <cstdint>
#include <string_view>

#include "cobranet/degree_model.hpp"

namespace cobranet::theory {

/// Eventual outcome of a dual particle visiting a tree vertex: die, move to
/// one child, or branch to two distinct children.
struct OutcomeProbs {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double mean_offspring() const { return p1 + 2.0 * p2; }
};

enum class Phase { Subcritical, Supercritical };

std::string_view to_string(Phase phase);

struct Regime {
  Phase tag = Phase::Subcritical;
  double p_c = 0.0;
  double z_star = 0.0;
};

/// The closed forms here hold for stubbornness 2 only. Throws
/// std::invalid_argument("theory available only for s=2") otherwise.
void require_supported_stubbornness(int s);

/// Outcome probabilities at a vertex with `d` children.
OutcomeProbs outcome_probs_for_degree(std::uint32_t d, double p);

/// Outcome probabilities averaged over the in-degree-biased out-degree law.
OutcomeProbs averaged_outcome_probs(double rho, double p);

/// Critical bias (sqrt(1 - rho) - (1 - rho)) / rho, for rho in (0, 1].
double p_critical(double rho);

/// Smallest fixed point of p0 + p1 z + p2 z^2 = z for the averaged law;
/// equals 1 exactly when p >= p_critical(rho).
double z_star(double p, double rho);

/// Extinction probability of the percolated tree rooted at a vertex with
/// d_root children.
double z_hat_root(std::uint32_t d_root, double p, double rho);

/// Limiting red density from rho and lambda. For p >= p_critical(rho) the
/// first factor is clamped at 0, so the result is 0. Throws for p = 1.
double q_star_closed(double p, double rho, double lambda);

/// Limiting red density as the per-vertex average of 1 - z_hat_root.
double q_star_sum(const DegreeSequence& seq, double p);

Regime classify(double p, double rho);

}  // namespace cobranet::theory
