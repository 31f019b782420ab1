#include "cobranet/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cobranet::theory {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + ": bias must lie in [0, 1], got " +
                                std::to_string(p));
}

void check_rho_open(double rho, const char* what) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument(std::string(what) + ": rho must lie in (0, 1), got " +
                                std::to_string(rho));
}

}  // namespace

std::string_view to_string(Phase phase) {
  return phase == Phase::Supercritical ? "supercritical" : "subcritical";
}

void require_supported_stubbornness(int s) {
  if (s != 2) throw std::invalid_argument("theory available only for s=2");
}

OutcomeProbs outcome_probs_for_degree(std::uint32_t d, double p) {
  if (d == 0) throw std::invalid_argument("outcome_probs_for_degree: degree must be >= 1");
  check_probability(p, "outcome_probs_for_degree");
  const double inv = 1.0 / d;
  const double q = 1.0 - p;
  return {p * p, q * (2.0 * (1.0 - inv) * p + inv * (1.0 + p)), (1.0 - inv) * q * q};
}

OutcomeProbs averaged_outcome_probs(double rho, double p) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("averaged_outcome_probs: rho must lie in (0, 1]");
  check_probability(p, "averaged_outcome_probs");
  const double q = 1.0 - p;
  return {p * p, q * (2.0 * p - p * rho + rho), (1.0 - rho) * q * q};
}

double p_critical(double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("p_critical: rho must lie in (0, 1], got " + std::to_string(rho));
  return (std::sqrt(1.0 - rho) - (1.0 - rho)) / rho;
}

double z_star(double p, double rho) {
  check_probability(p, "z_star");
  check_rho_open(rho, "z_star");
  if (p >= p_critical(rho)) return 1.0;
  const double q = 1.0 - p;
  return std::min(p * p / (q * q * (1.0 - rho)), 1.0);
}

double z_hat_root(std::uint32_t d_root, double p, double rho) {
  const double z = z_star(p, rho);
  if (z == 1.0) return 1.0;
  const auto probs = outcome_probs_for_degree(d_root, p);
  return probs.p0 + probs.p1 * z + probs.p2 * z * z;
}

double q_star_closed(double p, double rho, double lambda) {
  check_probability(p, "q_star_closed");
  if (p == 1.0) throw std::invalid_argument("q_star_closed: undefined at p = 1");
  check_rho_open(rho, "q_star_closed");
  const double survive = 1.0 - z_star(p, rho);
  const double root = 1.0 - p * p * (lambda - rho) / (1.0 - rho);
  return survive * root;
}

double q_star_sum(const DegreeSequence& seq, double p) {
  check_probability(p, "q_star_sum");
  if (p == 1.0) throw std::invalid_argument("q_star_sum: undefined at p = 1");
  const auto report = validate(seq, ValidationMode::TheoryValid);
  if (!report.ok) throw std::invalid_argument("q_star_sum: " + report.violations.front());
  const double rho = compute_stats(seq).rho;

  long double total = 0.0L;
  for (auto d : seq.d_plus()) total += 1.0L - z_hat_root(d, p, rho);
  return static_cast<double>(total / static_cast<long double>(seq.n()));
}

Regime classify(double p, double rho) {
  check_probability(p, "classify");
  check_rho_open(rho, "classify");
  const double pc = p_critical(rho);
  return {p >= pc ? Phase::Supercritical : Phase::Subcritical, pc, z_star(p, rho)};
}

}  // namespace cobranet::theory
