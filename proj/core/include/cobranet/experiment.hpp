#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/degree_model.hpp"
#include "cobranet/forward_dynamics.hpp"
#include "cobranet/theory.hpp"

namespace cobranet::experiment {

inline constexpr const char* kToolVersion = "0.1.0";

/// Theory summary for one degree sequence and a list of bias values, as a
/// JSON document: {rho, lambda, p_c, delta_max, results: [{p, regime,
/// z_star, q_star_closed, q_star_sum}, ...]}. With a single bias value the
/// per-p fields are repeated at top level. Throws std::invalid_argument for
/// p = 1 (q_star undefined) and for s != 2.
std::string theory_report(const DegreeSequence& seq, const std::vector<double>& p_values,
                          int stubbornness = 2);

/// Density runs: one graph sampled from derive_seed(seed, 0), then trial i
/// seeded with derive_seed(seed, i + 1), all from the all-red start.
struct SimulationConfig {
  double p = 0.3;
  std::uint32_t stubbornness = 2;
  double t_max = 30.0;
  double sample_dt = 0.5;
  std::uint64_t trials = 1;
};

struct SimulationResult {
  std::uint64_t graph_seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<DensitySeries> trials;
};

SimulationResult run_simulation(const DegreeSequence& seq, const SimulationConfig& config,
                                std::uint64_t seed, unsigned threads, Digraph* graph_out = nullptr);

/// CSV with header "trial,time,red_density".
void write_density_csv(const SimulationResult& result, std::ostream& out);

/// Per-sample mean over trials; all trials must share sample times.
DensitySeries trial_mean(const SimulationResult& result);

/// Mean of the samples with t in [t0, t1].
double window_mean(const DensitySeries& series, double t0, double t1);

/// Value of the sample at the largest time <= t.
double value_at(const DensitySeries& series, double t);

/// Least-squares slope of density against time over samples in [t0, t1].
double trend_slope(const DensitySeries& series, double t0, double t1);

struct PhaseRow {
  double rho = 0.0;
  double p = 0.0;
  theory::Phase regime = theory::Phase::Subcritical;
  double p_c = 0.0;
};

/// Rows for every (rho, p) pair. Throws for rho outside (0, 1/2].
std::vector<PhaseRow> phase_diagram(const std::vector<double>& rho_grid,
                                    const std::vector<double>& p_grid);

/// CSV with header "rho,p,regime,p_c".
void write_phase_csv(const std::vector<PhaseRow>& rows, std::ostream& out);

/// `steps` evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t steps);

enum class Scale { Full, Desk };

struct Fig3Profile {
  std::string name;
  DegreeProfile profile;
};

/// The three profiles (red: all (6,6); green: half (10,5), half (5,10);
/// blue: half (10,2), half (2,10)) at n vertices. n must be even.
std::vector<Fig3Profile> fig3_profiles(std::uint64_t n);

struct Fig3Run {
  std::string profile;
  double p = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double p_c = 0.0;
  double q_star = 0.0;
  std::string csv_file;
  SimulationResult result;
};

struct Fig3Options {
  Scale scale = Scale::Desk;
  std::uint64_t seed = 20240501;
  unsigned threads = 1;
  std::vector<double> p_values = {0.3, 0.45};
  std::uint64_t trials = 5;
  double t_max = 50.0;
  double sample_dt = 0.5;
};

std::uint64_t fig3_vertex_count(Scale scale);

/// Runs every (profile, p) pair and, when output_dir is non-empty, writes
/// one CSV per run, fig3.gp (gnuplot script with the q_star lines) and
/// manifest.json.
std::vector<Fig3Run> run_fig3(const Fig3Options& options,
                              const std::filesystem::path& output_dir);

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

/// Manifest written next to experiment outputs.
struct RunManifest {
  std::string command;
  std::string spec_json;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  double wall_clock_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> output_digests;

  std::string to_json() const;
};

}  // namespace cobranet::experiment
