#include "cobranet/experiment.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cobranet/parallel.hpp"
#include "cobranet/rng.hpp"

namespace cobranet::experiment {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form.
std::string num(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

json p_entry(const DegreeSequence& seq, const SequenceStats& stats, double p) {
  const auto regime = theory::classify(p, stats.rho);
  return {{"p", p},
          {"regime", std::string(theory::to_string(regime.tag))},
          {"z_star", regime.z_star},
          {"q_star_closed", theory::q_star_closed(p, stats.rho, stats.lambda)},
          {"q_star_sum", theory::q_star_sum(seq, p)}};
}

}  // namespace

std::string theory_report(const DegreeSequence& seq, const std::vector<double>& p_values,
                          int stubbornness) {
  theory::require_supported_stubbornness(stubbornness);
  const auto report = validate(seq, ValidationMode::TheoryValid);
  if (!report.ok) throw std::invalid_argument("profile is not theory-valid: " + report.violations.front());
  for (double p : p_values)
    if (p == 1.0) throw std::invalid_argument("q_star is undefined at p = 1");

  const auto stats = compute_stats(seq);
  json out = {{"rho", stats.rho},
              {"lambda", stats.lambda},
              {"p_c", theory::p_critical(stats.rho)},
              {"delta_max", stats.delta_max},
              {"n", seq.n()},
              {"m", seq.m()}};
  out["results"] = json::array();
  for (double p : p_values) out["results"].push_back(p_entry(seq, stats, p));
  if (p_values.size() == 1)
    for (auto& [key, value] : out["results"][0].items()) out[key] = value;
  if (!report.warnings.empty()) out["warnings"] = report.warnings;
  return out.dump(2);
}

SimulationResult run_simulation(const DegreeSequence& seq, const SimulationConfig& config,
                                std::uint64_t seed, unsigned threads, Digraph* graph_out) {
  if (config.trials == 0) throw std::invalid_argument("run_simulation: trials must be >= 1");
  SimulationResult result;
  result.graph_seed = derive_seed(seed, 0);
  Rng graph_rng(result.graph_seed);
  const Digraph g = sample_dcm(seq, graph_rng);

  result.trial_seeds.resize(config.trials);
  result.trials.resize(config.trials);
  for (std::uint64_t i = 0; i < config.trials; ++i) result.trial_seeds[i] = derive_seed(seed, i + 1);

  const DensityOptions options{config.p, config.stubbornness, config.t_max, config.sample_dt};
  parallel_for(config.trials, threads, [&](std::uint64_t i) {
    Rng rng(result.trial_seeds[i]);
    result.trials[i] = simulate_density(g, options, OpinionConfig::all_red(g.n()), rng);
  });
  if (graph_out) *graph_out = g;
  return result;
}

void write_density_csv(const SimulationResult& result, std::ostream& out) {
  out << "trial,time,red_density\n";
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    const auto& s = result.trials[i];
    for (std::size_t k = 0; k < s.sample_times.size(); ++k)
      out << i << ',' << num(s.sample_times[k]) << ',' << num(s.red_density[k]) << '\n';
  }
}

DensitySeries trial_mean(const SimulationResult& result) {
  if (result.trials.empty()) return {};
  DensitySeries mean;
  mean.sample_times = result.trials.front().sample_times;
  mean.red_density.assign(mean.sample_times.size(), 0.0);
  for (const auto& s : result.trials) {
    if (s.sample_times != mean.sample_times)
      throw std::invalid_argument("trial_mean: trials have different sample times");
    for (std::size_t k = 0; k < s.red_density.size(); ++k) mean.red_density[k] += s.red_density[k];
  }
  for (auto& v : mean.red_density) v /= static_cast<double>(result.trials.size());
  return mean;
}

double window_mean(const DensitySeries& series, double t0, double t1) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < series.sample_times.size(); ++k) {
    const double t = series.sample_times[k];
    if (t >= t0 && t <= t1) {
      sum += series.red_density[k];
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("window_mean: no samples in window");
  return sum / static_cast<double>(count);
}

double value_at(const DensitySeries& series, double t) {
  double value = NAN;
  for (std::size_t k = 0; k < series.sample_times.size() && series.sample_times[k] <= t; ++k)
    value = series.red_density[k];
  if (std::isnan(value)) throw std::invalid_argument("value_at: no sample at or before t");
  return value;
}

double trend_slope(const DensitySeries& series, double t0, double t1) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < series.sample_times.size(); ++k) {
    const double t = series.sample_times[k];
    if (t < t0 || t > t1) continue;
    const double y = series.red_density[k];
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  if (count < 2) throw std::invalid_argument("trend_slope: fewer than two samples in window");
  const double c = static_cast<double>(count);
  return (c * sty - st * sy) / (c * stt - st * st);
}

std::vector<PhaseRow> phase_diagram(const std::vector<double>& rho_grid,
                                    const std::vector<double>& p_grid) {
  std::vector<PhaseRow> rows;
  rows.reserve(rho_grid.size() * p_grid.size());
  for (double rho : rho_grid) {
    if (!(rho > 0.0 && rho <= 0.5))
      throw std::invalid_argument("phase_diagram: rho must lie in (0, 1/2], got " + num(rho));
    const double pc = theory::p_critical(rho);
    for (double p : p_grid) {
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("phase_diagram: p must lie in [0, 1]");
      rows.push_back({rho, p, p >= pc ? theory::Phase::Supercritical : theory::Phase::Subcritical, pc});
    }
  }
  return rows;
}

void write_phase_csv(const std::vector<PhaseRow>& rows, std::ostream& out) {
  out << "rho,p,regime,p_c\n";
  for (const auto& r : rows)
    out << num(r.rho) << ',' << num(r.p) << ',' << theory::to_string(r.regime) << ',' << num(r.p_c)
        << '\n';
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps == 0) return {};
  if (steps == 1) return {lo};
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  out.back() = hi;
  return out;
}

std::vector<Fig3Profile> fig3_profiles(std::uint64_t n) {
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("fig3_profiles: n must be even and positive");
  const auto half = n / 2;
  return {
      {"red", DegreeProfile{{{n, 6, 6}}}},
      {"green", DegreeProfile{{{half, 10, 5}, {half, 5, 10}}}},
      {"blue", DegreeProfile{{{half, 10, 2}, {half, 2, 10}}}},
  };
}

std::uint64_t fig3_vertex_count(Scale scale) { return scale == Scale::Full ? 10000 : 2000; }

namespace {

std::string p_tag(double p) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << p;
  return out.str();
}

void write_plot_script(const std::vector<Fig3Run>& runs, const std::vector<double>& p_values,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "# gnuplot script: trial-mean red density with the predicted plateau (dashed)\n";
  out << "set datafile separator ','\n";
  out << "set key top right\n";
  out << "set xlabel 't'\nset ylabel 'red density'\nset yrange [0:1.05]\n";
  out << "set terminal pngcairo size " << 600 * p_values.size() << ",450\n";
  out << "set output 'fig3.png'\n";
  out << "set multiplot layout 1," << p_values.size() << "\n";
  for (double p : p_values) {
    out << "set title 'p = " << p_tag(p) << "'\n";
    out << "plot \\\n";
    bool first = true;
    for (const auto& run : runs) {
      if (run.p != p) continue;
      if (!first) out << ", \\\n";
      first = false;
      out << "  '" << run.csv_file << "' using 2:3 with dots lc rgb '" << run.profile
          << "' title '" << run.profile << "', \\\n";
      out << "  " << num(run.q_star) << " with lines dt 2 lc rgb '" << run.profile
          << "' notitle";
    }
    out << "\n";
  }
  out << "unset multiplot\n";
}

}  // namespace

std::vector<Fig3Run> run_fig3(const Fig3Options& options,
                              const std::filesystem::path& output_dir) {
  const auto start = std::chrono::steady_clock::now();
  const auto n = fig3_vertex_count(options.scale);
  const auto profiles = fig3_profiles(n);

  std::vector<Fig3Run> runs;
  RunManifest manifest;
  manifest.command = std::string("experiment fig3 --scale ") +
                     (options.scale == Scale::Full ? "full" : "desk") + " --seed " +
                     std::to_string(options.seed);

  json spec = {{"scale", options.scale == Scale::Full ? "full" : "desk"},
               {"n", n},
               {"p_values", options.p_values},
               {"s", 2},
               {"t_max", options.t_max},
               {"sample_dt", options.sample_dt},
               {"trials", options.trials},
               {"seed", options.seed}};
  spec["profiles"] = json::array();

  std::uint64_t run_index = 0;
  for (const auto& prof : profiles) {
    spec["profiles"].push_back({{"name", prof.name}, {"profile", json::parse(prof.profile.to_json())}});
    const auto seq = build_sequence(prof.profile);
    const auto stats = compute_stats(seq);
    for (double p : options.p_values) {
      Fig3Run run;
      run.profile = prof.name;
      run.p = p;
      run.rho = stats.rho;
      run.lambda = stats.lambda;
      run.p_c = theory::p_critical(stats.rho);
      run.q_star = theory::q_star_closed(p, stats.rho, stats.lambda);
      run.csv_file = "fig3_" + prof.name + "_p" + p_tag(p) + ".csv";

      const auto run_seed = derive_seed(options.seed, ++run_index);
      SimulationConfig config{p, 2, options.t_max, options.sample_dt, options.trials};
      run.result = run_simulation(seq, config, run_seed, options.threads);

      manifest.seeds.emplace_back(run.csv_file + ":run", run_seed);
      manifest.seeds.emplace_back(run.csv_file + ":graph", run.result.graph_seed);
      for (std::size_t i = 0; i < run.result.trial_seeds.size(); ++i)
        manifest.seeds.emplace_back(run.csv_file + ":trial" + std::to_string(i),
                                    run.result.trial_seeds[i]);
      runs.push_back(std::move(run));
    }
  }

  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
    json theory_lines = json::array();
    for (const auto& run : runs) {
      const auto path = output_dir / run.csv_file;
      {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_density_csv(run.result, out);
      }
      manifest.output_digests.emplace_back(run.csv_file, file_sha256(path));
      theory_lines.push_back({{"profile", run.profile},
                              {"p", run.p},
                              {"rho", run.rho},
                              {"lambda", run.lambda},
                              {"p_c", run.p_c},
                              {"q_star", run.q_star},
                              {"csv", run.csv_file}});
    }
    {
      std::ofstream out(output_dir / "fig3.theory.json");
      out << theory_lines.dump(2) << '\n';
    }
    manifest.output_digests.emplace_back("fig3.theory.json",
                                         file_sha256(output_dir / "fig3.theory.json"));
    write_plot_script(runs, options.p_values, output_dir / "fig3.gp");
    manifest.output_digests.emplace_back("fig3.gp", file_sha256(output_dir / "fig3.gp"));

    manifest.spec_json = spec.dump();
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(output_dir / "manifest.json");
    out << manifest.to_json() << '\n';
  }
  return runs;
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

std::string RunManifest::to_json() const {
  json out = {{"tool_version", kToolVersion}, {"command", command}};
  out["spec"] = spec_json.empty() ? json::object() : json::parse(spec_json);
  out["seeds"] = json::object();
  for (const auto& [name, seed] : seeds) out["seeds"][name] = seed;
  out["wall_clock_seconds"] = wall_clock_seconds;
  out["outputs"] = json::object();
  for (const auto& [file, digest] : output_digests) out["outputs"][file] = {{"sha256", digest}};
  return out.dump(2);
}

}  // namespace cobranet::experiment
