#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cobranet/cobrad.hpp"
#include "cobranet/dcm_graph.hpp"
#include "cobranet/degree_model.hpp"
#include "cobranet/duality.hpp"
#include "cobranet/experiment.hpp"
#include "cobranet/gw_tree.hpp"
#include "cobranet/marks.hpp"
#include "cobranet/parallel.hpp"
#include "cobranet/theory.hpp"

namespace cobranet::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out;
};

struct ProfileOptions {
  std::string path;
  std::string blocks;
  std::optional<std::uint64_t> n;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--profile", path, "Degree profile JSON file");
    cmd->add_option("--blocks", blocks, "Inline profile: count:d_in:d_out[,count:d_in:d_out...]");
    cmd->add_option("--n", n, "Expected vertex count (must match the profile)");
  }

  DegreeProfile load() const {
    if (path.empty() == blocks.empty())
      throw std::invalid_argument("exactly one of --profile and --blocks is required");
    DegreeProfile profile;
    if (!path.empty()) {
      profile = DegreeProfile::load(path);
    } else {
      std::istringstream in(blocks);
      std::string item;
      while (std::getline(in, item, ',')) {
        DegreeBlock b;
        char c1 = 0, c2 = 0;
        std::istringstream fields(item);
        if (!(fields >> b.count >> c1 >> b.d_in >> c2 >> b.d_out) || c1 != ':' || c2 != ':')
          throw std::invalid_argument("malformed block '" + item + "'");
        profile.blocks.push_back(b);
      }
      profile.check();
    }
    if (n && *n != profile.total_vertices())
      throw std::invalid_argument("--n " + std::to_string(*n) + " does not match profile total " +
                                  std::to_string(profile.total_vertices()));
    return profile;
  }
};

std::uint64_t effective_seed(const GlobalOptions& g) {
  if (g.seed) return *g.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void check_validity(const DegreeSequence& seq, ValidationMode mode, std::ostream& err) {
  const auto report = validate(seq, mode);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (!report.ok) {
    std::string msg = "invalid degree sequence:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }
}

bool theory_applies(const DegreeSequence& seq, std::uint32_t s, double p) {
  return s == 2 && p < 1.0 && validate(seq, ValidationMode::TheoryValid).ok;
}

json theory_overlay(const DegreeSequence& seq, std::uint32_t s, double p) {
  const auto stats = compute_stats(seq);
  json j = {{"rho", stats.rho}, {"lambda", stats.lambda}, {"p", p}, {"s", s}};
  if (theory_applies(seq, s, p)) {
    j["p_c"] = theory::p_critical(stats.rho);
    j["q_star"] = theory::q_star_closed(p, stats.rho, stats.lambda);
  } else {
    j["p_c"] = nullptr;
    j["q_star"] = nullptr;
  }
  return j;
}

Digraph sample_graph(const DegreeSequence& seq, std::uint64_t seed, const std::string& dump) {
  Rng rng(derive_seed(seed, 0));
  auto g = sample_dcm(seq, rng);
  if (!dump.empty()) {
    std::ofstream out(dump);
    if (!out) throw std::runtime_error("cannot write " + dump);
    write_edge_list(g, out);
  }
  return g;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biased opinion dynamics on directed configuration-model graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", experiment::kToolVersion);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "64-bit base seed");
  app.add_option("--threads", global.threads, "Worker threads (default: $COBRANET_THREADS or 1)");
  app.add_option("--out", global.out, "Output file or directory");

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "Closed-form predictions for a profile");
  ProfileOptions theory_profile;
  theory_profile.add_to(theory_cmd);
  std::vector<double> theory_p{0.3};
  int theory_s = 2;
  theory_cmd->add_option("--p", theory_p, "Bias values")->check(CLI::Range(0.0, 1.0));
  theory_cmd->add_option("--s", theory_s, "Stubbornness");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Red-density trajectories from all-red");
  ProfileOptions sim_profile;
  sim_profile.add_to(sim_cmd);
  experiment::SimulationConfig sim_config;
  std::string sim_dump_graph;
  sim_cmd->add_option("--p", sim_config.p, "Bias")->required()->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--s", sim_config.stubbornness, "Stubbornness")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--t-max", sim_config.t_max, "Horizon")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--sample-dt", sim_config.sample_dt, "Sampling interval")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--trials", sim_config.trials, "Independent runs on one graph")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--dump-graph", sim_dump_graph, "Write the sampled edge list");

  // dual
  auto* dual_cmd = app.add_subcommand("dual", "Survival probability of the dual particle system");
  ProfileOptions dual_profile;
  dual_profile.add_to(dual_cmd);
  SurvivalOptions dual_opts;
  dual_opts.horizon = 30.0;
  std::optional<Vertex> dual_vertex;
  bool dual_all = false;
  std::uint64_t dual_trials = 1000;
  std::string dual_dump_graph;
  dual_cmd->add_option("--p", dual_opts.p, "Bias")->required()->check(CLI::Range(0.0, 1.0));
  dual_cmd->add_option("--s", dual_opts.stubbornness, "Stubbornness")->check(CLI::PositiveNumber);
  auto* vertex_opt = dual_cmd->add_option("--vertex", dual_vertex, "Start vertex");
  auto* all_opt =
      dual_cmd->add_flag("--all-vertices", dual_all, "Uniform start vertex per trial");
  vertex_opt->excludes(all_opt);
  dual_cmd->add_option("--t-max", dual_opts.horizon, "Horizon")->check(CLI::NonNegativeNumber);
  dual_cmd->add_option("--trials", dual_trials, "Trials")->check(CLI::PositiveNumber);
  dual_cmd->add_option("--dump-graph", dual_dump_graph, "Write the sampled edge list");

  // tree
  auto* tree_cmd = app.add_subcommand("tree", "Monte-Carlo survival of the percolated random tree");
  ProfileOptions tree_profile;
  tree_profile.add_to(tree_cmd);
  double tree_p = 0.3;
  std::optional<std::uint32_t> tree_root;
  std::uint64_t tree_trials = 100000;
  tree::TreeSimOptions tree_opts;
  tree_cmd->add_option("--p", tree_p, "Bias")->required()->check(CLI::Range(0.0, 1.0));
  tree_cmd->add_option("--root-degree", tree_root,
                       "Children of the root (default: out-degree of a uniform vertex)")
      ->check(CLI::PositiveNumber);
  tree_cmd->add_option("--trials", tree_trials, "Trials")->check(CLI::PositiveNumber);
  tree_cmd->add_option("--gen-cap", tree_opts.generation_cap, "Generation cap")
      ->check(CLI::PositiveNumber);

  // verify-duality
  auto* verify_cmd =
      app.add_subcommand("verify-duality", "Pathwise check of forward opinions against particles");
  ProfileOptions verify_profile;
  verify_profile.add_to(verify_cmd);
  std::vector<double> verify_p{0.5};
  std::uint32_t verify_s = 2;
  double verify_t = 10.0;
  std::uint64_t verify_seeds = 200;
  std::string verify_dump;
  verify_cmd->add_option("--p", verify_p, "Bias values")->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--s", verify_s, "Stubbornness")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--t-max", verify_t, "Horizon")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seeds", verify_seeds, "Number of seeds")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--dump-marks", verify_dump,
                         "Write the mark log of the first failing seed (or the first seed)");

  // phase-diagram
  auto* phase_cmd = app.add_subcommand("phase-diagram", "Regime grid over (rho, p)");
  double rho_min = 0.01, rho_max = 0.5;
  std::size_t rho_steps = 50, p_steps = 101;
  phase_cmd->add_option("--rho-min", rho_min)->check(CLI::Range(0.0, 0.5));
  phase_cmd->add_option("--rho-max", rho_max)->check(CLI::Range(0.0, 0.5));
  phase_cmd->add_option("--rho-steps", rho_steps)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--p-steps", p_steps)->check(CLI::PositiveNumber);

  // experiment fig3
  auto* exp_cmd = app.add_subcommand("experiment", "Experiment presets");
  exp_cmd->require_subcommand(1);
  auto* fig3_cmd = exp_cmd->add_subcommand("fig3", "Three-profile density experiment");
  std::string scale = "desk";
  fig3_cmd->add_option("--scale", scale, "full (n=10000) or desk (n=2000)")
      ->check(CLI::IsMember({"full", "desk"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const unsigned threads = resolve_threads(global.threads);

  try {
    if (theory_cmd->parsed()) {
      const auto seq = build_sequence(theory_profile.load());
      out << experiment::theory_report(seq, theory_p, theory_s) << '\n';
      return 0;
    }

    if (sim_cmd->parsed()) {
      const auto seq = build_sequence(sim_profile.load());
      check_validity(seq, ValidationMode::Generable, err);
      const auto seed = effective_seed(global);
      Digraph g;
      const auto result = experiment::run_simulation(seq, sim_config, seed, threads, &g);
      if (!sim_dump_graph.empty()) {
        std::ofstream dump(sim_dump_graph);
        write_edge_list(g, dump);
      }
      if (global.out.empty()) {
        err << "seed " << seed << '\n';
        experiment::write_density_csv(result, out);
      } else {
        {
          std::ofstream csv(global.out);
          if (!csv) throw std::runtime_error("cannot write " + global.out);
          experiment::write_density_csv(result, csv);
        }
        std::ofstream overlay(global.out + ".theory.json");
        auto j = theory_overlay(seq, sim_config.stubbornness, sim_config.p);
        j["seed"] = seed;
        overlay << j.dump(2) << '\n';
        out << "seed " << seed << "\nwrote " << global.out << " and " << global.out
            << ".theory.json\n";
      }
      return 0;
    }

    if (dual_cmd->parsed()) {
      const auto seq = build_sequence(dual_profile.load());
      check_validity(seq, ValidationMode::Generable, err);
      if (!dual_vertex && !dual_all)
        throw std::invalid_argument("one of --vertex or --all-vertices is required");
      const auto seed = effective_seed(global);
      const auto g = sample_graph(seq, seed, dual_dump_graph);
      dual_opts.start = dual_vertex;
      const auto est = estimate_survival(g, dual_opts, dual_trials, derive_seed(seed, 1), threads);
      out << "seed " << seed << '\n';
      out << std::setprecision(6) << "survival " << est.mean << " +/- " << est.std_error << " ("
          << est.trials << " trials)\n";
      if (theory_applies(seq, dual_opts.stubbornness, dual_opts.p)) {
        const auto stats = compute_stats(seq);
        const double prediction =
            dual_vertex ? 1.0 - theory::z_hat_root(g.out_degree(*dual_vertex), dual_opts.p, stats.rho)
                        : theory::q_star_sum(seq, dual_opts.p);
        out << "theory " << prediction << '\n';
      } else {
        out << "theory n/a (requires s=2, p<1 and min out-degree >= 2)\n";
      }
      return 0;
    }

    if (tree_cmd->parsed()) {
      const auto seq = build_sequence(tree_profile.load());
      check_validity(seq, ValidationMode::TheoryValid, err);
      const auto seed = effective_seed(global);
      const auto law = tree::offspring_law(seq);
      const double rho = compute_stats(seq).rho;
      const auto est =
          tree_root ? tree::estimate_tree_survival(*tree_root, law, tree_p, tree_opts, tree_trials,
                                                   seed, threads)
                    : tree::estimate_tree_survival(seq, law, tree_p, tree_opts, tree_trials, seed,
                                                   threads);
      // Predictions averaged over the root out-degree when it is random.
      double theory_value = 0.0, at_cap = 0.0;
      const auto add = [&](std::uint32_t d, double w) {
        if (tree_p < 1.0) theory_value += w * (1.0 - theory::z_hat_root(d, tree_p, rho));
        at_cap +=
            w * (1.0 - tree::extinction_by_generation(d, law, tree_p, tree_opts.generation_cap));
      };
      if (tree_root) {
        add(*tree_root, 1.0);
      } else {
        std::map<std::uint32_t, std::uint64_t> counts;
        for (auto d : seq.d_plus()) ++counts[d];
        for (auto [d, c] : counts) add(d, static_cast<double>(c) / static_cast<double>(seq.n()));
      }
      out << "seed " << seed << '\n';
      out << std::setprecision(6) << "survival " << est.mean << " +/- " << est.std_error << " ("
          << est.trials << " trials, generation cap " << tree_opts.generation_cap << ")\n";
      if (tree_p < 1.0) out << "theory " << theory_value << '\n';
      out << "theory_at_cap " << at_cap << '\n';
      return 0;
    }

    if (verify_cmd->parsed()) {
      const auto seq = build_sequence(verify_profile.load());
      check_validity(seq, ValidationMode::Generable, err);
      const auto seed = effective_seed(global);
      out << "seed " << seed << '\n';
      std::size_t failures = 0;
      bool dumped = false;
      for (double p : verify_p) {
        for (std::uint64_t k = 0; k < verify_seeds; ++k) {
          const auto run_seed = derive_seed(seed, k);
          const auto g = sample_graph(seq, run_seed, "");
          duality::PathwiseOptions opts{verify_t, p, verify_s, MarkDiscipline::PerVertex};
          const auto report = duality::verify_pathwise(g, opts, derive_seed(run_seed, 1));
          if (!report.ok()) {
            ++failures;
            err << "MISMATCH p=" << p << ' ' << report.describe() << '\n';
          }
          if (!verify_dump.empty() && !dumped && (!report.ok() || k == 0)) {
            Rng rng(report.seed);
            const auto stream = generate_marks(g, verify_t, verify_s, p, rng);
            std::ofstream dump(verify_dump, std::ios::binary);
            write_mark_log(stream, g.n(), p, report.seed, dump);
            dumped = !report.ok();
          }
        }
      }
      out << (failures == 0 ? "ok" : "FAILED") << ": " << failures << " mismatching runs out of "
          << verify_p.size() * verify_seeds << '\n';
      return failures == 0 ? 0 : 1;
    }

    if (phase_cmd->parsed()) {
      const auto rows = experiment::phase_diagram(experiment::linspace(rho_min, rho_max, rho_steps),
                                                  experiment::linspace(0.0, 1.0, p_steps));
      if (global.out.empty()) {
        experiment::write_phase_csv(rows, out);
      } else {
        std::ofstream csv(global.out);
        if (!csv) throw std::runtime_error("cannot write " + global.out);
        experiment::write_phase_csv(rows, csv);
      }
      return 0;
    }

    if (fig3_cmd->parsed()) {
      if (global.out.empty()) throw std::invalid_argument("experiment fig3 requires --out DIR");
      experiment::Fig3Options opts;
      opts.scale = scale == "full" ? experiment::Scale::Full : experiment::Scale::Desk;
      if (global.seed) opts.seed = *global.seed;
      opts.threads = threads;
      out << "seed " << opts.seed << '\n';
      const auto runs = experiment::run_fig3(opts, global.out);
      out << std::fixed << std::setprecision(4);
      for (const auto& run : runs) {
        const auto mean = experiment::trial_mean(run.result);
        out << run.profile << " p=" << run.p << " plateau[20,30]="
            << experiment::window_mean(mean, 20.0, 30.0) << " q_star=" << run.q_star
            << " final=" << mean.red_density.back() << '\n';
      }
      out << "wrote " << global.out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace cobranet::cli
