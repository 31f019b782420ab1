#include "cobranet/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cobranet/cobrad.hpp"
#include "cobranet/forward_dynamics.hpp"

namespace cobranet::duality {

std::string MismatchReport::describe() const {
  std::ostringstream out;
  out << "seed " << seed << ": " << events << " events, " << mismatches.size() << " mismatches";
  if (!mismatches.empty()) {
    out << " at vertices";
    for (auto x : mismatches) out << ' ' << x;
    out << " (replay with --seed " << seed << " --dump-marks)";
  }
  return out.str();
}

MismatchReport verify_pathwise(const Digraph& g, const PathwiseOptions& options,
                               std::span<const Vertex> subset, std::uint64_t seed) {
  if (subset.empty()) throw std::invalid_argument("verify_pathwise: empty vertex set");
  Rng rng(seed);
  const auto stream =
      generate_marks(g, options.horizon, options.stubbornness, options.p, rng, options.discipline);
  const auto forward = run_forward(g, stream, OpinionConfig::all_red(g.n()));
  const auto survived = run_backward(g, stream.reverse(), subset);

  MismatchReport report;
  report.seed = seed;
  report.events = stream.size();
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const bool blue = forward[subset[i]] == Color::Blue;
    report.blue += blue ? 1 : 0;
    if (blue == survived[i]) report.mismatches.push_back(subset[i]);
  }
  return report;
}

MismatchReport verify_pathwise(const Digraph& g, const PathwiseOptions& options,
                               std::uint64_t seed) {
  std::vector<Vertex> all(g.n());
  std::iota(all.begin(), all.end(), Vertex{0});
  return verify_pathwise(g, options, all, seed);
}

DistributionalReport verify_distributional(const Digraph& g, double horizon, double p,
                                           std::uint32_t stubbornness, std::uint64_t trials,
                                           std::uint64_t seed) {
  const auto n = g.n();
  if (n == 0 || n > 4) throw std::invalid_argument("verify_distributional: need 1 <= n <= 4");
  if (trials == 0) throw std::invalid_argument("verify_distributional: trials must be >= 1");

  const std::size_t cells = std::size_t{1} << n;
  DistributionalReport report;
  report.trials = trials;
  std::vector<std::uint64_t> forward(cells, 0);
  std::vector<std::uint64_t> backward(cells, 0);

  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});

  Rng forward_rng(derive_seed(seed, 0));
  Rng backward_rng(derive_seed(seed, 1));
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto fs = generate_marks(g, horizon, stubbornness, p, forward_rng);
    const auto colors = run_forward(g, fs, OpinionConfig::all_red(n));
    std::size_t cell = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (colors[static_cast<Vertex>(x)] == Color::Blue) cell |= std::size_t{1} << x;
    ++forward[cell];

    const auto bs = generate_marks(g, horizon, stubbornness, p, backward_rng);
    const auto alive = run_backward(g, bs, all);
    cell = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (!alive[x]) cell |= std::size_t{1} << x;
    ++backward[cell];
  }

  const double total = static_cast<double>(trials);
  report.forward.resize(cells);
  report.backward.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double f = static_cast<double>(forward[c]) / total;
    const double b = static_cast<double>(backward[c]) / total;
    report.forward[c] = f;
    report.backward[c] = b;
    const double dev = std::abs(f - b);
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    const double se = std::sqrt((f * (1.0 - f) + b * (1.0 - b)) / total);
    if (se > 0.0)
      report.max_z = std::max(report.max_z, dev / se);
    else if (dev > 0.0)
      report.max_z = INFINITY;
  }
  return report;
}

}  // namespace cobranet::duality
