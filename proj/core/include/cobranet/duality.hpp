#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/marks.hpp"

namespace cobranet::duality {

struct PathwiseOptions {
  double horizon = 10.0;
  double p = 0.5;
  std::uint32_t stubbornness = 2;
  MarkDiscipline discipline = MarkDiscipline::PerVertex;
};

struct MismatchReport {
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  /// Vertices x in A where "x is blue at the horizon" disagrees with
  /// "label x is extinct after the reversed stream". Must be empty.
  std::vector<Vertex> mismatches;
  /// Forward blue count over A, for diagnostics.
  std::size_t blue = 0;

  bool ok() const { return mismatches.empty(); }
  /// One-line description, including the seed needed to replay.
  std::string describe() const;
};

/// Draws one mark stream from `seed`, runs the opinions forward from all-red
/// and the particle system from one particle per vertex of A over the
/// reversed stream, and compares the two vertex by vertex.
MismatchReport verify_pathwise(const Digraph& g, const PathwiseOptions& options,
                               std::span<const Vertex> subset, std::uint64_t seed);

/// Same, with A = every vertex.
MismatchReport verify_pathwise(const Digraph& g, const PathwiseOptions& options,
                               std::uint64_t seed);

struct DistributionalReport {
  /// Cell c (bitmask over vertices) holds the frequency of "exactly the
  /// vertices in c are blue" (forward) or "exactly the labels in c are
  /// extinct" (backward).
  std::vector<double> forward;
  std::vector<double> backward;
  std::uint64_t trials = 0;
  double max_abs_deviation = 0.0;
  /// max |forward - backward| / standard error of the difference, over cells
  /// where the pooled standard error is positive.
  double max_z = 0.0;
};

/// Monte-Carlo comparison of the joint law of colors and of label
/// extinctions on a graph with n <= 4. Forward and backward sides use
/// independent streams.
DistributionalReport verify_distributional(const Digraph& g, double horizon, double p,
                                           std::uint32_t stubbornness, std::uint64_t trials,
                                           std::uint64_t seed);

}  // namespace cobranet::duality
