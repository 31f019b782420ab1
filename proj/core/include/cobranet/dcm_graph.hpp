#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "cobranet/degree_model.hpp"
#include "cobranet/rng.hpp"

namespace cobranet {

/// Directed multigraph in compressed adjacency form. Out-slot j of vertex x
/// holds the head of x's j-th outgoing edge; self-loops and parallel edges
/// are kept.
class Digraph {
 public:
  Digraph() = default;

  /// Builds from per-vertex head lists.
  explicit Digraph(const std::vector<std::vector<Vertex>>& out_adj);

  std::size_t n() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t m() const { return heads_.size(); }

  std::uint32_t out_degree(Vertex x) const { return offsets_[x + 1] - offsets_[x]; }

  /// The out-degree head slots of x, with multiplicity. Throws
  /// std::out_of_range for x >= n.
  std::span<const Vertex> out_neighbors(Vertex x) const;

  /// Head of out-slot `slot` of x. Unchecked.
  Vertex head(Vertex x, std::uint32_t slot) const { return heads_[offsets_[x] + slot]; }

  /// Realized in-degree of every vertex.
  std::vector<std::uint32_t> in_degrees() const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  friend Digraph sample_dcm(const DegreeSequence&, Rng&);

  std::vector<std::uint32_t> offsets_;
  std::vector<Vertex> heads_;
};

/// Uniform directed configuration-model multigraph: each vertex x gets
/// d_plus[x] outgoing slots and d_minus[x] incoming slots, and the incoming
/// slots are matched to the outgoing ones by a uniform random permutation.
/// Throws std::invalid_argument when the degree sums differ.
Digraph sample_dcm(const DegreeSequence& seq, Rng& rng);

/// One "tail head" pair per line.
void write_edge_list(const Digraph& g, std::ostream& out);

}  // namespace cobranet
