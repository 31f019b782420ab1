#include "cobranet/dcm_graph.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace cobranet {

Digraph::Digraph(const std::vector<std::vector<Vertex>>& out_adj) {
  offsets_.reserve(out_adj.size() + 1);
  offsets_.push_back(0);
  for (const auto& row : out_adj) {
    for (auto y : row) {
      if (y >= out_adj.size()) throw std::invalid_argument("edge head out of range");
      heads_.push_back(y);
    }
    offsets_.push_back(static_cast<std::uint32_t>(heads_.size()));
  }
}

std::span<const Vertex> Digraph::out_neighbors(Vertex x) const {
  if (x >= n())
    throw std::out_of_range("vertex " + std::to_string(x) + " out of range (n = " +
                            std::to_string(n()) + ")");
  return {heads_.data() + offsets_[x], heads_.data() + offsets_[x + 1]};
}

std::vector<std::uint32_t> Digraph::in_degrees() const {
  std::vector<std::uint32_t> in(n(), 0);
  for (auto y : heads_) ++in[y];
  return in;
}

Digraph sample_dcm(const DegreeSequence& seq, Rng& rng) {
  if (seq.in_degree_sum() != seq.out_degree_sum())
    throw std::invalid_argument("sample_dcm: degree sums differ (" +
                                std::to_string(seq.in_degree_sum()) + " vs " +
                                std::to_string(seq.out_degree_sum()) + ")");
  if (seq.m() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("sample_dcm: too many edges");

  Digraph g;
  const auto n = seq.n();
  g.offsets_.resize(n + 1);
  g.offsets_[0] = 0;
  for (std::size_t x = 0; x < n; ++x) g.offsets_[x + 1] = g.offsets_[x] + seq.d_plus()[x];

  // Incoming slots in vertex order, then a Fisher-Yates shuffle against the
  // fixed order of outgoing slots.
  g.heads_.reserve(seq.m());
  for (std::size_t y = 0; y < n; ++y)
    g.heads_.insert(g.heads_.end(), seq.d_minus()[y], static_cast<Vertex>(y));
  for (std::size_t i = g.heads_.size(); i > 1; --i) {
    const auto j = rng.below(i);
    std::swap(g.heads_[i - 1], g.heads_[j]);
  }
  return g;
}

void write_edge_list(const Digraph& g, std::ostream& out) {
  for (Vertex x = 0; x < g.n(); ++x)
    for (auto y : g.out_neighbors(x)) out << x << ' ' << y << '\n';
}

}  // namespace cobranet
