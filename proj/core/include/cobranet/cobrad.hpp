#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/estimate.hpp"
#include "cobranet/marks.hpp"
#include "cobranet/rng.hpp"

namespace cobranet {

using Label = Vertex;

enum class StepOutcome {
  Idle,    ///< no particles at the ringing vertex
  Die,     ///< every observation biased
  Move,    ///< unbiased observations resolve to one vertex
  Branch,  ///< unbiased observations resolve to two or more vertices
};

/// Labeled particles of the coalescing-branching-dying system. Each vertex
/// holds a set of labels, so two particles with the same label on the same
/// vertex are one particle.
class ParticleConfig {
 public:
  ParticleConfig() = default;

  /// One particle labeled x at each x in `initial`.
  static ParticleConfig init_particles(std::span<const Vertex> initial);

  /// Sorted labels at x (empty if unoccupied).
  std::span<const Label> labels_at(Vertex x) const;
  bool occupied(Vertex x) const { return sites_.contains(x); }
  /// Occupied vertices, in no particular order.
  std::span<const Vertex> occupied_vertices() const { return occupied_; }

  bool alive(Label a) const { return multiplicity_.contains(a); }
  std::size_t alive_label_count() const { return multiplicity_.size(); }
  std::vector<Label> alive_labels() const;
  std::size_t particle_count() const { return particles_; }

  /// Recomputes the label and particle tallies from the per-vertex sets.
  bool consistent() const;

 private:
  friend StepOutcome step(const Digraph&, ParticleConfig&, const MarkEvent&);

  struct Site {
    std::vector<Label> labels;
    std::size_t index = 0;
  };

  void merge_into(Vertex y, std::span<const Label> labels);
  void clear(Vertex x);

  std::unordered_map<Vertex, Site> sites_;
  std::vector<Vertex> occupied_;
  std::unordered_map<Label, std::uint32_t> multiplicity_;
  std::size_t particles_ = 0;
};

/// Applies one event. Particles at ev.vertex go to every distinct vertex
/// reached by an unbiased slot, or die when all bias bits are set. Arriving
/// labels merge into the target's set.
StepOutcome step(const Digraph& g, ParticleConfig& config, const MarkEvent& ev);

/// Runs the particle system from one particle per vertex in `initial` over
/// the stream, and reports per entry of `initial` whether that label is
/// still present at the end.
std::vector<bool> run_backward(const Digraph& g, const MarkStream& stream,
                               std::span<const Vertex> initial);

struct SurvivalOptions {
  double p = 0.0;
  std::uint32_t stubbornness = 2;
  double horizon = 0.0;
  /// Start vertex; nullopt draws a uniform vertex per trial.
  std::optional<Vertex> start;
};

/// Fraction of trials in which a single particle survives to the horizon.
/// Only occupied vertices ring (total rate = number of occupied vertices),
/// which has the same law as running the full vertex clock.
Estimate estimate_survival(const Digraph& g, const SurvivalOptions& options,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace cobranet
