#pragma once

#include <cstdint>
#include <vector>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/marks.hpp"
#include "cobranet/rng.hpp"

namespace cobranet {

enum class Color : std::uint8_t { Red = 0, Blue = 1 };

/// Opinion of every vertex, with the red count kept in step with writes.
class OpinionConfig {
 public:
  OpinionConfig() = default;
  OpinionConfig(std::size_t n, Color fill);
  explicit OpinionConfig(std::vector<Color> colors);

  static OpinionConfig all_red(std::size_t n) { return {n, Color::Red}; }
  static OpinionConfig all_blue(std::size_t n) { return {n, Color::Blue}; }

  std::size_t n() const { return colors_.size(); }
  Color operator[](Vertex x) const { return colors_[x]; }
  void set(Vertex x, Color c);

  std::size_t red_count() const { return red_count_; }
  double red_density() const;
  /// Full recount; equals red_count() at all times.
  std::size_t recount_red() const;

  const std::vector<Color>& colors() const { return colors_; }

  friend bool operator==(const OpinionConfig&, const OpinionConfig&) = default;

 private:
  std::vector<Color> colors_;
  std::size_t red_count_ = 0;
};

/// Color the updating vertex takes: blue iff every observation is seen blue,
/// where observation i is blue when its bias bit is set or the neighbor in
/// out-slot slots[i] is currently blue. All observations read the
/// pre-event state, self-loops included.
Color updated_color(const Digraph& g, const OpinionConfig& config, const MarkEvent& ev);

void apply_event(const Digraph& g, OpinionConfig& config, const MarkEvent& ev);

/// Applies every event of the stream in order to a copy of `initial`.
OpinionConfig run_forward(const Digraph& g, const MarkStream& stream, OpinionConfig initial);

struct DensitySeries {
  std::vector<double> sample_times;
  std::vector<double> red_density;
};

struct DensityOptions {
  double p = 0.0;
  std::uint32_t stubbornness = 2;
  double horizon = 0.0;
  double sample_dt = 1.0;
};

/// Streams the superposed vertex clock (see MarkSource) up to the horizon
/// and records the red density at t = 0, dt, 2dt, ... <= horizon. The value
/// at a sample instant includes every event up to that instant. If
/// `final_state` is non-null it receives the configuration at the horizon;
/// this equals run_forward over generate_marks(..., Superposition) with an
/// identically seeded Rng.
DensitySeries simulate_density(const Digraph& g, const DensityOptions& options,
                               OpinionConfig initial, Rng& rng,
                               OpinionConfig* final_state = nullptr);

}  // namespace cobranet
