#include "cobranet/forward_dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cobranet {

OpinionConfig::OpinionConfig(std::size_t n, Color fill)
    : colors_(n, fill), red_count_(fill == Color::Red ? n : 0) {}

OpinionConfig::OpinionConfig(std::vector<Color> colors) : colors_(std::move(colors)) {
  red_count_ = recount_red();
}

void OpinionConfig::set(Vertex x, Color c) {
  const Color old = colors_[x];
  if (old == c) return;
  colors_[x] = c;
  if (c == Color::Red)
    ++red_count_;
  else
    --red_count_;
}

double OpinionConfig::red_density() const {
  return colors_.empty() ? 0.0 : static_cast<double>(red_count_) / static_cast<double>(n());
}

std::size_t OpinionConfig::recount_red() const {
  return static_cast<std::size_t>(std::count(colors_.begin(), colors_.end(), Color::Red));
}

Color updated_color(const Digraph& g, const OpinionConfig& config, const MarkEvent& ev) {
  for (std::size_t i = 0; i < ev.slots.size(); ++i) {
    if (ev.bias[i]) continue;
    if (config[g.head(ev.vertex, ev.slots[i])] == Color::Red) return Color::Red;
  }
  return Color::Blue;
}

void apply_event(const Digraph& g, OpinionConfig& config, const MarkEvent& ev) {
  config.set(ev.vertex, updated_color(g, config, ev));
}

OpinionConfig run_forward(const Digraph& g, const MarkStream& stream, OpinionConfig initial) {
  if (initial.n() != g.n()) throw std::invalid_argument("run_forward: configuration size mismatch");
  for (std::size_t i = 0; i < stream.size(); ++i) {
    apply_event(g, initial, stream[i]);
#ifndef NDEBUG
    if (g.n() <= 256) assert(initial.red_count() == initial.recount_red());
#endif
  }
  return initial;
}

DensitySeries simulate_density(const Digraph& g, const DensityOptions& options,
                               OpinionConfig initial, Rng& rng, OpinionConfig* final_state) {
  if (!(options.sample_dt > 0.0))
    throw std::invalid_argument("simulate_density: sample_dt must be positive");
  if (!(options.horizon >= 0.0))
    throw std::invalid_argument("simulate_density: horizon must be >= 0");
  if (!(options.p >= 0.0 && options.p <= 1.0))
    throw std::invalid_argument("simulate_density: p must lie in [0, 1]");
  if (initial.n() != g.n())
    throw std::invalid_argument("simulate_density: configuration size mismatch");
  for (Vertex x = 0; x < g.n(); ++x)
    if (g.out_degree(x) == 0)
      throw std::invalid_argument("simulate_density: vertex without out-edges");

  DensitySeries series;
  const auto samples = static_cast<std::size_t>(std::floor(options.horizon / options.sample_dt)) + 1;
  series.sample_times.reserve(samples);
  series.red_density.reserve(samples);

  OpinionConfig& state = initial;
  if (g.n() > 0 && options.horizon > 0.0) {
    MarkSource source(g, options.stubbornness, options.p, rng);
    for (std::size_t k = 0; k < samples; ++k) {
      const double t = static_cast<double>(k) * options.sample_dt;
      while (source.next_time() <= t) apply_event(g, state, source.pop());
      series.sample_times.push_back(t);
      series.red_density.push_back(state.red_density());
    }
    while (source.next_time() <= options.horizon) apply_event(g, state, source.pop());
  } else {
    for (std::size_t k = 0; k < samples; ++k) {
      series.sample_times.push_back(static_cast<double>(k) * options.sample_dt);
      series.red_density.push_back(state.red_density());
    }
  }

  if (final_state) *final_state = std::move(state);
  return series;
}

}  // namespace cobranet
