#include "cobranet/cobrad.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cobranet/parallel.hpp"

namespace cobranet {

ParticleConfig ParticleConfig::init_particles(std::span<const Vertex> initial) {
  ParticleConfig config;
  for (auto x : initial) {
    if (config.sites_.contains(x)) continue;
    const Label label = x;
    config.merge_into(x, std::span<const Label>(&label, 1));
  }
  return config;
}

std::span<const Label> ParticleConfig::labels_at(Vertex x) const {
  const auto it = sites_.find(x);
  if (it == sites_.end()) return {};
  return it->second.labels;
}

std::vector<Label> ParticleConfig::alive_labels() const {
  std::vector<Label> out;
  out.reserve(multiplicity_.size());
  for (const auto& [label, count] : multiplicity_) out.push_back(label);
  std::sort(out.begin(), out.end());
  return out;
}

bool ParticleConfig::consistent() const {
  std::map<Label, std::uint32_t> recount;
  std::size_t particles = 0;
  if (occupied_.size() != sites_.size()) return false;
  for (std::size_t i = 0; i < occupied_.size(); ++i) {
    const auto it = sites_.find(occupied_[i]);
    if (it == sites_.end() || it->second.index != i || it->second.labels.empty()) return false;
    const auto& labels = it->second.labels;
    if (!std::is_sorted(labels.begin(), labels.end()) ||
        std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      return false;
    for (auto l : labels) ++recount[l];
    particles += labels.size();
  }
  if (particles != particles_ || recount.size() != multiplicity_.size()) return false;
  for (const auto& [label, count] : recount) {
    const auto it = multiplicity_.find(label);
    if (it == multiplicity_.end() || it->second != count) return false;
  }
  return true;
}

void ParticleConfig::merge_into(Vertex y, std::span<const Label> labels) {
  auto [it, inserted] = sites_.try_emplace(y);
  auto& site = it->second;
  if (inserted) {
    site.index = occupied_.size();
    occupied_.push_back(y);
  }
  std::vector<Label> merged;
  merged.reserve(site.labels.size() + labels.size());
  auto a = site.labels.begin();
  auto b = labels.begin();
  while (a != site.labels.end() || b != labels.end()) {
    if (b == labels.end() || (a != site.labels.end() && *a < *b)) {
      merged.push_back(*a++);
    } else if (a == site.labels.end() || *b < *a) {
      ++multiplicity_[*b];
      ++particles_;
      merged.push_back(*b++);
    } else {
      merged.push_back(*a++);
      ++b;
    }
  }
  site.labels = std::move(merged);
}

void ParticleConfig::clear(Vertex x) {
  const auto it = sites_.find(x);
  if (it == sites_.end()) return;
  for (auto l : it->second.labels) {
    auto m = multiplicity_.find(l);
    if (--m->second == 0) multiplicity_.erase(m);
  }
  particles_ -= it->second.labels.size();

  const auto index = it->second.index;
  const Vertex last = occupied_.back();
  occupied_[index] = last;
  sites_[last].index = index;
  occupied_.pop_back();
  sites_.erase(x);
}

StepOutcome step(const Digraph& g, ParticleConfig& config, const MarkEvent& ev) {
  const auto it = config.sites_.find(ev.vertex);
  if (it == config.sites_.end()) return StepOutcome::Idle;

  // Distinct targets of unbiased observations; s is small, so linear dedup.
  std::vector<Vertex> targets;
  targets.reserve(ev.slots.size());
  for (std::size_t i = 0; i < ev.slots.size(); ++i) {
    if (ev.bias[i]) continue;
    const Vertex y = g.head(ev.vertex, ev.slots[i]);
    if (std::find(targets.begin(), targets.end(), y) == targets.end()) targets.push_back(y);
  }

  if (targets.empty()) {
    config.clear(ev.vertex);
    return StepOutcome::Die;
  }

  // Insert before removing so a label never drops to zero copies in
  // between; a self-loop target keeps the labels where they are.
  const std::vector<Label> labels = it->second.labels;
  bool stays = false;
  for (auto y : targets) {
    if (y == ev.vertex)
      stays = true;
    else
      config.merge_into(y, labels);
  }
  if (!stays) config.clear(ev.vertex);
  return targets.size() == 1 ? StepOutcome::Move : StepOutcome::Branch;
}

std::vector<bool> run_backward(const Digraph& g, const MarkStream& stream,
                               std::span<const Vertex> initial) {
  for (auto x : initial)
    if (x >= g.n()) throw std::out_of_range("run_backward: initial vertex out of range");
  auto config = ParticleConfig::init_particles(initial);
  for (std::size_t i = 0; i < stream.size() && config.alive_label_count() > 0; ++i)
    step(g, config, stream[i]);

  std::vector<bool> survived;
  survived.reserve(initial.size());
  for (auto x : initial) survived.push_back(config.alive(x));
  return survived;
}

Estimate estimate_survival(const Digraph& g, const SurvivalOptions& options,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw std::invalid_argument("estimate_survival: trials must be >= 1");
  if (g.n() == 0) throw std::invalid_argument("estimate_survival: empty graph");
  if (options.start && *options.start >= g.n())
    throw std::out_of_range("estimate_survival: start vertex out of range");
  if (!(options.p >= 0.0 && options.p <= 1.0))
    throw std::invalid_argument("estimate_survival: p must lie in [0, 1]");
  if (options.stubbornness == 0)
    throw std::invalid_argument("estimate_survival: stubbornness must be >= 1");

  std::vector<std::uint8_t> survived(trials, 0);
  parallel_for(trials, threads, [&](std::uint64_t trial) {
    Rng rng(derive_seed(seed, trial));
    const Vertex start =
        options.start ? *options.start : static_cast<Vertex>(rng.below(g.n()));
    const Vertex initial[] = {start};
    auto config = ParticleConfig::init_particles(initial);

    std::vector<std::uint32_t> slots(options.stubbornness);
    std::vector<std::uint8_t> bias(options.stubbornness);
    double t = 0.0;
    for (;;) {
      const auto occupied = config.occupied_vertices();
      if (occupied.empty()) break;
      t += rng.exponential(static_cast<double>(occupied.size()));
      if (t > options.horizon) break;
      const Vertex x = occupied[rng.below(occupied.size())];
      const auto d = g.out_degree(x);
      for (auto& slot : slots) slot = static_cast<std::uint32_t>(rng.below(d));
      for (auto& b : bias) b = rng.bernoulli(options.p) ? 1 : 0;
      step(g, config, MarkEvent{t, x, slots, bias});
    }
    survived[trial] = config.alive(start) ? 1 : 0;
  });
  const auto hits = std::accumulate(survived.begin(), survived.end(), std::uint64_t{0});
  return bernoulli_estimate(hits, trials);
}

}  // namespace cobranet
