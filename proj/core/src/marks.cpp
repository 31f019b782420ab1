#include "cobranet/marks.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cobranet {

MarkStream::MarkStream(double horizon, std::uint32_t stubbornness)
    : horizon_(horizon), s_(stubbornness) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("MarkStream: horizon must be >= 0");
  if (stubbornness == 0) throw std::invalid_argument("MarkStream: stubbornness must be >= 1");
}

MarkEvent MarkStream::operator[](std::size_t i) const {
  const std::size_t k = reversed_ ? times_.size() - 1 - i : i;
  return {reversed_ ? horizon_ - times_[k] : times_[k], vertices_[k],
          std::span<const std::uint32_t>(slots_.data() + k * s_, s_),
          std::span<const std::uint8_t>(bias_.data() + k * s_, s_)};
}

MarkStream MarkStream::reverse() const {
  MarkStream out = *this;
  out.reversed_ = !reversed_;
  return out;
}

void MarkStream::append(double time, Vertex vertex, std::span<const std::uint32_t> slots,
                        std::span<const std::uint8_t> bias) {
  if (reversed_) throw std::logic_error("MarkStream::append on a reversed stream");
  if (slots.size() != s_ || bias.size() != s_)
    throw std::invalid_argument("MarkStream::append: expected " + std::to_string(s_) +
                                " slots and bias bits");
  if (!(time >= 0.0 && time <= horizon_) || (!times_.empty() && time < times_.back()))
    throw std::invalid_argument("MarkStream::append: event time out of order");
  times_.push_back(time);
  vertices_.push_back(vertex);
  slots_.insert(slots_.end(), slots.begin(), slots.end());
  for (auto b : bias) bias_.push_back(b ? 1 : 0);
}

bool operator==(const MarkStream& a, const MarkStream& b) {
  if (a.horizon_ != b.horizon_ || a.s_ != b.s_ || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = a[i];
    const auto y = b[i];
    if (x.time != y.time || x.vertex != y.vertex ||
        !std::equal(x.slots.begin(), x.slots.end(), y.slots.begin()) ||
        !std::equal(x.bias.begin(), x.bias.end(), y.bias.begin()))
      return false;
  }
  return true;
}

MarkSource::MarkSource(const Digraph& g, std::uint32_t stubbornness, double p, Rng& rng)
    : g_(&g), s_(stubbornness), p_(p), rng_(&rng), slots_(stubbornness), bias_(stubbornness) {
  if (stubbornness == 0) throw std::invalid_argument("MarkSource: stubbornness must be >= 1");
  next_time_ = g.n() == 0 ? INFINITY : rng.exponential(static_cast<double>(g.n()));
}

MarkEvent MarkSource::pop() {
  const double time = next_time_;
  const auto x = static_cast<Vertex>(rng_->below(g_->n()));
  const auto d = g_->out_degree(x);
  for (auto& slot : slots_) slot = static_cast<std::uint32_t>(rng_->below(d));
  for (auto& b : bias_) b = rng_->bernoulli(p_) ? 1 : 0;
  next_time_ += rng_->exponential(static_cast<double>(g_->n()));
  return {time, x, slots_, bias_};
}

MarkStream generate_marks(const Digraph& g, double horizon, std::uint32_t stubbornness, double p,
                          Rng& rng, MarkDiscipline discipline) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("generate_marks: p must lie in [0, 1]");
  MarkStream stream(horizon, stubbornness);
  for (Vertex x = 0; x < g.n(); ++x)
    if (g.out_degree(x) == 0)
      throw std::invalid_argument("generate_marks: vertex " + std::to_string(x) +
                                  " has no out-edges");
  if (horizon == 0.0) return stream;

  if (discipline == MarkDiscipline::Superposition) {
    MarkSource source(g, stubbornness, p, rng);
    while (source.next_time() <= horizon) {
      const auto ev = source.pop();
      stream.append(ev.time, ev.vertex, ev.slots, ev.bias);
    }
    return stream;
  }

  std::vector<double> times;
  std::vector<Vertex> vertices;
  std::vector<std::uint32_t> slots;
  std::vector<std::uint8_t> bias;
  for (Vertex x = 0; x < g.n(); ++x) {
    const auto count = rng.poisson(horizon);
    const auto d = g.out_degree(x);
    for (std::uint64_t k = 0; k < count; ++k) {
      times.push_back(horizon * rng.uniform01());
      vertices.push_back(x);
      for (std::uint32_t i = 0; i < stubbornness; ++i)
        slots.push_back(static_cast<std::uint32_t>(rng.below(d)));
      for (std::uint32_t i = 0; i < stubbornness; ++i) bias.push_back(rng.bernoulli(p) ? 1 : 0);
    }
  }

  // Ties in time keep generation order.
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  for (auto k : order)
    stream.append(times[k], vertices[k],
                  std::span<const std::uint32_t>(slots.data() + k * stubbornness, stubbornness),
                  std::span<const std::uint8_t>(bias.data() + k * stubbornness, stubbornness));
  return stream;
}

namespace {

constexpr std::array<char, 8> kMagic = {'C', 'B', 'R', 'D', 'M', 'R', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) throw std::runtime_error("mark log: truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_mark_log(const MarkStream& stream, std::uint64_t n, double p, std::uint64_t seed,
                    std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, stream.stubbornness());
  put<std::uint64_t>(out, n);
  put<double>(out, stream.horizon());
  put<double>(out, p);
  put<std::uint64_t>(out, seed);
  put<std::uint8_t>(out, stream.is_reversed() ? 1 : 0);
  put<std::uint64_t>(out, stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto ev = stream[i];
    put<double>(out, ev.time);
    put<std::uint32_t>(out, ev.vertex);
    for (auto slot : ev.slots) put<std::uint32_t>(out, slot);
    for (auto b : ev.bias) put<std::uint8_t>(out, b);
  }
}

MarkLog read_mark_log(std::istream& in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("mark log: bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("mark log: unknown version");

  MarkLog log;
  auto& h = log.header;
  h.stubbornness = get<std::uint32_t>(in);
  h.n = get<std::uint64_t>(in);
  h.horizon = get<double>(in);
  h.p = get<double>(in);
  h.seed = get<std::uint64_t>(in);
  h.reversed = get<std::uint8_t>(in) != 0;
  h.count = get<std::uint64_t>(in);
  if (h.stubbornness == 0) throw std::runtime_error("mark log: zero stubbornness");

  log.stream = MarkStream(h.horizon, h.stubbornness);
  std::vector<std::uint32_t> slots(h.stubbornness);
  std::vector<std::uint8_t> bias(h.stubbornness);
  for (std::uint64_t i = 0; i < h.count; ++i) {
    const auto time = get<double>(in);
    const auto vertex = get<std::uint32_t>(in);
    for (auto& slot : slots) slot = get<std::uint32_t>(in);
    for (auto& b : bias) b = get<std::uint8_t>(in);
    try {
      log.stream.append(time, vertex, slots, bias);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("mark log: ") + e.what());
    }
  }
  return log;
}

}  // namespace cobranet
