#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/rng.hpp"

namespace cobranet {

/// One ring of a vertex clock. `slots[i]` indexes the vertex's out-slots and
/// `bias[i]` is 1 when the i-th observation is forced blue. Spans point into
/// the owning stream or source.
struct MarkEvent {
  double time = 0.0;
  Vertex vertex = 0;
  std::span<const std::uint32_t> slots;
  std::span<const std::uint8_t> bias;
};

/// Time-ordered marked event stream on [0, horizon].
///
/// Storage is always kept in generation order; reverse() flips an
/// orientation flag, so reversing twice returns the identical stream.
class MarkStream {
 public:
  MarkStream() = default;
  MarkStream(double horizon, std::uint32_t stubbornness);

  double horizon() const { return horizon_; }
  std::uint32_t stubbornness() const { return s_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  bool is_reversed() const { return reversed_; }

  MarkEvent operator[](std::size_t i) const;

  /// Event at time t becomes an event at time horizon - t, order reversed.
  MarkStream reverse() const;

  /// Appends an event after the current last one. Only valid on a stream
  /// that has not been reversed. Throws std::invalid_argument on a time
  /// outside [last time, horizon] or a span size other than s.
  void append(double time, Vertex vertex, std::span<const std::uint32_t> slots,
              std::span<const std::uint8_t> bias);

  friend bool operator==(const MarkStream& a, const MarkStream& b);

 private:
  double horizon_ = 0.0;
  std::uint32_t s_ = 2;
  bool reversed_ = false;
  std::vector<double> times_;
  std::vector<Vertex> vertices_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint8_t> bias_;
};

/// How the vertex clocks are realized.
enum class MarkDiscipline {
  /// Poisson(T) arrivals per vertex at uniform times, then merged by time.
  PerVertex,
  /// One clock of rate n; each ring picks a uniform vertex. Identical draw
  /// order to MarkSource.
  Superposition,
};

/// Sequential generator of the superposed clock. Draws the first waiting
/// time on construction, and each pop() draws vertex, s slots, s bias bits
/// and then the next waiting time, in that order.
class MarkSource {
 public:
  MarkSource(const Digraph& g, std::uint32_t stubbornness, double p, Rng& rng);

  double next_time() const { return next_time_; }

  /// Draws the marks of the pending event. The returned spans stay valid
  /// until the next call.
  MarkEvent pop();

 private:
  const Digraph* g_;
  std::uint32_t s_;
  double p_;
  Rng* rng_;
  double next_time_ = 0.0;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint8_t> bias_;
};

/// Throws std::invalid_argument for s == 0, p outside [0, 1], negative
/// horizon, or a vertex without out-edges.
MarkStream generate_marks(const Digraph& g, double horizon, std::uint32_t stubbornness, double p,
                          Rng& rng, MarkDiscipline discipline = MarkDiscipline::PerVertex);

/// Metadata stored in the binary event log header.
struct MarkLogHeader {
  std::uint64_t n = 0;
  double horizon = 0.0;
  std::uint32_t stubbornness = 2;
  double p = 0.0;
  std::uint64_t seed = 0;
  bool reversed = false;
  std::uint64_t count = 0;
};

/// Binary little-endian log: magic "CBRDMRK1", u32 version, u32 s, u64 n,
/// f64 horizon, f64 p, u64 seed, u8 reversed, u64 count, then per event
/// f64 time, u32 vertex, s x u32 slots, s x u8 bias bits.
void write_mark_log(const MarkStream& stream, std::uint64_t n, double p, std::uint64_t seed,
                    std::ostream& out);

struct MarkLog {
  MarkLogHeader header;
  MarkStream stream;
};

/// Throws std::runtime_error on a malformed or truncated log.
MarkLog read_mark_log(std::istream& in);

}  // namespace cobranet
