#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cobranet/dcm_graph.hpp"
#include "cobranet/marks.hpp"
#include "support.hpp"

using namespace cobranet;

namespace {

Digraph small_graph(std::uint64_t seed, std::size_t n = 30, std::uint32_t d = 3) {
  Rng rng(seed);
  return sample_dcm(testing::regular_sequence(n, d), rng);
}

bool same_event(const MarkEvent& a, const MarkEvent& b) {
  return a.time == b.time && a.vertex == b.vertex &&
         std::equal(a.slots.begin(), a.slots.end(), b.slots.begin(), b.slots.end()) &&
         std::equal(a.bias.begin(), a.bias.end(), b.bias.begin(), b.bias.end());
}

}  // namespace

TEST_SUITE("marks") {
  TEST_CASE("generated stream is ordered and well formed") {
    const auto g = small_graph(1);
    Rng rng(2);
    for (auto discipline : {MarkDiscipline::PerVertex, MarkDiscipline::Superposition}) {
      const auto s = generate_marks(g, 5.0, 3, 0.4, rng, discipline);
      CHECK(s.stubbornness() == 3);
      double last = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto ev = s[i];
        CHECK(ev.time >= last);
        CHECK(ev.time <= 5.0);
        CHECK(ev.vertex < g.n());
        REQUIRE(ev.slots.size() == 3);
        REQUIRE(ev.bias.size() == 3);
        for (auto slot : ev.slots) CHECK(slot < g.out_degree(ev.vertex));
        for (auto b : ev.bias) CHECK(b <= 1);
        last = ev.time;
      }
    }
  }

  TEST_CASE("event count and bias rate follow the clock") {
    const auto g = small_graph(3, 100);
    Rng rng(4);
    const auto s = generate_marks(g, 200.0, 2, 0.3, rng);
    // Poisson(nT) with nT = 20000: sd about 141.
    CHECK(std::abs(static_cast<double>(s.size()) - 20000.0) < 6 * 141.5);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < s.size(); ++i) ones += s[i].bias[0] + s[i].bias[1];
    const double rate = static_cast<double>(ones) / (2.0 * s.size());
    CHECK(std::abs(rate - 0.3) < 6 * std::sqrt(0.21 / (2.0 * s.size())));
  }

  TEST_CASE("reversal maps t to T - t and is an involution") {
    const auto g = small_graph(5);
    Rng rng(6);
    const auto s = generate_marks(g, 7.5, 2, 0.5, rng);
    const auto r = s.reverse();
    REQUIRE(r.size() == s.size());
    CHECK(r.is_reversed());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto a = s[i];
      const auto b = r[s.size() - 1 - i];
      CHECK(b.time == 7.5 - a.time);
      CHECK(b.vertex == a.vertex);
      if (i > 0) CHECK(r[i].time >= r[i - 1].time);
    }
    const auto rr = r.reverse();
    CHECK(rr == s);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(same_event(rr[i], s[i]));
  }

  TEST_CASE("append validates its input") {
    MarkStream s(1.0, 2);
    const std::uint32_t slots[2] = {0, 1};
    const std::uint8_t bits[2] = {0, 1};
    s.append(0.5, 0, slots, bits);
    CHECK_THROWS_AS(s.append(0.4, 0, slots, bits), std::invalid_argument);
    CHECK_THROWS_AS(s.append(1.5, 0, slots, bits), std::invalid_argument);
    CHECK_THROWS_AS(s.append(0.6, 0, std::span(slots, 1), bits), std::invalid_argument);
    CHECK_THROWS_AS(s.reverse().append(0.9, 0, slots, bits), std::logic_error);
  }

  TEST_CASE("superposition stream replays the streaming source") {
    const auto g = small_graph(7);
    Rng a(8), b(8);
    const auto stream = generate_marks(g, 4.0, 2, 0.35, a, MarkDiscipline::Superposition);
    MarkSource source(g, 2, 0.35, b);
    std::size_t i = 0;
    while (source.next_time() <= 4.0) {
      REQUIRE(i < stream.size());
      CHECK(same_event(source.pop(), stream[i]));
      ++i;
    }
    CHECK(i == stream.size());
  }

  TEST_CASE("binary log round trip") {
    const auto g = small_graph(9);
    Rng rng(10);
    for (std::uint32_t s : {1u, 2u, 3u}) {
      for (bool reversed : {false, true}) {
        auto stream = generate_marks(g, 3.0, s, 0.6, rng);
        if (reversed) stream = stream.reverse();
        std::stringstream buf;
        write_mark_log(stream, g.n(), 0.6, 1234, buf);
        const auto log = read_mark_log(buf);
        CHECK(log.stream == stream);
        CHECK(log.header.n == g.n());
        CHECK(log.header.p == 0.6);
        CHECK(log.header.seed == 1234);
        CHECK(log.header.stubbornness == s);
        CHECK(log.header.reversed == reversed);
        CHECK(log.header.count == stream.size());
      }
    }
  }

  TEST_CASE("malformed logs are rejected") {
    const auto g = small_graph(11);
    Rng rng(12);
    const auto stream = generate_marks(g, 2.0, 2, 0.5, rng);
    std::stringstream buf;
    write_mark_log(stream, g.n(), 0.5, 1, buf);
    const auto bytes = buf.str();

    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_mark_log(truncated), std::runtime_error);

    auto bad = bytes;
    bad[0] = 'X';
    std::stringstream bad_magic(bad);
    CHECK_THROWS_AS(read_mark_log(bad_magic), std::runtime_error);
  }

  TEST_CASE("argument checks") {
    const auto g = small_graph(13);
    Rng rng(14);
    CHECK_THROWS_AS(generate_marks(g, 1.0, 2, 1.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_marks(g, 1.0, 0, 0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_marks(g, -1.0, 2, 0.5, rng), std::invalid_argument);
    const Digraph sink({{1}, {}});
    CHECK_THROWS_AS(generate_marks(sink, 1.0, 2, 0.5, rng), std::invalid_argument);
  }
}
