#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cobranet {

using Vertex = std::uint32_t;

/// A run of `count` vertices sharing the same (in, out) degree pair.
struct DegreeBlock {
  std::uint64_t count = 0;
  std::uint32_t d_in = 0;
  std::uint32_t d_out = 0;

  friend bool operator==(const DegreeBlock&, const DegreeBlock&) = default;
};

/// Compact encoding of a degree sequence as consecutive blocks.
///
/// JSON form: {"blocks": [{"count": c, "d_in": i, "d_out": o}, ...]}.
struct DegreeProfile {
  std::vector<DegreeBlock> blocks;

  std::uint64_t total_vertices() const;

  /// Throws std::invalid_argument on an empty profile, a zero count or a
  /// zero out-degree.
  void check() const;

  std::string to_json() const;
  static DegreeProfile from_json(std::string_view text);
  static DegreeProfile load(const std::filesystem::path& path);

  friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

/// Per-vertex in/out degrees. Out-degrees are always positive.
class DegreeSequence {
 public:
  DegreeSequence() = default;
  DegreeSequence(std::vector<std::uint32_t> d_minus, std::vector<std::uint32_t> d_plus);

  std::size_t n() const { return d_plus_.size(); }
  const std::vector<std::uint32_t>& d_minus() const { return d_minus_; }
  const std::vector<std::uint32_t>& d_plus() const { return d_plus_; }
  std::uint64_t in_degree_sum() const { return sum_minus_; }
  std::uint64_t out_degree_sum() const { return sum_plus_; }
  /// Edge count. Equals both degree sums for a generable sequence.
  std::uint64_t m() const { return sum_plus_; }

  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;

 private:
  std::vector<std::uint32_t> d_minus_;
  std::vector<std::uint32_t> d_plus_;
  std::uint64_t sum_minus_ = 0;
  std::uint64_t sum_plus_ = 0;
};

DegreeSequence build_sequence(const DegreeProfile& profile);

enum class ValidationMode { Generable, TheoryValid };

/// Values above which the bounded-degree and bounded-moment hypotheses are
/// flagged. They are asymptotic statements, so crossing a limit is a warning.
struct WarningLimits {
  std::uint32_t max_out_degree = 64;
  double max_moment = 1.0e4;
  double delta = 1.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

ValidationReport validate(const DegreeSequence& seq, ValidationMode mode,
                          const WarningLimits& limits = {});

struct SequenceStats {
  double rho = 0.0;
  double lambda = 0.0;
  std::uint32_t delta_max = 0;
  double moment_2_plus_delta = 0.0;
};

/// rho = sum_x (d_x^- / m)(1 / d_x^+), lambda = (1/n) sum_x 1 / d_x^+.
/// Sums are accumulated exactly per out-degree class before the final
/// divisions. Throws std::invalid_argument if the sequence is not generable
/// or has no edges.
SequenceStats compute_stats(const DegreeSequence& seq, double delta = 1.0);

}  // namespace cobranet
