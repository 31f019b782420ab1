#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cobranet/degree_model.hpp"
#include "cobranet/rng.hpp"

namespace cobranet::testing {

/// Out-degrees uniform in [lo, hi]; each of the m in-slots lands on a
/// uniform vertex, so in-degrees may be zero. Always generable.
inline DegreeSequence random_sequence(Rng& rng, std::size_t n, std::uint32_t lo,
                                      std::uint32_t hi) {
  std::vector<std::uint32_t> d_plus(n), d_minus(n, 0);
  std::uint64_t m = 0;
  for (auto& d : d_plus) {
    d = lo + static_cast<std::uint32_t>(rng.below(hi - lo + 1));
    m += d;
  }
  for (std::uint64_t e = 0; e < m; ++e) ++d_minus[rng.below(n)];
  return DegreeSequence(std::move(d_minus), std::move(d_plus));
}

/// Every vertex has in- and out-degree d.
inline DegreeSequence regular_sequence(std::size_t n, std::uint32_t d) {
  return DegreeSequence(std::vector<std::uint32_t>(n, d), std::vector<std::uint32_t>(n, d));
}

}  // namespace cobranet::testing
