#include "cobranet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cobranet {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COBRANET_THREADS")) {
    try {
      const auto value = std::stoul(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
      // Malformed value: fall through to the default.
    }
  }
  return 1;
}

}  // namespace cobranet
