#include "flops.hpp"

#include <cmath>

namespace bkz {

std::uint64_t flop_model(StepKind kind, std::size_t d) {
  const double dd = static_cast<double>(d);
  switch (kind) {
    case StepKind::Simple:
      return static_cast<std::uint64_t>(4 * d);
    case StepKind::CirculantBlock:
      return static_cast<std::uint64_t>(std::llround(4.0 * dd * std::log2(dd) + 4.0 * dd));
  }
  return 0;
}

}  // namespace bkz
