#pragma once

#include <cstddef>
#include <cstdint>

namespace bkz {

enum class StepKind { Simple, CirculantBlock };

/// Analytic per-step cost in complex flops: 4d for a simple Kaczmarz update
/// with a stored row, 4d log2(d) + 4d for a circulant block update that uses
/// two FFT pairs. log2(d) is not rounded; the total is rounded to the nearest
/// integer.
std::uint64_t flop_model(StepKind kind, std::size_t d);

}  // namespace bkz
