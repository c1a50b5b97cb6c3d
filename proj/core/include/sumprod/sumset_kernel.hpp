#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sumprod {

enum class SumsetKernel { automatic, direct, bitset, fft };

// {x + y : x in a, y in b} for strictly increasing inputs; result sorted.
// `automatic` picks the cheapest of pair marking, shift-or over a bitset, and
// FFT convolution from the input sizes and the span of the result.
std::vector<std::int64_t> integer_sumset(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                         SumsetKernel kernel = SumsetKernel::automatic);

std::size_t integer_sumset_size(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                SumsetKernel kernel = SumsetKernel::automatic);

SumsetKernel choose_kernel(std::size_t na, std::size_t nb, std::int64_t span);

}  // namespace sumprod
