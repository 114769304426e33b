#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "elicit/dataset.hpp"

namespace elicit::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Best instruction set available on this CPU. ELICIT_SIMD=scalar in the
// environment forces the scalar path.
Isa detect_isa();

// Squared Euclidean distance from `query` to each of the `out.size()` rows
// stored row-major in `rows` (row length = query.size()). Codes are small
// integers, so every variant produces bit-identical results.
void squared_distances(std::span<const Code> query, std::span<const Code> rows,
                       std::span<double> out);

// Variants, exposed for equivalence testing.
void squared_distances_scalar(std::span<const Code> query, std::span<const Code> rows,
                              std::span<double> out);
#if defined(__x86_64__) || defined(_M_X64)
void squared_distances_avx2(std::span<const Code> query, std::span<const Code> rows,
                            std::span<double> out);
#endif

}  // namespace elicit::kernels
