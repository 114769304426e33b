#include <cstdlib>
#include <string>

#include "elicit/error.hpp"
#include "elicit/kernels.hpp"

namespace elicit::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detect_isa() {
  if (const char* forced = std::getenv("ELICIT_SIMD"); forced && std::string(forced) == "scalar")
    return Isa::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

void squared_distances(std::span<const Code> query, std::span<const Code> rows,
                       std::span<double> out) {
  if (rows.size() != query.size() * out.size())
    throw Error("squared_distances: row buffer does not match query length x output size");
  static const Isa isa = detect_isa();
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2) return squared_distances_avx2(query, rows, out);
#endif
  squared_distances_scalar(query, rows, out);
}

}  // namespace elicit::kernels
