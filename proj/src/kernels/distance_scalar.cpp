#include "elicit/kernels.hpp"

namespace elicit::kernels {

void squared_distances_scalar(std::span<const Code> query, std::span<const Code> rows,
                              std::span<double> out) {
  const std::size_t p = query.size();
  for (std::size_t r = 0; r < out.size(); ++r) {
    const Code* row = rows.data() + r * p;
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double diff = static_cast<double>(row[j]) - static_cast<double>(query[j]);
      sum += diff * diff;
    }
    out[r] = sum;
  }
}

}  // namespace elicit::kernels
