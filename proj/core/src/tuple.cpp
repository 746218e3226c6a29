#include "osr/tuple.hpp"

namespace osr {

std::vector<double> cumulative_selectivities(const std::vector<double>& selectivities) {
  std::vector<double> cs;
  cs.reserve(selectivities.size());
  double product = 1.0;
  for (double s : selectivities) {
    product *= s;
    cs.push_back(product);
  }
  return cs;
}

}  // namespace osr
