#include "agof/quadrature.hpp"

namespace agof::quad {
const GaussLegendre<5>& gl5() {
  static const GaussLegendre<5> rule;
  return rule;
}
const GaussLegendre<10>& gl10() {
  static const GaussLegendre<10> rule;
  return rule;
}
}  // namespace agof::quad
