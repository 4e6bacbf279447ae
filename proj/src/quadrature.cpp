#include "tauforge/quadrature.hpp"

namespace tauforge::quad {

double integrate(const std::function<double(double)>& f, double lo, double hi, double split) {
  return integrate_line(f, lo, hi, split);
}

}  // namespace tauforge::quad
