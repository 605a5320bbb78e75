#include "liouville/torus.hpp"

#include <cmath>

namespace liouville {

TorusPoint wrap(const TorusPoint& x) {
  TorusPoint w(x[0] - std::floor(x[0]), x[1] - std::floor(x[1]));
  for (int i = 0; i < 2; ++i)
    if (w[i] >= 1.0) w[i] = 0.0;
  return w;
}

Eigen::Vector2d displacement(const TorusPoint& x, const TorusPoint& y) {
  Eigen::Vector2d d = x - y;
  d[0] -= std::round(d[0]);
  d[1] -= std::round(d[1]);
  return d;
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) { return displacement(x, y).norm(); }

}  // namespace liouville
