#pragma once

#include <Eigen/Dense>

namespace liouville {

/// Point of the flat unit torus R^2 / Z^2, stored by any representative.
using TorusPoint = Eigen::Vector2d;

/// Representative in [0,1)^2.
TorusPoint wrap(const TorusPoint& x);

/// Minimal-norm representative of x - y, each component in [-1/2, 1/2].
Eigen::Vector2d displacement(const TorusPoint& x, const TorusPoint& y);

double torus_distance(const TorusPoint& x, const TorusPoint& y);

}  // namespace liouville
