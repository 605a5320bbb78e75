#pragma once

#include <functional>
#include <vector>

namespace liouville {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Supported orders: 10, 15, 20, 30.
const QuadratureRule& gauss_legendre(int order);

/// int_a^b f with the given rule mapped onto [a, b].
double integrate_panel(const QuadratureRule& rule, double a, double b,
                       const std::function<double(double)>& f);

}  // namespace liouville
