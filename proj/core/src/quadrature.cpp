#include "liouville/quadrature.hpp"

#include "liouville/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace liouville {

namespace {

template <unsigned N>
QuadratureRule expand() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ax = G::abscissa();
  const auto& wt = G::weights();
  QuadratureRule r;
  // Boost stores the nonnegative half; node 0 is the centre for odd N.
  for (std::size_t k = 0; k < ax.size(); ++k) {
    if (ax[k] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(wt[k]);
    } else {
      r.x.push_back(ax[k]);
      r.w.push_back(wt[k]);
      r.x.push_back(-ax[k]);
      r.w.push_back(wt[k]);
    }
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  static const QuadratureRule r10 = expand<10>(), r15 = expand<15>(), r20 = expand<20>(),
                              r30 = expand<30>();
  switch (order) {
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 30: return r30;
    default: throw InputError("unsupported Gauss-Legendre order");
  }
}

double integrate_panel(const QuadratureRule& rule, double a, double b,
                       const std::function<double(double)>& f) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.x.size(); ++k) s += rule.w[k] * f(c + h * rule.x[k]);
  return h * s;
}

}  // namespace liouville
