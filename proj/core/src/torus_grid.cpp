#include "liouville/torus_grid.hpp"

#include "liouville/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace liouville {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct TorusGrid::Impl {
  int M;
  int Mc;  // M/2 + 1
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(int m) : M(m), Mc(m / 2 + 1) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    real = fftw_alloc_real(static_cast<std::size_t>(M) * M);
    spec = fftw_alloc_complex(static_cast<std::size_t>(M) * Mc);
    fwd = fftw_plan_dft_r2c_2d(M, M, real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(M, M, spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }

  int wave(int a) const { return a <= M / 2 ? a : a - M; }

  void forward(const Field& u) {
    std::copy(u.data(), u.data() + u.size(), real);
    fftw_execute(fwd);
    const double s = 1.0 / (double(M) * M);
    for (long k = 0; k < static_cast<long>(M) * Mc; ++k) {
      spec[k][0] *= s;
      spec[k][1] *= s;
    }
  }
  Field backward() {
    fftw_execute(bwd);
    return Eigen::Map<Field>(real, static_cast<long>(M) * M);
  }
};

TorusGrid::TorusGrid(int M) : M_(M) {
  if (M < 8 || (M & (M - 1)) != 0) throw InputError("grid resolution must be a power of two >= 8");
  impl_ = std::make_unique<Impl>(M);
}

TorusGrid::~TorusGrid() = default;
TorusGrid::TorusGrid(TorusGrid&&) noexcept = default;
TorusGrid& TorusGrid::operator=(TorusGrid&&) noexcept = default;

Field TorusGrid::sample(const std::function<double(const TorusPoint&)>& f) const {
  Field u(size());
  for (int k = 0; k < size(); ++k) u[k] = f(point(k));
  return u;
}

Field TorusGrid::laplacian(const Field& u) const {
  Impl& I = *impl_;
  I.forward(u);
  const double c = -4.0 * std::numbers::pi * std::numbers::pi;
  for (int a = 0; a < M_; ++a) {
    const int k1 = I.wave(a);
    for (int b = 0; b < I.Mc; ++b) {
      const double m = c * (k1 * k1 + b * b);
      I.spec[a * I.Mc + b][0] *= m;
      I.spec[a * I.Mc + b][1] *= m;
    }
  }
  return I.backward();
}

Field TorusGrid::inverse_laplacian(const Field& f) const {
  Impl& I = *impl_;
  I.forward(f);
  const double c = -4.0 * std::numbers::pi * std::numbers::pi;
  for (int a = 0; a < M_; ++a) {
    const int k1 = I.wave(a);
    for (int b = 0; b < I.Mc; ++b) {
      const int kk = k1 * k1 + b * b;
      const double m = kk == 0 ? 0.0 : 1.0 / (c * kk);
      I.spec[a * I.Mc + b][0] *= m;
      I.spec[a * I.Mc + b][1] *= m;
    }
  }
  return I.backward();
}

Field TorusGrid::dealias(const Field& u) const {
  Impl& I = *impl_;
  I.forward(u);
  const int cut = M_ / 3;
  for (int a = 0; a < M_; ++a) {
    const int k1 = std::abs(I.wave(a));
    for (int b = 0; b < I.Mc; ++b) {
      if (k1 > cut || b > cut) {
        I.spec[a * I.Mc + b][0] = 0.0;
        I.spec[a * I.Mc + b][1] = 0.0;
      }
    }
  }
  return I.backward();
}

Field TorusGrid::resample(const Field& u, int M_new) const {
  if (M_new == M_) return u;
  TorusGrid target(M_new);
  Impl& S = *impl_;
  Impl& T = *target.impl_;
  S.forward(u);
  const int half = std::min(M_, M_new) / 2;  // keep |k| < half
  for (long k = 0; k < static_cast<long>(M_new) * T.Mc; ++k) T.spec[k][0] = T.spec[k][1] = 0.0;
  for (int a = 0; a < M_; ++a) {
    const int k1 = S.wave(a);
    if (std::abs(k1) >= half) continue;
    const int ta = k1 >= 0 ? k1 : k1 + M_new;
    for (int b = 0; b < half; ++b) {
      T.spec[ta * T.Mc + b][0] = S.spec[a * S.Mc + b][0];
      T.spec[ta * T.Mc + b][1] = S.spec[a * S.Mc + b][1];
    }
  }
  return T.backward();
}

std::complex<double> TorusGrid::coefficient(const Field& u, int k1, int k2) const {
  if (k2 < 0 || k2 > M_ / 2 || std::abs(k1) > M_ / 2) throw InputError("wave number out of range");
  Impl& I = *impl_;
  I.forward(u);
  const int a = k1 >= 0 ? k1 : k1 + M_;
  return {I.spec[a * I.Mc + k2][0], I.spec[a * I.Mc + k2][1]};
}

}  // namespace liouville
