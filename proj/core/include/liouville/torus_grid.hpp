#pragma once

#include "liouville/torus.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>

namespace liouville {

using Field = Eigen::VectorXd;

/// Uniform M x M grid on the unit torus with FFT-based spectral operators.
/// Node (a, b) sits at (a/M, b/M) and has flat index a*M + b. Each instance
/// owns its FFTW plans and scratch buffers, so one instance must not be used
/// from several threads at once; separate instances are independent.
class TorusGrid {
 public:
  explicit TorusGrid(int M);
  ~TorusGrid();
  TorusGrid(TorusGrid&&) noexcept;
  TorusGrid& operator=(TorusGrid&&) noexcept;
  TorusGrid(const TorusGrid&) = delete;
  TorusGrid& operator=(const TorusGrid&) = delete;

  int M() const { return M_; }
  int size() const { return M_ * M_; }
  double spacing() const { return 1.0 / M_; }
  TorusPoint point(int index) const { return {double(index / M_) / M_, double(index % M_) / M_}; }

  Field sample(const std::function<double(const TorusPoint&)>& f) const;
  double mean(const Field& u) const { return u.mean(); }

  Field laplacian(const Field& u) const;
  /// Zero-mean solution of Delta v = f - mean(f).
  Field inverse_laplacian(const Field& f) const;
  /// Drops every mode with |k_1| or |k_2| above M/3.
  Field dealias(const Field& u) const;
  /// Band-limited interpolation onto an M_new grid (zero padding or truncation;
  /// Nyquist modes dropped).
  Field resample(const Field& u, int M_new) const;

  /// Normalized Fourier coefficients u_hat(k1, k2) for 0 <= k2 <= M/2.
  std::complex<double> coefficient(const Field& u, int k1, int k2) const;

 private:
  struct Impl;
  int M_ = 0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace liouville
