#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liouville {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Coupling matrix A = (a_ij) of the Liouville system together with its
/// inverse (a^ij). Construction validates shape and finiteness only; the
/// structural hypotheses are reported by check_hypotheses().
class InteractionMatrix {
 public:
  explicit InteractionMatrix(Matrix a);

  int size() const { return static_cast<int>(a_.rows()); }
  const Matrix& a() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }

  bool invertible() const { return inverse_.has_value(); }
  /// Throws SingularMatrixError when A is not invertible.
  const Matrix& inverse() const;

 private:
  Matrix a_;
  std::optional<Matrix> inverse_;
};

struct HypothesisReport {
  bool h1 = false;
  bool h2 = false;
  std::vector<std::string> reasons;  // one entry per violated clause
};

HypothesisReport check_hypotheses(const Matrix& a);
HypothesisReport check_hypotheses(const InteractionMatrix& a);

/// rho = (rho_1..rho_n) with a concentration level N used in the Lambda scaling.
struct ParameterPoint {
  Vector rho;
  int level = 1;

  /// Throws InputError unless every rho_i is finite and positive and level >= 1.
  void validate() const;
};

/// Index subset J of {0..n-1}; sorted, unique, nonempty.
using Subset = std::vector<int>;

constexpr int kMaxSubsetSize = 12;

/// Lambda_J(rho) = 4 sum_{i in J} x_i - sum_{i,j in J} a_ij x_i x_j with x = rho / (2 pi N).
double lambda_subset(const InteractionMatrix& a, const ParameterPoint& rho, const Subset& subset);
double lambda_full(const InteractionMatrix& a, const ParameterPoint& rho);

enum class Region { on_gamma, below_gamma, above_gamma, outside };
std::string to_string(Region r);

/// Exact rational value, reduced, positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Degree of the Leray-Schauder map in O_N: 1 for N = 0, else
/// (1/N!) prod_{k=1..N} (k - chi).
Rational degree(int level, int chi);

struct RegionReport {
  double lambda_I = 0.0;
  std::map<Subset, double> lambda_J;  // every nonempty proper subset
  Region classification = Region::outside;
  std::optional<Rational> degree;     // degree of the region on the reported side
  Vector normal;                      // (sum_j a_ij rho_j / (2 pi N) - 2)_i
  double tol = 0.0;
};

/// Default on-Gamma tolerance: 1e-9 scaled by sum_i rho_i / (2 pi N) (at least 1e-9).
double default_gamma_tol(const ParameterPoint& rho);

/// Classifies rho against Gamma_N. Requires H1 and H2; `chi` is the Euler
/// characteristic used for the degree field (0 for the torus).
RegionReport classify(const InteractionMatrix& a, const ParameterPoint& rho, double tol, int chi = 0);

/// Q_N: the solution of sum_j a_ij q_j = 8 pi N. Throws SingularMatrixError
/// for singular A and InputError if some q_i is not positive.
ParameterPoint q_point(const InteractionMatrix& a, int level);

/// All nonempty proper subsets of {0..n-1}, in lexicographic bitmask order.
std::vector<Subset> proper_subsets(int n);

}  // namespace liouville
