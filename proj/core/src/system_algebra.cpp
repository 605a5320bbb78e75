#include "liouville/system_algebra.hpp"

#include "liouville/error.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>

namespace liouville {

namespace {

constexpr double kInverseCheck = 1e-12;

bool is_symmetric(const Matrix& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-14 * scale) return false;
  return true;
}

// Support graph connectivity by BFS from vertex 0.
bool is_irreducible(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int count = 1;
  while (!frontier.empty()) {
    int i = frontier.front();
    frontier.pop();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && (a(i, j) != 0.0 || a(j, i) != 0.0)) {
        seen[j] = true;
        ++count;
        frontier.push(j);
      }
    }
  }
  return count == n;
}

void require_square_finite(const Matrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw InputError("interaction matrix must be square and nonempty");
  if (!a.allFinite()) throw InputError("interaction matrix has non-finite entries");
}

}  // namespace

InteractionMatrix::InteractionMatrix(Matrix a) : a_(std::move(a)) {
  require_square_finite(a_);
  Eigen::FullPivLU<Matrix> lu(a_);
  if (lu.isInvertible()) {
    Matrix inv = lu.inverse();
    const Matrix id = Matrix::Identity(a_.rows(), a_.cols());
    if ((a_ * inv - id).cwiseAbs().maxCoeff() <= kInverseCheck * std::max(1.0, inv.cwiseAbs().maxCoeff()))
      inverse_ = std::move(inv);
  }
}

const Matrix& InteractionMatrix::inverse() const {
  if (!inverse_) throw SingularMatrixError("interaction matrix is singular");
  return *inverse_;
}

HypothesisReport check_hypotheses(const Matrix& a) { return check_hypotheses(InteractionMatrix(a)); }

HypothesisReport check_hypotheses(const InteractionMatrix& m) {
  const Matrix& a = m.a();
  const int n = m.size();
  HypothesisReport r;
  bool h1 = true;
  if (!is_symmetric(a)) {
    h1 = false;
    r.reasons.emplace_back("H1: A is not symmetric");
  }
  if ((a.array() < 0.0).any()) {
    h1 = false;
    r.reasons.emplace_back("H1: A has a negative entry");
  }
  if (!is_irreducible(a)) {
    h1 = false;
    r.reasons.emplace_back("H1: A is reducible (support graph disconnected)");
  }
  if (!m.invertible()) {
    h1 = false;
    r.reasons.emplace_back("H1: A is not invertible");
  }
  r.h1 = h1;

  bool h2 = m.invertible();
  if (!m.invertible()) {
    r.reasons.emplace_back("H2: inverse does not exist");
  } else {
    const Matrix& inv = m.inverse();
    const double eps = 1e-13 * std::max(1.0, inv.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
      if (inv(i, i) > eps) {
        h2 = false;
        r.reasons.push_back("H2: a^" + std::to_string(i + 1) + std::to_string(i + 1) + " > 0");
      }
      for (int j = 0; j < n; ++j) {
        if (i != j && inv(i, j) < -eps) {
          h2 = false;
          r.reasons.push_back("H2: a^" + std::to_string(i + 1) + std::to_string(j + 1) + " < 0");
        }
      }
      if (inv.row(i).sum() < -eps) {
        h2 = false;
        r.reasons.push_back("H2: row sum of inverse row " + std::to_string(i + 1) + " < 0");
      }
    }
  }
  r.h2 = h2;
  return r;
}

void ParameterPoint::validate() const {
  if (level < 1) throw InputError("concentration level N must be >= 1");
  if (rho.size() == 0) throw InputError("rho must be nonempty");
  for (int i = 0; i < rho.size(); ++i)
    if (!std::isfinite(rho[i]) || rho[i] <= 0.0)
      throw InputError("rho_" + std::to_string(i + 1) + " must be finite and positive");
}

double lambda_subset(const InteractionMatrix& a, const ParameterPoint& p, const Subset& subset) {
  if (subset.empty()) throw InputError("Lambda_J needs a nonempty subset J");
  if (p.rho.size() != a.size()) throw InputError("rho dimension does not match the matrix");
  const double scale = 2.0 * std::numbers::pi * p.level;
  double linear = 0.0;
  double quadratic = 0.0;
  for (int i : subset) {
    if (i < 0 || i >= a.size()) throw InputError("subset index out of range");
    const double xi = p.rho[i] / scale;
    linear += xi;
    for (int j : subset) quadratic += a(i, j) * xi * (p.rho[j] / scale);
  }
  return 4.0 * linear - quadratic;
}

double lambda_full(const InteractionMatrix& a, const ParameterPoint& p) {
  Subset all(a.size());
  std::iota(all.begin(), all.end(), 0);
  return lambda_subset(a, p, all);
}

std::string to_string(Region r) {
  switch (r) {
    case Region::on_gamma: return "on_Gamma_N";
    case Region::below_gamma: return "in_O_N_minus_1";
    case Region::above_gamma: return "in_O_N";
    case Region::outside: return "outside";
  }
  return "outside";
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational degree(int level, int chi) {
  if (level < 0) throw InputError("degree: N must be >= 0");
  Rational r{1, 1};
  for (int k = 1; k <= level; ++k) {
    // multiply by (k - chi) / k, reducing each time to keep the numbers small
    std::int64_t num = r.num * (k - chi);
    std::int64_t den = r.den * k;
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    r = {num / g, den / g};
  }
  if (r.num == 0) r.den = 1;
  return r;
}

std::vector<Subset> proper_subsets(int n) {
  if (n > kMaxSubsetSize) throw InputError("subset enumeration is capped at n <= 12");
  std::vector<Subset> out;
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    Subset s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

double default_gamma_tol(const ParameterPoint& p) {
  const double scale = p.rho.sum() / (2.0 * std::numbers::pi * p.level);
  return 1e-9 * std::max(1.0, scale);
}

RegionReport classify(const InteractionMatrix& a, const ParameterPoint& p, double tol, int chi) {
  if (!(tol > 0.0)) throw InputError("classification tolerance must be positive");
  p.validate();
  if (p.rho.size() != a.size()) throw InputError("rho dimension does not match the matrix");
  // The scalar equation (n = 1, a > 0) has no proper subsets and is classified directly;
  // H2 cannot hold for it since a^11 = 1/a > 0.
  const bool scalar = a.size() == 1 && a(0, 0) > 0.0;
  const HypothesisReport hyp = check_hypotheses(a);
  if (!scalar && (!hyp.h1 || !hyp.h2)) throw PreconditionError("classify requires H1 and H2");

  RegionReport r;
  r.tol = tol;
  r.lambda_I = lambda_full(a, p);
  bool all_positive = true;
  for (const Subset& s : proper_subsets(a.size())) {
    const double v = lambda_subset(a, p, s);
    r.lambda_J.emplace(s, v);
    if (!(v > 0.0)) all_positive = false;
  }
  const double scale = 2.0 * std::numbers::pi * p.level;
  r.normal = (a.a() * p.rho) / scale - Vector::Constant(a.size(), 2.0);

  if (!all_positive) {
    r.classification = Region::outside;
  } else if (std::abs(r.lambda_I) <= tol) {
    r.classification = Region::on_gamma;
  } else if (r.lambda_I > 0.0) {
    r.classification = Region::below_gamma;
    r.degree = degree(p.level - 1, chi);
  } else {
    r.classification = Region::above_gamma;
    r.degree = degree(p.level, chi);
  }
  return r;
}

ParameterPoint q_point(const InteractionMatrix& a, int level) {
  if (level < 1) throw InputError("q_point: N must be >= 1");
  const Vector rhs = Vector::Constant(a.size(), 8.0 * std::numbers::pi * level);
  ParameterPoint q{a.inverse() * rhs, level};
  for (int i = 0; i < q.rho.size(); ++i)
    if (!(q.rho[i] > 0.0)) throw InputError("Q_N has a non-positive component; not admissible");
  const double defect = lambda_full(a, q);
  if (std::abs(defect) > 1e-10 * std::max(1.0, q.rho.sum() / (2.0 * std::numbers::pi * level)))
    throw SingularMatrixError("Q_N solve is ill-conditioned: Lambda_I(Q_N) = " + std::to_string(defect));
  return q;
}

}  // namespace liouville
