#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semifix/errors.hpp"
#include "semifix/random.hpp"

namespace semifix {

/// One failed distance axiom found by validate_semimetric.
struct AxiomViolation {
  enum class Kind {
    asymmetry,            // d(i,j) != d(j,i) beyond tol
    nonzero_diagonal,     // |d(i,i)| > tol
    vanishing_off_diagonal  // d(i,j) <= tol for i != j
  };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;   // offending entry d(i,j)
  double mirror = 0.0;  // d(j,i), for asymmetry reports

  std::string describe() const {
    switch (kind) {
      case Kind::asymmetry:
        return "asymmetry at (" + std::to_string(i) + "," + std::to_string(j) +
               "): " + std::to_string(value) + " vs " + std::to_string(mirror);
      case Kind::nonzero_diagonal:
        return "nonzero diagonal at " + std::to_string(i) + ": " +
               std::to_string(value);
      case Kind::vanishing_off_diagonal:
        return "off-diagonal entry not positive at (" + std::to_string(i) +
               "," + std::to_string(j) + "): " + std::to_string(value);
    }
    return "?";
  }
};

/// Checks the semimetric axioms on a square distance matrix: symmetry
/// within tol, diagonal within tol of zero, off-diagonal entries > tol.
/// An empty report means the matrix is a valid (finite) semimetric.
///
/// The triangle inequality is deliberately NOT checked here; semimetrics
/// do not assume one.
inline std::vector<AxiomViolation> validate_semimetric(
    const std::vector<std::vector<double>>& matrix, double tol = 0.0) {
  if (tol < 0.0) throw ConfigError("validate_semimetric: tol must be >= 0");
  const std::size_t n = matrix.size();
  for (const auto& row : matrix) {
    if (row.size() != n)
      throw ShapeError("validate_semimetric: matrix is not square (" +
                       std::to_string(n) + " rows, row of length " +
                       std::to_string(row.size()) + ")");
  }
  std::vector<AxiomViolation> report;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(matrix[i][i]) > tol)
      report.push_back({AxiomViolation::Kind::nonzero_diagonal, i, i,
                        matrix[i][i], matrix[i][i]});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(matrix[i][j] - matrix[j][i]) > tol)
        report.push_back({AxiomViolation::Kind::asymmetry, i, j, matrix[i][j],
                          matrix[j][i]});
      if (!(matrix[i][j] > tol))
        report.push_back({AxiomViolation::Kind::vanishing_off_diagonal, i, j,
                          matrix[i][j], matrix[j][i]});
    }
  }
  return report;
}

/// A finite semimetric space: points are the indices 0..n-1 and distances
/// come from an explicit symmetric matrix with zero diagonal and strictly
/// positive off-diagonal entries. Immutable after construction.
///
/// Every finite semimetric space is complete: a Cauchy sequence is
/// eventually constant once its tail gaps drop below the smallest positive
/// distance.
class FiniteSpace {
 public:
  using point_type = std::size_t;

  /// Validates the axioms (at tol) before accepting the matrix.
  static FiniteSpace from_matrix(const std::vector<std::vector<double>>& m,
                                 double tol = 0.0) {
    auto report = validate_semimetric(m, tol);
    if (!report.empty())
      throw ConfigError("FiniteSpace: matrix is not a semimetric: " +
                        report.front().describe());
    FiniteSpace s;
    s.n_ = m.size();
    s.d_.resize(s.n_ * s.n_);
    for (std::size_t i = 0; i < s.n_; ++i)
      for (std::size_t j = 0; j < s.n_; ++j) s.d_[i * s.n_ + j] = m[i][j];
    return s;
  }

  std::size_t size() const { return n_; }

  double distance(std::size_t i, std::size_t j) const {
    return d_[i * n_ + j];
  }

  /// Sorted distinct distance values, always including 0.
  std::vector<double> attained_distances() const {
    std::vector<double> v;
    v.reserve(n_ * (n_ - 1) / 2 + 1);
    v.push_back(0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) v.push_back(distance(i, j));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  double diameter() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        m = std::max(m, distance(i, j));
    return m;
  }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> m(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i][j] = distance(i, j);
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Random finite semimetric: symmetric, zero diagonal, off-diagonal entries
/// i.i.d. uniform on [0.1, 2]. Bounded away from zero so positivity is
/// robust under float operations.
inline FiniteSpace random_semimetric(Rng& rng, std::size_t n) {
  if (n == 0) throw ConfigError("random_semimetric: n must be >= 1");
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m[i][j] = m[j][i] = uniform(rng, 0.1, 2.0);
  return FiniteSpace::from_matrix(m);
}

}  // namespace semifix
