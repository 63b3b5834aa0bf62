#pragma once

#include <concepts>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "semifix/errors.hpp"
#include "semifix/finite_space.hpp"
#include "semifix/line_space.hpp"

namespace semifix {

/// A semimetric space over points of type P: a symmetric nonnegative
/// distance oracle vanishing exactly on the diagonal. No triangle
/// inequality is assumed anywhere in the library.
template <class S, class P>
concept SpaceOver = requires(const S& s, const P& x, const P& y) {
  { s.distance(x, y) } -> std::convertible_to<double>;
};

/// Runtime-selected space for the config-driven layer.
using AnySpace = std::variant<FiniteSpace, LineSpace>;

inline bool is_finite_space(const AnySpace& s) {
  return std::holds_alternative<FiniteSpace>(s);
}

inline Completeness completeness(const AnySpace& s) {
  if (is_finite_space(s)) return Completeness::complete;
  return std::get<LineSpace>(s).completeness();
}

/// All off-diagonal distances equal to 1: an ultrametric space whose basic
/// triangle function is max{u,v} at attained arguments.
inline FiniteSpace discrete_ultrametric(std::size_t n) {
  if (n < 1) throw ConfigError("discrete_ultrametric: n must be >= 1");
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return FiniteSpace::from_matrix(m);
}

/// The fan space on {p, a_1..a_N, b_1..b_N}: d(p,a_i) = d(p,b_i) = 1/i,
/// d(a_i,b_i) = 1, every other off-diagonal distance 2. Its basic triangle
/// function satisfies Phi_d(1/i, 1/i) >= 1 for every i (witness center p),
/// so it is not continuous at the origin: the canonical non-regular space.
///
/// Index layout: point 0 is p, points 1..N are a_1..a_N, points N+1..2N
/// are b_1..b_N.
inline FiniteSpace fan_space(std::size_t N) {
  if (N < 1) throw ConfigError("nonregular_family_N: N must be >= 1");
  const std::size_t n = 2 * N + 1;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 2.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  for (std::size_t i = 1; i <= N; ++i) {
    m[0][i] = m[i][0] = 1.0 / static_cast<double>(i);          // p -- a_i
    m[0][N + i] = m[N + i][0] = 1.0 / static_cast<double>(i);  // p -- b_i
    m[i][N + i] = m[N + i][i] = 1.0;                           // a_i -- b_i
  }
  return FiniteSpace::from_matrix(m);
}

}  // namespace semifix
