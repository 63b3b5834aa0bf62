#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "semifix/errors.hpp"
#include "semifix/ext_real.hpp"
#include "semifix/finite_space.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

namespace detail {
inline void require_shared_carrier(const FiniteSpace& d1, const FiniteSpace& d2,
                                   const char* who) {
  if (d1.size() != d2.size())
    throw ShapeError(std::string(who) + ": carriers differ (" +
                     std::to_string(d1.size()) + " vs " +
                     std::to_string(d2.size()) + " points)");
}
}  // namespace detail

/// L_{d1,d2}(t) = max{ d1(x,y) : d2(x,y) <= t }, exactly, by sweeping all
/// pairs. Diagonal pairs always qualify, so the value is >= 0 and defined
/// for every t >= 0.
inline ExtReal lipschitz_modulus_exact(const FiniteSpace& d1,
                                       const FiniteSpace& d2, ExtReal t) {
  detail::require_shared_carrier(d1, d2, "lipschitz_modulus_exact");
  double best = 0.0;
  for (std::size_t x = 0; x < d1.size(); ++x)
    for (std::size_t y = x + 1; y < d1.size(); ++y)
      if (ExtReal(d2.distance(x, y)) <= t)
        best = std::max(best, d1.distance(x, y));
  return ExtReal(best);
}

/// The smallest Lipschitz modulus of the pair (d1, d2), tabulated as a
/// step function over the attained d2 values. Evaluation between attained
/// arguments uses the value at the smallest attained argument >= t, which
/// over-approximates the true modulus and so keeps every <= check
/// one-sided; above the last attained value the table is exact (all pairs
/// qualify).
class LipschitzTable {
 public:
  LipschitzTable(std::vector<double> grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {}

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  double eval(double t) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
    if (it == grid_.end()) return values_.back();
    return values_[static_cast<std::size_t>(it - grid_.begin())];
  }

  ExtReal eval(ExtReal t) const {
    if (t.is_infinite()) return ExtReal(values_.back());
    return ExtReal(eval(t.value()));
  }

 private:
  std::vector<double> grid_;    // attained d2 values incl. 0, sorted
  std::vector<double> values_;  // L at the grid, monotone increasing
};

inline LipschitzTable build_lipschitz_table(const FiniteSpace& d1,
                                            const FiniteSpace& d2) {
  detail::require_shared_carrier(d1, d2, "build_lipschitz_table");
  const std::vector<double> grid = d2.attained_distances();
  std::vector<double> values(grid.size(), 0.0);
  auto index_of = [&grid](double x) {
    return static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
  };
  for (std::size_t x = 0; x < d1.size(); ++x)
    for (std::size_t y = x + 1; y < d1.size(); ++y) {
      const std::size_t i = index_of(d2.distance(x, y));
      values[i] = std::max(values[i], d1.distance(x, y));
    }
  for (std::size_t i = 1; i < values.size(); ++i)
    values[i] = std::max(values[i], values[i - 1]);
  return LipschitzTable(grid, std::move(values));
}

/// Verdict of an equivalence check on finite data. Finite evidence can
/// falsify equivalence (a modulus stuck at a positive plateau down to the
/// smallest scales checked) but never prove it.
enum class EquivalenceVerdict { consistent_with_equivalent, falsified };

inline std::string to_string(EquivalenceVerdict v) {
  return v == EquivalenceVerdict::consistent_with_equivalent
             ? "consistent-with-equivalent"
             : "falsified";
}

struct EquivalenceOptions {
  /// A curve is a plateau when its value at the smallest grid point is
  /// at least plateau_frac times its value at the largest grid point and
  /// above plateau_abs_tol.
  double plateau_frac = 0.9;
  double plateau_abs_tol = 1e-9;
};

struct EquivalenceReport {
  DiagnosticCurve modulus_12;  // t -> L_{d1,d2}(t)
  DiagnosticCurve modulus_21;  // t -> L_{d2,d1}(t)
  EquivalenceVerdict verdict = EquivalenceVerdict::consistent_with_equivalent;
  bool plateau_12 = false;
  bool plateau_21 = false;
};

/// Computes both modulus curves on the grid (exactly, pair sweeps) and
/// judges them for a positive lower plateau. Both moduli must decay to 0
/// for equivalent semimetrics; on a finite carrier every modulus is 0
/// below the smallest attained scale, so only plateaus across the attained
/// scales can falsify.
inline EquivalenceReport equivalence_diagnostic(
    const FiniteSpace& d1, const FiniteSpace& d2, std::vector<double> t_grid,
    const EquivalenceOptions& opts = {}) {
  detail::require_shared_carrier(d1, d2, "equivalence_diagnostic");
  if (t_grid.empty()) throw ConfigError("equivalence_diagnostic: empty grid");
  for (double t : t_grid)
    if (!(t > 0.0))
      throw ConfigError("equivalence_diagnostic: grid must be positive");
  std::sort(t_grid.begin(), t_grid.end());
  t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());

  EquivalenceReport report;
  auto fill = [&t_grid](const FiniteSpace& a, const FiniteSpace& b) {
    DiagnosticCurve curve;
    curve.meaning = DiagnosticCurve::Meaning::lipschitz_modulus;
    curve.exact = true;
    for (double t : t_grid)
      curve.samples.push_back({t, lipschitz_modulus_exact(a, b, t)});
    return curve;
  };
  report.modulus_12 = fill(d1, d2);
  report.modulus_21 = fill(d2, d1);

  auto plateaued = [&opts](const DiagnosticCurve& c) {
    const double lo = c.samples.front().value.value();
    const double hi = c.samples.back().value.value();
    return lo >= opts.plateau_abs_tol && lo >= opts.plateau_frac * hi;
  };
  report.plateau_12 = plateaued(report.modulus_12);
  report.plateau_21 = plateaued(report.modulus_21);
  report.verdict = (report.plateau_12 || report.plateau_21)
                       ? EquivalenceVerdict::falsified
                       : EquivalenceVerdict::consistent_with_equivalent;
  return report;
}

/// An attained d1-pair violating the composed triangle bound
/// Phi_{d1} <= L_{d1,d2} o Phi_{d2} o (L_{d2,d1}, L_{d2,d1}).
struct ComposedBoundViolation {
  double u, v;
  double lhs;
  ExtReal rhs;
};

/// Checks the composed bound at every attained pair of d1-distances, all
/// four pieces tabulated exactly. Each piece lands on grid points of the
/// next (L_{d2,d1} outputs attained d2 values, Phi_{d2} outputs attained
/// d2 values), so the whole chain is exact and the comparison carries no
/// tolerance.
inline std::vector<ComposedBoundViolation> composed_triangle_bound_check(
    const FiniteSpace& d1, const FiniteSpace& d2) {
  detail::require_shared_carrier(d1, d2, "composed_triangle_bound_check");
  const auto phi1 = basic_triangle_table(d1);
  const auto phi2 = basic_triangle_table(d2);
  const auto l12 = build_lipschitz_table(d1, d2);
  const auto l21 = build_lipschitz_table(d2, d1);

  std::vector<ComposedBoundViolation> out;
  for (double u : phi1.grid())
    for (double v : phi1.grid()) {
      const double lhs = phi1.entry(u, v);
      const ExtReal inner = phi2.eval(l21.eval(u), l21.eval(v));
      const ExtReal rhs = l12.eval(inner);
      if (ExtReal(lhs) > rhs) out.push_back({u, v, lhs, rhs});
    }
  return out;
}

}  // namespace semifix
