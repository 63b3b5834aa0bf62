#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semifix/errors.hpp"
#include "semifix/ext_real.hpp"
#include "semifix/finite_space.hpp"
#include "semifix/line_space.hpp"
#include "semifix/random.hpp"

namespace semifix {

/// A candidate triangle function: symmetric, monotone increasing in each
/// argument, vanishing at (0,0). The closed forms cover metric (u+v),
/// ultrametric (max), c-relaxed, c-inframetric and pth-order inequalities;
/// Tabulated carries an explicit step function over a grid of arguments.
class TriangleForm {
 public:
  struct Sum {};
  struct Max {};
  struct CRelaxed {
    double c;  // c >= 1
  };
  struct CInframetric {
    double c;  // c >= 1
  };
  struct PthOrder {
    double p;  // p > 0
  };
  /// Step function over grid x grid. Queries between grid points evaluate
  /// at the componentwise-smallest grid pair dominating the query, which
  /// preserves monotonicity and never under-reports; queries above the
  /// grid return +infinity.
  struct Tabulated {
    std::vector<double> grid;                 // sorted, distinct
    std::vector<std::vector<ExtReal>> value;  // value[i][j] at (grid[i], grid[j])
  };

  using Variant = std::variant<Sum, Max, CRelaxed, CInframetric, PthOrder, Tabulated>;

  static TriangleForm sum() { return TriangleForm(Sum{}); }
  static TriangleForm max_form() { return TriangleForm(Max{}); }

  static TriangleForm c_relaxed(double c) {
    if (!(c >= 1.0))
      throw ConfigError("CRelaxed: c must be >= 1, got " + std::to_string(c));
    return TriangleForm(CRelaxed{c});
  }

  static TriangleForm c_inframetric(double c) {
    if (!(c >= 1.0))
      throw ConfigError("CInframetric: c must be >= 1, got " +
                        std::to_string(c));
    return TriangleForm(CInframetric{c});
  }

  static TriangleForm pth_order(double p) {
    if (!(p > 0.0))
      throw ConfigError("PthOrder: p must be > 0, got " + std::to_string(p));
    return TriangleForm(PthOrder{p});
  }

  static TriangleForm tabulated(std::vector<double> grid,
                                std::vector<std::vector<ExtReal>> value) {
    Tabulated t{std::move(grid), std::move(value)};
    if (t.grid.empty()) throw ConfigError("Tabulated: empty grid");
    if (!std::is_sorted(t.grid.begin(), t.grid.end()) ||
        std::adjacent_find(t.grid.begin(), t.grid.end()) != t.grid.end())
      throw ConfigError("Tabulated: grid must be sorted and distinct");
    const std::size_t m = t.grid.size();
    if (t.value.size() != m)
      throw ShapeError("Tabulated: value matrix does not match grid");
    for (const auto& row : t.value)
      if (row.size() != m)
        throw ShapeError("Tabulated: value matrix does not match grid");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (t.value[i][j] != t.value[j][i])
          throw ConfigError("Tabulated: table must be symmetric");
        if (i + 1 < m && t.value[i][j] > t.value[i + 1][j])
          throw ConfigError("Tabulated: table must be monotone");
      }
    return TriangleForm(std::move(t));
  }

  /// Pointwise evaluation. Infinity absorbs through every closed form.
  ExtReal operator()(ExtReal u, ExtReal v) const {
    return std::visit([&](const auto& f) { return eval(f, u, v); }, form_);
  }

  const Variant& variant() const { return form_; }

  std::string describe() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Sum>) return "sum";
          if constexpr (std::is_same_v<T, Max>) return "max";
          if constexpr (std::is_same_v<T, CRelaxed>)
            return "c_relaxed(c=" + std::to_string(f.c) + ")";
          if constexpr (std::is_same_v<T, CInframetric>)
            return "c_inframetric(c=" + std::to_string(f.c) + ")";
          if constexpr (std::is_same_v<T, PthOrder>)
            return "pth_order(p=" + std::to_string(f.p) + ")";
          if constexpr (std::is_same_v<T, Tabulated>)
            return "tabulated(" + std::to_string(f.grid.size()) + " knots)";
        },
        form_);
  }

 private:
  explicit TriangleForm(Variant v) : form_(std::move(v)) {}

  static ExtReal eval(const Sum&, ExtReal u, ExtReal v) { return u + v; }
  static ExtReal eval(const Max&, ExtReal u, ExtReal v) { return max(u, v); }
  static ExtReal eval(const CRelaxed& f, ExtReal u, ExtReal v) {
    return f.c * (u + v);
  }
  static ExtReal eval(const CInframetric& f, ExtReal u, ExtReal v) {
    return f.c * max(u, v);
  }
  static ExtReal eval(const PthOrder& f, ExtReal u, ExtReal v) {
    if (u.is_infinite() || v.is_infinite()) return ExtReal::infinity();
    return ExtReal(std::pow(std::pow(u.value(), f.p) + std::pow(v.value(), f.p),
                            1.0 / f.p));
  }
  static ExtReal eval(const Tabulated& f, ExtReal u, ExtReal v) {
    const auto up = dominating_index(f.grid, u);
    const auto vp = dominating_index(f.grid, v);
    if (up < 0 || vp < 0) return ExtReal::infinity();
    return f.value[static_cast<std::size_t>(up)][static_cast<std::size_t>(vp)];
  }

  /// Index of the smallest grid value >= x, or -1 if none.
  static long dominating_index(const std::vector<double>& grid, ExtReal x) {
    if (x.is_infinite()) return -1;
    auto it = std::lower_bound(grid.begin(), grid.end(), x.value());
    if (it == grid.end()) return -1;
    return it - grid.begin();
  }

  Variant form_;
};

/// The basic triangle function of a finite space, tabulated at every pair
/// of attained distances (including 0). Entries are exact maxima over
/// witness triples, hence symmetric and monotone in each argument.
class BasicTriangleTable {
 public:
  BasicTriangleTable(FiniteSpace space, std::vector<double> grid,
                     std::vector<std::vector<double>> phi)
      : space_(std::move(space)), grid_(std::move(grid)), phi_(std::move(phi)) {
    std::vector<std::vector<ExtReal>> v(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
      v[i].assign(phi_[i].begin(), phi_[i].end());
    form_ = TriangleForm::tabulated(grid_, std::move(v));
  }

  const FiniteSpace& space() const { return space_; }
  const std::vector<double>& grid() const { return grid_; }

  /// Exact entry at an attained pair; throws if (u,v) is not on the grid.
  double entry(double u, double v) const {
    return phi_[grid_index(u)][grid_index(v)];
  }

  /// Tabulated evaluation at arbitrary arguments (dominating-pair rule,
  /// +infinity above the grid).
  ExtReal eval(ExtReal u, ExtReal v) const { return as_form()(u, v); }

  /// View as a Tabulated triangle-function form.
  const TriangleForm& as_form() const { return *form_; }

 private:
  std::size_t grid_index(double x) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.end() || *it != x)
      throw PreconditionError("BasicTriangleTable: " + std::to_string(x) +
                              " is not an attained distance");
    return static_cast<std::size_t>(it - grid_.begin());
  }

  FiniteSpace space_;
  std::vector<double> grid_;
  std::vector<std::vector<double>> phi_;
  std::optional<TriangleForm> form_;  // eager: safe to share across threads
};

/// Phi_d(u,v) on a finite space by direct enumeration of all ordered
/// witness triples (p,x,y) with d(p,x) <= u and d(p,y) <= v. The triple
/// (p,p,p) always qualifies, so the supremum is over a nonempty set and
/// the value is well defined (and 0 below the smallest positive distance).
inline ExtReal basic_triangle_exact(const FiniteSpace& s, ExtReal u, ExtReal v) {
  const std::size_t n = s.size();
  double best = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t x = 0; x < n; ++x) {
      if (ExtReal(s.distance(p, x)) > u) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (ExtReal(s.distance(p, y)) > v) continue;
        best = std::max(best, s.distance(x, y));
      }
    }
  return ExtReal(best);
}

/// Tabulates Phi_d over all pairs of attained distances. Built by a
/// two-pass prefix-max over witness triples, O(n^3 + m^2) for m attained
/// values; agrees with basic_triangle_exact entrywise.
inline BasicTriangleTable basic_triangle_table(const FiniteSpace& s) {
  const std::vector<double> grid = s.attained_distances();
  const std::size_t m = grid.size();
  const std::size_t n = s.size();
  auto index_of = [&grid](double x) {
    return static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
  };

  std::vector<std::vector<double>> phi(m, std::vector<double>(m, 0.0));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t iu = index_of(s.distance(p, x));
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t iv = index_of(s.distance(p, y));
        phi[iu][iv] = std::max(phi[iu][iv], s.distance(x, y));
      }
    }
  // prefix max in each argument: entry(u,v) ranges over d(p,x) <= u, d(p,y) <= v
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 1; j < m; ++j)
      phi[i][j] = std::max(phi[i][j], phi[i][j - 1]);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 1; i < m; ++i)
      phi[i][j] = std::max(phi[i][j], phi[i - 1][j]);
  return BasicTriangleTable(s, grid, std::move(phi));
}

/// A witness triple violating the generalized triangle inequality on a
/// finite space: d(x,y) > Phi(d(x,z), d(y,z)).
struct TripleViolation {
  std::size_t x, y, z;
  double lhs;
  ExtReal rhs;
};

/// Same witness on a sampled continuum, identified by coordinates.
struct SampledTripleViolation {
  double x, y, z;
  double lhs;
  ExtReal rhs;
};

namespace detail {
/// lhs > rhs beyond a relative-absolute tolerance band.
inline bool exceeds(double lhs, ExtReal rhs, double tol) {
  if (rhs.is_infinite()) return false;
  return lhs > rhs.value() + tol * std::max(1.0, rhs.value());
}
}  // namespace detail

/// Exhaustive check of d(x,y) <= Phi(d(x,z), d(y,z)) over all ordered
/// triples of a finite space. Empty result = Phi verified as a triangle
/// function for this space. Exact comparison by default.
inline std::vector<TripleViolation> verify_triangle_exhaustive(
    const FiniteSpace& s, const TriangleForm& form, double tol = 0.0) {
  std::vector<TripleViolation> out;
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        const double lhs = s.distance(x, y);
        const ExtReal rhs = form(s.distance(x, z), s.distance(y, z));
        if (detail::exceeds(lhs, rhs, tol)) out.push_back({x, y, z, lhs, rhs});
      }
  return out;
}

/// Sampled check on a continuum space: k random triples from the sampling
/// window. Empty result means "not falsified", never "verified".
inline std::vector<SampledTripleViolation> verify_triangle_sampled(
    const LineSpace& s, const TriangleForm& form, std::size_t k, Rng& rng,
    double tol = 1e-12) {
  std::vector<SampledTripleViolation> out;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = s.sample(rng), y = s.sample(rng), z = s.sample(rng);
    const double lhs = s.distance(x, y);
    const ExtReal rhs = form(s.distance(x, z), s.distance(y, z));
    if (detail::exceeds(lhs, rhs, tol)) out.push_back({x, y, z, lhs, rhs});
  }
  return out;
}

/// An attained pair where the basic triangle function exceeds a candidate
/// form; nonempty output disproves the form's optimality claim (and, for
/// verified forms, cannot happen).
struct OptimalityViolation {
  double u, v;
  double table_value;
  ExtReal form_value;
};

/// Checks Phi_d <= Phi at every attained pair. Precondition: the form was
/// verified as a triangle function for the table's space; this is enforced
/// by re-running the exhaustive verification.
inline std::vector<OptimalityViolation> check_optimality(
    const BasicTriangleTable& table, const TriangleForm& form) {
  if (!verify_triangle_exhaustive(table.space(), form).empty())
    throw PreconditionError(
        "check_optimality: form " + form.describe() +
        " is not a verified triangle function for this space");
  std::vector<OptimalityViolation> out;
  const auto& grid = table.grid();
  for (double u : grid)
    for (double v : grid) {
      const double lhs = table.entry(u, v);
      const ExtReal rhs = form(u, v);
      if (ExtReal(lhs) > rhs) out.push_back({u, v, lhs, rhs});
    }
  return out;
}

namespace detail {
template <class Ratio>
double smallest_valid_constant(const BasicTriangleTable& table, Ratio ratio,
                               TriangleForm (*make)(double)) {
  double c = 1.0;
  for (double u : table.grid())
    for (double v : table.grid()) {
      const double denom = ratio(u, v);
      if (denom > 0.0) c = std::max(c, table.entry(u, v) / denom);
    }
  // The float quotient can land one ulp short of validity; nudge upward
  // until the exhaustive verification accepts it.
  for (int bump = 0; bump < 8; ++bump) {
    if (verify_triangle_exhaustive(table.space(), make(c)).empty()) return c;
    c = std::nextafter(c, std::numeric_limits<double>::infinity());
  }
  throw Error("smallest_valid_constant: search failed to verify");
}
}  // namespace detail

/// Smallest c >= 1 making c(u+v) a verified triangle function for the
/// space, found by maximizing Phi_d(u,v)/(u+v) over attained pairs.
inline double smallest_valid_c_relaxed(const BasicTriangleTable& table) {
  return detail::smallest_valid_constant(
      table, [](double u, double v) { return u + v; }, &TriangleForm::c_relaxed);
}

/// Smallest c >= 1 making c*max{u,v} a verified triangle function.
inline double smallest_valid_c_inframetric(const BasicTriangleTable& table) {
  return detail::smallest_valid_constant(
      table, [](double u, double v) { return std::max(u, v); },
      &TriangleForm::c_inframetric);
}

/// Sampled curve of a nonnegative parameter: ball-diameter profiles and
/// Lipschitz modulus tables share this carrier.
struct DiagnosticCurve {
  enum class Meaning { ball_diameter, lipschitz_modulus };
  struct Sample {
    double param;
    ExtReal value;
  };
  std::vector<Sample> samples;  // param strictly increasing
  Meaning meaning = Meaning::ball_diameter;
  bool exact = true;  // false: lower bound from a finite sample
};

namespace detail {
inline std::vector<double> sorted_radii(std::vector<double> radii) {
  if (radii.empty())
    throw ConfigError("regularity_diagnostic: empty radii grid");
  for (double r : radii)
    if (!(r > 0.0))
      throw ConfigError("regularity_diagnostic: radii must be positive");
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

/// max_p diam B(p,r) over an explicit point set with a distance oracle.
/// Balls are open (strict <); diameters are maxima of pairwise distances
/// inside the ball.
template <class Dist>
double sup_ball_diameter(std::size_t n, const Dist& d, double r) {
  double best = 0.0;
  std::vector<std::size_t> members;
  for (std::size_t p = 0; p < n; ++p) {
    members.clear();
    for (std::size_t x = 0; x < n; ++x)
      if (d(p, x) < r) members.push_back(x);
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        best = std::max(best, d(members[a], members[b]));
  }
  return best;
}
}  // namespace detail

/// Exact ball-diameter curve r -> max_p diam B(p,r) on a finite space.
/// The curve is flat at 0 below the smallest positive distance and reaches
/// the space diameter once r exceeds it; a space is regular exactly when
/// this curve decays to 0 as r -> 0.
inline DiagnosticCurve regularity_diagnostic(const FiniteSpace& s,
                                             std::vector<double> radii) {
  const auto grid = detail::sorted_radii(std::move(radii));
  DiagnosticCurve curve;
  curve.meaning = DiagnosticCurve::Meaning::ball_diameter;
  curve.exact = true;
  auto d = [&s](std::size_t i, std::size_t j) { return s.distance(i, j); };
  for (double r : grid)
    curve.samples.push_back({r, detail::sup_ball_diameter(s.size(), d, r)});
  return curve;
}

/// Lower-bound ball-diameter curve on a continuum space, computed on a
/// random sample of the carrier. Values can only grow with more samples.
inline DiagnosticCurve regularity_diagnostic(const LineSpace& s,
                                             std::vector<double> radii,
                                             std::size_t n_samples, Rng& rng) {
  if (n_samples < 2)
    throw ConfigError("regularity_diagnostic: need at least 2 samples");
  const auto grid = detail::sorted_radii(std::move(radii));
  std::vector<double> pts(n_samples);
  for (auto& p : pts) p = s.sample(rng);
  DiagnosticCurve curve;
  curve.meaning = DiagnosticCurve::Meaning::ball_diameter;
  curve.exact = false;
  auto d = [&](std::size_t i, std::size_t j) {
    return s.distance(pts[i], pts[j]);
  };
  for (double r : grid)
    curve.samples.push_back({r, detail::sup_ball_diameter(pts.size(), d, r)});
  return curve;
}

}  // namespace semifix
