#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semifix/errors.hpp"

namespace semifix {

/// A comparison function: a monotone increasing self-map of [0, inf) whose
/// iterates tend to zero pointwise. Built from primitive stages applied in
/// sequence, so compositions and powers stay closed under the type.
///
/// Builtin stages:
///   Linear(q), 0 <= q < 1:     t -> q*t        (classical contractions)
///   RationalDecay(a), a > 0:   t -> t/(1+a*t)  (sub-geometric decay,
///                                               iterates t/(1+n*a*t))
///   TabulatedMonotone:         right-continuous step function; queries
///                              between knots take the value at the nearest
///                              knot from above, queries past the last knot
///                              clamp to the last value.
class ComparisonFn {
 public:
  struct Linear {
    double q;
  };
  struct RationalDecay {
    double a;
  };
  struct TabulatedMonotone {
    std::vector<double> t;    // sorted, distinct knots
    std::vector<double> phi;  // monotone increasing values
  };
  using Stage = std::variant<Linear, RationalDecay, TabulatedMonotone>;

  static ComparisonFn linear(double q) {
    if (!(q >= 0.0 && q < 1.0))
      throw ConfigError("Linear comparison: q must lie in [0,1), got " +
                        std::to_string(q));
    return ComparisonFn({Stage(Linear{q})});
  }

  static ComparisonFn rational_decay(double a) {
    if (!(a > 0.0))
      throw ConfigError("RationalDecay: a must be > 0, got " +
                        std::to_string(a));
    return ComparisonFn({Stage(RationalDecay{a})});
  }

  static ComparisonFn tabulated(std::vector<double> t, std::vector<double> phi) {
    if (t.empty() || t.size() != phi.size())
      throw ShapeError("TabulatedMonotone: knots and values must match");
    if (!std::is_sorted(t.begin(), t.end()) ||
        std::adjacent_find(t.begin(), t.end()) != t.end())
      throw ConfigError("TabulatedMonotone: knots must be sorted and distinct");
    if (!std::is_sorted(phi.begin(), phi.end()))
      throw ConfigError("TabulatedMonotone: values must be monotone increasing");
    for (double v : phi)
      if (!(v >= 0.0))
        throw ConfigError("TabulatedMonotone: values must be nonnegative");
    return ComparisonFn({Stage(TabulatedMonotone{std::move(t), std::move(phi)})});
  }

  /// Composition: apply this first, then next (next o this).
  ComparisonFn then(const ComparisonFn& next) const {
    ComparisonFn r = *this;
    r.stages_.insert(r.stages_.end(), next.stages_.begin(), next.stages_.end());
    return r;
  }

  /// The k-fold composition of this function with itself as a new function.
  ComparisonFn power(int k) const {
    if (k < 1) throw ConfigError("ComparisonFn::power: k must be >= 1");
    ComparisonFn r = *this;
    for (int i = 1; i < k; ++i) r = r.then(*this);
    return r;
  }

  double operator()(double t) const {
    for (const auto& s : stages_) t = eval_stage(s, t);
    return t;
  }

  /// phi(0) > 0 is possible only for tabulated stages; such inputs are
  /// accepted but flagged, since they cannot be genuine comparison
  /// functions (their iterates at 0 do not vanish).
  bool positive_at_origin() const { return (*this)(0.0) > 0.0; }

  /// Knots of any tabulated stages, used to extend verification grids.
  std::vector<double> knots() const {
    std::vector<double> out;
    for (const auto& s : stages_)
      if (const auto* tab = std::get_if<TabulatedMonotone>(&s))
        out.insert(out.end(), tab->t.begin(), tab->t.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const std::vector<Stage>& stages() const { return stages_; }

  std::string describe() const {
    std::string out;
    for (const auto& s : stages_) {
      if (!out.empty()) out += " then ";
      out += std::visit(
          [](const auto& st) -> std::string {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, Linear>)
              return "linear(q=" + std::to_string(st.q) + ")";
            if constexpr (std::is_same_v<T, RationalDecay>)
              return "rational_decay(a=" + std::to_string(st.a) + ")";
            if constexpr (std::is_same_v<T, TabulatedMonotone>)
              return "tabulated(" + std::to_string(st.t.size()) + " knots)";
          },
          s);
    }
    return out;
  }

 private:
  explicit ComparisonFn(std::vector<Stage> stages) : stages_(std::move(stages)) {}

  static double eval_stage(const Stage& s, double t) {
    return std::visit(
        [t](const auto& st) -> double {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, Linear>) return st.q * t;
          if constexpr (std::is_same_v<T, RationalDecay>)
            return t / (1.0 + st.a * t);
          if constexpr (std::is_same_v<T, TabulatedMonotone>) {
            auto it = std::lower_bound(st.t.begin(), st.t.end(), t);
            if (it == st.t.end()) return st.phi.back();
            return st.phi[static_cast<std::size_t>(it - st.t.begin())];
          }
        },
        s);
  }

  std::vector<Stage> stages_;
};

/// phi^n(t), the n-fold iterate. Requires n >= 1.
inline double iterate(const ComparisonFn& phi, long n, double t) {
  if (n < 1) throw PreconditionError("iterate: n must be >= 1");
  for (long i = 0; i < n; ++i) t = phi(t);
  return t;
}

/// Verification report for the comparison-function axioms. Monotonicity
/// failures are hard falsifications; decay failures only mean the limit
/// property stayed undecided within the iteration budget, never that it
/// fails (the property is asymptotic and cannot be refuted numerically).
struct ComparisonReport {
  struct MonotonicityViolation {
    double t1, t2;      // t1 < t2
    double phi1, phi2;  // phi(t1) > phi(t2)
  };
  struct UndecidedDecay {
    double t;
    double reached;  // min over n <= n_max of phi^n(t)
    long n_max;
  };
  std::vector<MonotonicityViolation> monotonicity;
  std::vector<UndecidedDecay> undecided;
  bool positive_at_origin = false;

  bool falsified() const { return !monotonicity.empty(); }
  bool passed() const {
    return monotonicity.empty() && undecided.empty() && !positive_at_origin;
  }
};

/// Checks (a) monotonicity on the union of t_grid and any tabulated knots,
/// and (b) for each grid t, that some iterate up to n_max drops below
/// decay_tol.
inline ComparisonReport verify_comparison(const ComparisonFn& phi,
                                          const std::vector<double>& t_grid,
                                          long n_max, double decay_tol) {
  if (t_grid.empty()) throw ConfigError("verify_comparison: empty grid");
  if (n_max < 1) throw ConfigError("verify_comparison: n_max must be >= 1");
  if (!(decay_tol > 0.0))
    throw ConfigError("verify_comparison: decay_tol must be > 0");

  ComparisonReport report;
  report.positive_at_origin = phi.positive_at_origin();

  std::vector<double> grid = t_grid;
  const auto knots = phi.knots();
  grid.insert(grid.end(), knots.begin(), knots.end());
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = phi(grid[i - 1]), b = phi(grid[i]);
    if (a > b) report.monotonicity.push_back({grid[i - 1], grid[i], a, b});
  }

  for (double t : t_grid) {
    double x = t, best = t;
    bool decayed = false;
    for (long n = 1; n <= n_max; ++n) {
      x = phi(x);
      best = std::min(best, x);
      if (x < decay_tol) {
        decayed = true;
        break;
      }
    }
    if (!decayed) report.undecided.push_back({t, best, n_max});
  }
  return report;
}

/// Lists grid points where phi(t) >= t. Must be empty for a genuine
/// comparison function at positive arguments.
struct BelowIdentityViolation {
  double t;
  double phi_t;
};

inline std::vector<BelowIdentityViolation> check_below_identity(
    const ComparisonFn& phi, const std::vector<double>& t_grid) {
  std::vector<BelowIdentityViolation> out;
  for (double t : t_grid) {
    if (!(t > 0.0))
      throw PreconditionError("check_below_identity: grid must be positive");
    const double v = phi(t);
    if (v >= t) out.push_back({t, v});
  }
  return out;
}

/// Smallest n >= 1 with phi^n(eps) < delta, by direct iteration.
struct NEpsilonResult {
  bool found = false;
  long n = 0;        // valid when found
  double value = 0;  // phi^n(eps) at the answer, or best seen at the cap
};

inline NEpsilonResult n_epsilon(const ComparisonFn& phi, double eps,
                                double delta, long n_cap = 1000000) {
  if (!(eps > 0.0) || !(delta > 0.0))
    throw PreconditionError("n_epsilon: eps and delta must be positive");
  if (n_cap < 1) throw ConfigError("n_epsilon: n_cap must be >= 1");
  double x = eps;
  for (long n = 1; n <= n_cap; ++n) {
    x = phi(x);
    if (x < delta) return {true, n, x};
  }
  return {false, n_cap, x};
}

/// The named instances exercised by grid assertions and preset suites.
struct NamedComparison {
  std::string name;
  ComparisonFn fn;
};

inline std::vector<NamedComparison> builtin_comparison_functions() {
  std::vector<NamedComparison> out;
  for (double q : {0.1, 0.5, 0.9, 0.99})
    out.push_back({"linear(q=" + std::to_string(q) + ")", ComparisonFn::linear(q)});
  for (double a : {0.1, 1.0, 10.0})
    out.push_back({"rational_decay(a=" + std::to_string(a) + ")",
                   ComparisonFn::rational_decay(a)});
  out.push_back({"linear(0.5) then rational_decay(1)",
                 ComparisonFn::linear(0.5).then(ComparisonFn::rational_decay(1.0))});
  out.push_back({"rational_decay(1)^2", ComparisonFn::rational_decay(1.0).power(2)});
  return out;
}

}  // namespace semifix
