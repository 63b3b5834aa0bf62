#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "semifix/comparison.hpp"
#include "semifix/contraction.hpp"
#include "semifix/errors.hpp"
#include "semifix/solver.hpp"
#include "semifix/space.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

/// A sequence of self-maps T_n converging pointwise to a limit map T_0,
/// all phi-contractive for one shared comparison function.
template <class M>
struct MapSequence {
  std::function<M(long)> member;  // n >= 1
  M limit;
  ComparisonFn phi;
};

/// Finite-evidence test for "these values tend to 0": the last value must
/// be below frac times the first and below an absolute tolerance.
/// Thresholds are configurable; the defaults suit sequences run far enough
/// to reach the 1e-3 scale.
struct TrendOptions {
  double frac = 0.1;
  double abs_tol = 1e-3;
};

inline bool trend_to_zero(const std::vector<double>& values,
                          const TrendOptions& opts = {}) {
  if (values.empty()) return false;
  const double first = values.front(), last = values.back();
  return last < first * opts.frac && last < opts.abs_tol;
}

struct StabilityOptions {
  /// Verify phi-contractivity of every member and the limit before
  /// solving (sampled on continuum spaces); on falsification the run
  /// aborts with a precondition error. Off means "trust the declaration".
  bool verify_members = true;
  std::size_t verify_samples = 2000;
  TrendOptions trend;
};

template <class P>
struct StabilityRow {
  long n;
  P member_fixed_point{};
  double distance = 0.0;  // d(x_0, x_n)
  bool inconclusive = false;
};

template <class P>
struct StabilityReport {
  std::vector<StabilityRow<P>> rows;
  P limit_fixed_point{};
  bool limit_inconclusive = false;
  bool trend_pass = false;

  bool any_inconclusive() const {
    if (limit_inconclusive) return true;
    return std::any_of(rows.begin(), rows.end(),
                       [](const auto& r) { return r.inconclusive; });
  }
};

namespace detail {
template <class M>
void verify_member_or_throw(const FiniteSpace& s, const M& map,
                            const ComparisonFn& phi, std::size_t, Rng&) {
  auto cert = verify_phi_contraction(s, map, phi);
  if (cert.verdict == Verdict::falsified)
    throw PreconditionError("stability: member is not a phi-contraction");
}

template <class M>
void verify_member_or_throw(const LineSpace& s, const M& map,
                            const ComparisonFn& phi, std::size_t samples,
                            Rng& rng) {
  auto cert = verify_phi_contraction(s, map, phi, samples, rng);
  if (cert.verdict == Verdict::falsified)
    throw PreconditionError("stability: member is not a phi-contraction");
}
}  // namespace detail

/// Solves each member T_n and the limit T_0 from a shared start and
/// reports the distance from each member's fixed point to the limit's.
/// For pointwise-convergent contraction sequences on complete regular
/// spaces this distance column tends to 0.
template <class S, class M, class P>
  requires SpaceOver<S, P>
StabilityReport<P> stability_run(const S& space, const MapSequence<M>& seq,
                                 const std::vector<long>& n_list, P start,
                                 const StopPolicy& policy, Rng& rng,
                                 const StabilityOptions& opts = {}) {
  if (n_list.empty()) throw ConfigError("stability_run: empty index list");
  StabilityReport<P> report;

  if (opts.verify_members)
    detail::verify_member_or_throw(space, seq.limit, seq.phi,
                                   opts.verify_samples, rng);
  auto limit_trace = picard_solve(space, seq.limit, start, policy);
  report.limit_fixed_point = limit_trace.final_point;
  report.limit_inconclusive = limit_trace.reason == StopReason::cap;

  for (long n : n_list) {
    const M member = seq.member(n);
    if (opts.verify_members)
      detail::verify_member_or_throw(space, member, seq.phi,
                                     opts.verify_samples, rng);
    auto trace = picard_solve(space, member, start, policy);
    StabilityRow<P> row;
    row.n = n;
    row.member_fixed_point = trace.final_point;
    row.distance = space.distance(report.limit_fixed_point, trace.final_point);
    row.inconclusive =
        trace.reason == StopReason::cap || report.limit_inconclusive;
    report.rows.push_back(row);
  }

  std::vector<double> distances;
  for (const auto& r : report.rows) distances.push_back(r.distance);
  report.trend_pass = !report.any_inconclusive() &&
                      trend_to_zero(distances, opts.trend);
  return report;
}

template <class P>
struct IterateConvergenceRow {
  long n;
  double max_over_probes;  // max_x d(T_n^k x, T_0^k x)
};

namespace detail {
template <class M, class P>
P apply_power(const M& map, P x, long k) {
  for (long i = 0; i < k; ++i) x = map(x);
  return x;
}
}  // namespace detail

/// For fixed k, tabulates n -> max over probes of d(T_n^k x, T_0^k x).
/// Pointwise convergence of the generator propagates to every power, so
/// these values must trend to 0 in n.
template <class S, class M, class P>
  requires SpaceOver<S, P>
std::vector<IterateConvergenceRow<P>> iterate_convergence_check(
    const S& space, const MapSequence<M>& seq, long k,
    const std::vector<P>& probes, const std::vector<long>& n_list) {
  if (k < 1) throw PreconditionError("iterate_convergence_check: k must be >= 1");
  if (probes.empty())
    throw ConfigError("iterate_convergence_check: no probe points");
  std::vector<IterateConvergenceRow<P>> rows;
  for (long n : n_list) {
    const M member = seq.member(n);
    double worst = 0.0;
    for (const P& x : probes)
      worst = std::max(worst, space.distance(detail::apply_power(member, x, k),
                                             detail::apply_power(seq.limit, x, k)));
    rows.push_back({n, worst});
  }
  return rows;
}

/// A violation of the iterate-convergence bound
/// d(T_n^{k+1}x, T_0^{k+1}x) <= Phi(d(T_n x, T_0 x), d(T_n^k T_0 x, T_0^k T_0 x)).
struct IterateBoundViolation {
  long n;
  long k;
  double lhs;
  ExtReal rhs;
};

/// Checks the bound above at every (n, k, probe), with Phi the space's
/// triangle function (exact table on finite spaces, known closed form on
/// builtin continuum spaces).
template <class S, class M, class P>
  requires SpaceOver<S, P>
std::vector<IterateBoundViolation> iterate_bound_check(
    const S& space, const MapSequence<M>& seq, const std::vector<long>& ks,
    const std::vector<P>& probes, const std::vector<long>& n_list,
    const TriangleForm& triangle, double tol = 1e-12) {
  std::vector<IterateBoundViolation> out;
  for (long n : n_list) {
    const M member = seq.member(n);
    for (long k : ks) {
      if (k < 1) throw PreconditionError("iterate_bound_check: k must be >= 1");
      for (const P& x : probes) {
        const double lhs =
            space.distance(detail::apply_power(member, x, k + 1),
                           detail::apply_power(seq.limit, x, k + 1));
        const P limit_x = seq.limit(x);
        const double u = space.distance(member(x), seq.limit(x));
        const double v =
            space.distance(detail::apply_power(member, limit_x, k),
                           detail::apply_power(seq.limit, limit_x, k));
        const ExtReal rhs = triangle(u, v);
        if (rhs.is_finite() && lhs > rhs.value() + tol)
          out.push_back({n, k, lhs, rhs});
      }
    }
  }
  return out;
}

/// A declared convergent sequence: a finite prefix plus its limit. The
/// harness never infers limits.
template <class P>
struct ProbeSequence {
  std::vector<P> points;
  P limit{};
};

/// Tail behavior of |d(x_m, y_m) - d(x, y)| for declared convergent probe
/// pairs. A vanishing tail supports self-continuity of the semimetric; a
/// positive plateau exhibits failure (possible in non-regular spaces).
struct SelfContinuityReport {
  std::vector<double> deviations;  // by m
  double tail_max = 0.0;           // over the trailing window
  bool trend_pass = false;
};

template <class S, class P>
  requires SpaceOver<S, P>
SelfContinuityReport self_continuity_check(const S& space,
                                           const ProbeSequence<P>& xs,
                                           const ProbeSequence<P>& ys,
                                           const TrendOptions& trend = {}) {
  if (xs.points.empty() || xs.points.size() != ys.points.size())
    throw ShapeError("self_continuity_check: probe sequences must be "
                     "nonempty and of equal length");
  SelfContinuityReport report;
  const double limit_distance = space.distance(xs.limit, ys.limit);
  for (std::size_t m = 0; m < xs.points.size(); ++m)
    report.deviations.push_back(
        std::abs(space.distance(xs.points[m], ys.points[m]) - limit_distance));
  const std::size_t window = std::min<std::size_t>(5, report.deviations.size());
  for (std::size_t m = report.deviations.size() - window;
       m < report.deviations.size(); ++m)
    report.tail_max = std::max(report.tail_max, report.deviations[m]);
  report.trend_pass = trend_to_zero(report.deviations, trend);
  return report;
}

/// Convergence/Cauchy agreement of probe sequences under two semimetrics
/// on the same carrier. For equivalent semimetrics both columns must
/// agree; window-K Cauchy testing on finite prefixes is evidence only (a
/// slowly divergent sequence can look Cauchy for any fixed K).
struct TransferRow {
  bool converges_d1 = false;
  bool converges_d2 = false;
  bool cauchy_d1 = false;
  bool cauchy_d2 = false;

  bool convergence_agrees() const { return converges_d1 == converges_d2; }
  bool cauchy_agrees() const { return cauchy_d1 == cauchy_d2; }
};

struct TransferOptions {
  double tol = 1e-6;
  std::size_t window = 5;  // Cauchy window K
  std::size_t tail = 5;    // trailing entries examined
};

template <class S1, class S2, class P>
  requires SpaceOver<S1, P> && SpaceOver<S2, P>
std::vector<TransferRow> transfer_check(
    const S1& d1, const S2& d2, const std::vector<ProbeSequence<P>>& probes,
    const TransferOptions& opts = {}) {
  std::vector<TransferRow> rows;
  for (const auto& probe : probes) {
    if (probe.points.size() < 2)
      throw ShapeError("transfer_check: probe too short");
    TransferRow row;
    auto converges = [&](const auto& d) {
      const std::size_t start =
          probe.points.size() - std::min(opts.tail, probe.points.size());
      for (std::size_t m = start; m < probe.points.size(); ++m)
        if (!(d.distance(probe.points[m], probe.limit) < opts.tol))
          return false;
      return true;
    };
    auto cauchy = [&](const auto& d) {
      const std::size_t start =
          probe.points.size() - std::min(opts.tail + opts.window,
                                         probe.points.size());
      for (std::size_t m = start; m < probe.points.size(); ++m)
        for (std::size_t k = 1; k <= opts.window; ++k) {
          if (m + k >= probe.points.size()) break;
          if (!(d.distance(probe.points[m], probe.points[m + k]) < opts.tol))
            return false;
        }
      return true;
    };
    row.converges_d1 = converges(d1);
    row.converges_d2 = converges(d2);
    row.cauchy_d1 = cauchy(d1);
    row.cauchy_d2 = cauchy(d2);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace semifix
