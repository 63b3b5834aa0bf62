#pragma once

#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semifix/comparison.hpp"
#include "semifix/errors.hpp"
#include "semifix/space.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

/// Stop when the current point is exactly fixed, d(x, Tx) = 0. Intended
/// for finite spaces, where equality is decidable.
struct ExactFinite {};

/// Stop when d(x_n, x_{n+k}) < eps_stop for all k = 1..window. A window
/// of length K approximates the Cauchy property; a single-step residual
/// (K = 1) is a weak criterion for sub-geometric contractions.
struct WindowCauchy {
  double eps_stop = 1e-9;
  std::size_t window = 3;
};

/// The stopping rule extracted from the fixed-point theorem's proof.
///
/// Given a target eps, a triangle function Phi for the space and the
/// contraction modulus phi, the solver computes delta = the largest value
/// with Phi(delta, delta) < eps (binary search) and n = the smallest index
/// with phi^n(eps) < delta. Once the orbit satisfies
///     d(x_m, x_{m + n + k}) < delta   for k = 1..n,
/// every later iterate remains inside B(x_m, eps): the composed maps send
/// that ball into itself. The solver reports x_m and additionally requires
/// all pairwise distances inside the detection window to be below eps.
///
/// eps is a heuristic proximity target against later iterates, not a
/// certified distance to the fixed point.
struct TheoryGuided {
  double eps;
  TriangleForm triangle;
  ComparisonFn phi;
};

/// One stopping criterion plus the always-present iteration cap.
struct StopPolicy {
  std::variant<ExactFinite, WindowCauchy, TheoryGuided> criterion =
      WindowCauchy{};
  std::uint64_t max_iter = 1000000;

  static StopPolicy exact_finite(std::uint64_t cap = 1000000) {
    return {ExactFinite{}, cap};
  }
  static StopPolicy window_cauchy(double eps, std::size_t window = 3,
                                  std::uint64_t cap = 1000000) {
    if (!(eps > 0.0)) throw ConfigError("WindowCauchy: eps_stop must be > 0");
    if (window < 1) throw ConfigError("WindowCauchy: window must be >= 1");
    return {WindowCauchy{eps, window}, cap};
  }
  static StopPolicy theory_guided(double eps, TriangleForm triangle,
                                  ComparisonFn phi,
                                  std::uint64_t cap = 1000000) {
    if (!(eps > 0.0)) throw ConfigError("TheoryGuided: eps must be > 0");
    return {TheoryGuided{eps, std::move(triangle), std::move(phi)}, cap};
  }
};

enum class StopReason { converged, cap };

inline std::string to_string(StopReason r) {
  return r == StopReason::converged ? "converged" : "cap";
}

/// Derived quantities of a theory-guided stop, kept for reporting.
struct TheoryGuidedInfo {
  double delta = 0.0;
  long n_eps = 0;
  std::uint64_t window_start = 0;      // index m of the certified center
  double window_max_pairwise = 0.0;    // over the detection window
};

template <class P>
struct SolveStep {
  std::uint64_t n;
  P x;
  double residual;  // d(x_n, x_{n+1})
};

/// Orbit summary. Full trace below 10^4 steps; beyond that geometric
/// thinning retains every 2^j-th index, so memory stays bounded on
/// sub-geometric runs.
template <class P>
struct SolveTrace {
  std::vector<SolveStep<P>> retained;
  StopReason reason = StopReason::cap;
  std::uint64_t iterations = 0;  // applications of the map performed
  P final_point{};
  double final_residual = 0.0;  // d(final, T(final))
  std::optional<TheoryGuidedInfo> theory;
};

namespace detail {

inline bool retain_index(std::uint64_t i) {
  if (i < 10000) return true;
  const std::uint64_t stride = 2 * std::bit_floor(i / 10000);
  return i % stride == 0;
}

/// Largest delta with Phi(delta, delta) < eps, located by bisection; the
/// proof only asserts existence, the search realizes it. Throws when no
/// positive delta works (the space's triangle function is not small near
/// the origin, i.e. regularity fails at this scale).
inline double largest_delta(const TriangleForm& triangle, double eps) {
  auto ok = [&](double d) { return triangle(d, d) < ExtReal(eps); };
  double lo = 0.0;
  double hi = eps;
  while (ok(hi) && hi < 1e12) hi *= 2.0;
  if (!ok(eps * 1e-9) && !ok(0.0))
    throw ConfigError("TheoryGuided: Phi(0,0) >= eps, no usable delta");
  if (!ok(eps * 1e-9)) {
    // Positive deltas all fail: the form blows up at the origin.
    throw ConfigError(
        "TheoryGuided: no positive delta with Phi(delta,delta) < eps; "
        "the space is not regular at scale eps");
  }
  lo = eps * 1e-9;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;  // ok(lo) holds throughout
}

}  // namespace detail

/// Picard iteration x_{n+1} = T x_n from a start point until the policy
/// fires or the cap is reached. Hitting the cap is a reported outcome,
/// never an exception: the theorems' hypotheses are user-declared and may
/// simply fail for the supplied data.
template <class S, class M, class P>
  requires SpaceOver<S, P>
SolveTrace<P> picard_solve(const S& space, const M& map, P start,
                           const StopPolicy& policy) {
  if (policy.max_iter < 1) throw ConfigError("picard_solve: cap must be >= 1");

  SolveTrace<P> trace;
  std::deque<P> window;
  std::size_t window_cap = 0;

  double delta = 0.0;
  long n_eps = 0;
  const auto* theory = std::get_if<TheoryGuided>(&policy.criterion);
  if (theory) {
    delta = detail::largest_delta(theory->triangle, theory->eps);
    const auto ne = n_epsilon(theory->phi, theory->eps, delta,
                              static_cast<long>(policy.max_iter));
    if (!ne.found)
      throw ConfigError(
          "TheoryGuided: phi^n(eps) did not drop below delta within the cap; "
          "phi may not be a comparison function or decays too slowly");
    n_eps = ne.n;
    window_cap = static_cast<std::size_t>(2 * n_eps + 1);
  } else if (const auto* wc = std::get_if<WindowCauchy>(&policy.criterion)) {
    window_cap = wc->window + 1;
  }

  P x = start;
  std::uint64_t i = 0;
  while (true) {
    const P x_next = map(x);
    const double residual = space.distance(x, x_next);
    if (detail::retain_index(i)) trace.retained.push_back({i, x, residual});

    if (window_cap > 0) {
      window.push_back(x);
      if (window.size() > window_cap) window.pop_front();
    }

    bool stop = false;
    if (std::holds_alternative<ExactFinite>(policy.criterion)) {
      if (residual == 0.0) {
        trace.final_point = x;
        trace.final_residual = 0.0;
        stop = true;
      }
    } else if (const auto* wc = std::get_if<WindowCauchy>(&policy.criterion)) {
      if (window.size() == window_cap) {
        bool all = true;
        for (std::size_t k = 1; k <= wc->window && all; ++k)
          all = space.distance(window.front(), window[k]) < wc->eps_stop;
        if (all) {
          trace.final_point = x;
          trace.final_residual = residual;
          stop = true;
        }
      }
    } else if (theory) {
      // Gate on the cheap single-step residual before the full window scan.
      if (window.size() == window_cap && residual < delta) {
        const std::size_t n = static_cast<std::size_t>(n_eps);
        bool all = true;
        for (std::size_t k = 1; k <= n && all; ++k)
          all = space.distance(window.front(), window[n + k]) < delta;
        if (all) {
          double max_pairwise = 0.0;
          for (std::size_t a = 0; a < window.size() && all; ++a)
            for (std::size_t b = a + 1; b < window.size(); ++b) {
              max_pairwise =
                  std::max(max_pairwise, space.distance(window[a], window[b]));
              if (!(max_pairwise < theory->eps)) {
                all = false;
                break;
              }
            }
          if (all) {
            trace.final_point = window.front();
            trace.final_residual =
                space.distance(window.front(), map(window.front()));
            trace.theory = TheoryGuidedInfo{
                delta, n_eps, i - (window_cap - 1), max_pairwise};
            stop = true;
          }
        }
      }
    }

    if (stop) {
      trace.reason = StopReason::converged;
      trace.iterations = i;
      break;
    }
    if (i + 1 >= policy.max_iter) {
      trace.reason = StopReason::cap;
      trace.iterations = i + 1;
      trace.final_point = x_next;
      trace.final_residual = space.distance(x_next, map(x_next));
      break;
    }
    x = x_next;
    ++i;
  }

  if (trace.retained.empty() || trace.retained.back().n != trace.iterations)
    trace.retained.push_back(
        {trace.iterations, trace.final_point, trace.final_residual});
  return trace;
}

/// d(x, Tx).
template <class S, class M, class P>
  requires SpaceOver<S, P>
double fixed_point_residual(const S& space, const M& map, const P& x) {
  return space.distance(x, map(x));
}

/// Outcome of solving from several starts. For a phi-contraction on a
/// complete regular space all runs must agree; a positive max pairwise
/// distance with converged runs is a symptom of a non-contraction.
template <class P>
struct UniquenessReport {
  std::vector<SolveTrace<P>> runs;
  double max_pairwise = 0.0;
  bool inconclusive = false;  // some run hit the cap
};

template <class S, class M, class P>
  requires SpaceOver<S, P>
UniquenessReport<P> uniqueness_probe(const S& space, const M& map,
                                     const std::vector<P>& starts,
                                     const StopPolicy& policy) {
  if (starts.size() < 2)
    throw PreconditionError("uniqueness_probe: need at least 2 starts");
  UniquenessReport<P> report;
  for (const P& s : starts)
    report.runs.push_back(picard_solve(space, map, s, policy));
  for (std::size_t a = 0; a < report.runs.size(); ++a) {
    if (report.runs[a].reason == StopReason::cap) report.inconclusive = true;
    for (std::size_t b = a + 1; b < report.runs.size(); ++b)
      report.max_pairwise =
          std::max(report.max_pairwise,
                   space.distance(report.runs[a].final_point,
                                  report.runs[b].final_point));
  }
  return report;
}

/// Checks the proof's residual majorization d(x_n, x_{n+1}) <= phi^n(d(x_0,
/// x_1)) + slack at every retained index. Iterates phi alongside the
/// retained indices, so it also works on thinned traces.
template <class P>
struct MajorizationViolation {
  std::uint64_t n;
  double residual;
  double bound;
};

template <class P>
std::vector<MajorizationViolation<P>> check_residual_majorization(
    const SolveTrace<P>& trace, const ComparisonFn& phi, double slack = 1e-12) {
  std::vector<MajorizationViolation<P>> out;
  if (trace.retained.empty()) return out;
  double bound = trace.retained.front().residual;  // phi^0(d(x_0, x_1))
  std::uint64_t k = 0;
  for (const auto& step : trace.retained) {
    while (k < step.n) {
      bound = phi(bound);
      ++k;
    }
    if (step.residual > bound + slack)
      out.push_back({step.n, step.residual, bound});
  }
  return out;
}

}  // namespace semifix
