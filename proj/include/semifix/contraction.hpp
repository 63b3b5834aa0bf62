#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semifix/comparison.hpp"
#include "semifix/errors.hpp"
#include "semifix/finite_space.hpp"
#include "semifix/line_space.hpp"
#include "semifix/random.hpp"
#include "semifix/selfmap.hpp"

namespace semifix {

/// A pair witnessing d(Tx,Ty) > phi(d(x,y)) on a finite space.
struct PairViolation {
  std::size_t x, y;
  double dxy;
  double d_image;
  double phi_dxy;
};

/// The same witness on a sampled continuum, identified by coordinates.
struct SampledPairViolation {
  double x, y;
  double dxy;
  double d_image;
  double phi_dxy;
};

enum class Verdict { verified, not_falsified, falsified };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::not_falsified: return "not-falsified";
    case Verdict::falsified: return "falsified";
  }
  return "?";
}

/// Outcome of a phi-contraction check. "verified" is only ever produced by
/// an exhaustive sweep with no violations; sampling can at best fail to
/// falsify.
struct ContractionCertificate {
  std::string map;
  std::string phi;
  bool exhaustive = false;
  std::size_t checked = 0;
  std::vector<PairViolation> violations;
  std::vector<SampledPairViolation> sampled_violations;
  Verdict verdict = Verdict::not_falsified;

  bool ok() const { return verdict != Verdict::falsified; }
};

namespace detail {
inline bool pair_exceeds(double lhs, double rhs, double tol) {
  return lhs > rhs + tol * std::max(1.0, rhs);
}
}  // namespace detail

/// Exhaustive check of d(Tx,Ty) <= phi(d(x,y)) over all unordered pairs
/// x != y of a finite space. Exact comparison by default.
inline ContractionCertificate verify_phi_contraction(
    const FiniteSpace& s, const FiniteMap& map, const ComparisonFn& phi,
    double tol = 0.0) {
  map.validate_for(s);
  ContractionCertificate cert;
  cert.map = "finite_map(n=" + std::to_string(map.size()) + ")";
  cert.phi = phi.describe();
  cert.exhaustive = true;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = x + 1; y < s.size(); ++y) {
      ++cert.checked;
      const double dxy = s.distance(x, y);
      const double d_image = s.distance(map(x), map(y));
      const double bound = phi(dxy);
      if (detail::pair_exceeds(d_image, bound, tol))
        cert.violations.push_back({x, y, dxy, d_image, bound});
    }
  cert.verdict = cert.violations.empty() ? Verdict::verified : Verdict::falsified;
  return cert;
}

namespace detail {
/// Draws a pair with separation stratified across decades of the sampling
/// window, then clipped into the carrier. Violations of Matkowski-style
/// bounds tend to hide at extreme separations, which uniform pair sampling
/// under-covers.
template <class RngT>
std::pair<double, double> stratified_pair(const LineSpace& s, RngT& rng) {
  const double width = s.sample_hi() - s.sample_lo();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double x = s.sample(rng);
    double y;
    if (uniform01(rng) < 0.25) {
      y = s.sample(rng);  // plain uniform component
    } else {
      const double exponent = uniform(rng, -8.0, 0.0);  // decades below width
      const double sep = width * std::pow(10.0, exponent);
      y = uniform01(rng) < 0.5 ? x + sep : x - sep;
      y = std::clamp(y, std::max(s.domain_lo(), s.sample_lo()),
                     std::min(s.domain_hi(), s.sample_hi()));
    }
    if (y != x) return {x, y};
  }
  throw Error("stratified_pair: could not draw distinct points");
}
}  // namespace detail

/// Sampled check on a continuum space: k stratified pairs. M is any
/// callable self-map of the carrier.
template <class M>
ContractionCertificate verify_phi_contraction(const LineSpace& s, const M& map,
                                              const ComparisonFn& phi,
                                              std::size_t k, Rng& rng,
                                              double tol = 1e-12) {
  ContractionCertificate cert;
  if constexpr (requires { map.describe(); })
    cert.map = map.describe();
  else
    cert.map = "callable";
  cert.phi = phi.describe();
  cert.exhaustive = false;
  for (std::size_t i = 0; i < k; ++i) {
    const auto [x, y] = detail::stratified_pair(s, rng);
    ++cert.checked;
    const double dxy = s.distance(x, y);
    const double d_image = s.distance(map(x), map(y));
    const double bound = phi(dxy);
    if (detail::pair_exceeds(d_image, bound, tol))
      cert.sampled_violations.push_back({x, y, dxy, d_image, bound});
  }
  cert.verdict = cert.sampled_violations.empty() ? Verdict::not_falsified
                                                 : Verdict::falsified;
  return cert;
}

/// max over pairs x != y of d(Tx,Ty)/d(x,y). A value < 1 certifies the map
/// as a Linear(q)-contraction with q equal to the maximum.
inline double tightest_linear_modulus(const FiniteSpace& s, const FiniteMap& map) {
  map.validate_for(s);
  double best = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = x + 1; y < s.size(); ++y)
      best = std::max(best, s.distance(map(x), map(y)) / s.distance(x, y));
  return best;
}

/// The least increasing modulus phi*(t) = max{ d(Tx,Ty) : d(x,y) <= t },
/// tabulated over attained distances, with phi*(0) = 0. The contraction
/// inequality holds for phi* by construction; whether phi* is a genuine
/// comparison function (iterates vanishing) must still be checked with
/// verify_comparison.
inline ComparisonFn tightest_comparison_envelope(const FiniteSpace& s,
                                                 const FiniteMap& map) {
  map.validate_for(s);
  const std::vector<double> grid = s.attained_distances();
  std::vector<double> values(grid.size(), 0.0);
  auto index_of = [&grid](double x) {
    return static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
  };
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = x + 1; y < s.size(); ++y) {
      const std::size_t i = index_of(s.distance(x, y));
      values[i] = std::max(values[i], s.distance(map(x), map(y)));
    }
  for (std::size_t i = 1; i < values.size(); ++i)
    values[i] = std::max(values[i], values[i - 1]);
  return ComparisonFn::tabulated(grid, values);
}

}  // namespace semifix
