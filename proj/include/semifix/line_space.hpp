#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "semifix/errors.hpp"
#include "semifix/random.hpp"

namespace semifix {

/// Declared completeness metadata. The library never certifies completeness
/// of a user-supplied space; it only carries the declaration through to
/// reports.
enum class Completeness { complete, unknown };

/// A one-dimensional continuum semimetric space: an interval of the real
/// line with distance |x-y| or |x-y|^p. Suprema over such spaces are not
/// computable; all sweeps go through finite samples drawn from a bounded
/// sampling window, and results are labeled as lower bounds.
class LineSpace {
 public:
  using point_type = double;

  enum class Kind { abs_diff, power };

  /// d(x,y) = |x-y| on the whole line (a complete metric).
  static LineSpace real_line(double sample_lo = -10.0,
                             double sample_hi = 10.0) {
    return LineSpace(Kind::abs_diff, 1.0,
                     -std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity(), sample_lo,
                     sample_hi, Completeness::complete, "real_line_abs");
  }

  /// d(x,y) = |x-y|^p, p > 0. For p > 1 this is a 2^(p-1)-relaxed
  /// semimetric, not a metric.
  static LineSpace real_line_power(double p, double sample_lo = -10.0,
                                   double sample_hi = 10.0) {
    if (!(p > 0.0))
      throw ConfigError("real_line_power_p: p must be > 0, got " +
                        std::to_string(p));
    return LineSpace(Kind::power, p, -std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity(), sample_lo,
                     sample_hi, Completeness::complete, "real_line_power_p");
  }

  /// d(x,y) = |x-y| on [0, inf).
  static LineSpace half_line(double sample_hi = 10.0) {
    return LineSpace(Kind::abs_diff, 1.0, 0.0,
                     std::numeric_limits<double>::infinity(), 0.0, sample_hi,
                     Completeness::complete, "half_line_abs");
  }

  double distance(double x, double y) const {
    const double a = std::abs(x - y);
    return kind_ == Kind::abs_diff ? a : std::pow(a, p_);
  }

  bool contains(double x) const { return x >= lo_ && x <= hi_; }

  /// Uniform draw from the sampling window.
  double sample(Rng& rng) const { return uniform(rng, sample_lo_, sample_hi_); }

  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  double sample_lo() const { return sample_lo_; }
  double sample_hi() const { return sample_hi_; }
  Kind kind() const { return kind_; }
  double power() const { return p_; }
  Completeness completeness() const { return completeness_; }
  const std::string& name() const { return name_; }

  /// Restrict the carrier (and the sampling window) to [lo, hi].
  LineSpace restricted(double lo, double hi) const {
    LineSpace s = *this;
    if (!(lo < hi)) throw ConfigError("LineSpace: empty domain restriction");
    s.lo_ = lo;
    s.hi_ = hi;
    s.sample_lo_ = std::max(sample_lo_, lo);
    s.sample_hi_ = std::min(sample_hi_, hi);
    if (!(s.sample_lo_ < s.sample_hi_))
      throw ConfigError("LineSpace: empty sampling window after restriction");
    return s;
  }

 private:
  LineSpace(Kind kind, double p, double lo, double hi, double sample_lo,
            double sample_hi, Completeness c, std::string name)
      : kind_(kind),
        p_(p),
        lo_(lo),
        hi_(hi),
        sample_lo_(sample_lo),
        sample_hi_(sample_hi),
        completeness_(c),
        name_(std::move(name)) {
    if (!(sample_lo_ < sample_hi_))
      throw ConfigError("LineSpace: sampling window must be nonempty");
  }

  Kind kind_;
  double p_;
  double lo_, hi_;              // carrier interval
  double sample_lo_, sample_hi_;  // bounded window for sampling
  Completeness completeness_;
  std::string name_;
};

}  // namespace semifix
