#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <string>

#include "semifix/errors.hpp"

namespace semifix {

/// Extended nonnegative real: a finite value >= 0 or +infinity.
///
/// Infinity is carried as an explicit state, never as a sentinel float,
/// and absorbs under addition, scaling and max. Comparisons are total.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  ExtReal(double v) {  // NOLINT: implicit by design, distances convert freely
    if (std::isnan(v)) throw Error("ExtReal: NaN is not a value");
    if (v < 0.0) throw Error("ExtReal: negative value " + std::to_string(v));
    if (std::isinf(v)) {
      inf_ = true;
    } else {
      v_ = v;
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.inf_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !inf_; }
  constexpr bool is_infinite() const { return inf_; }

  /// Finite payload. Calling this on +infinity is an error.
  constexpr double value() const {
    if (inf_) throw Error("ExtReal: value() on +infinity");
    return v_;
  }

  /// Finite payload, or +inf as an IEEE double (for reporting only).
  double as_double() const {
    return inf_ ? std::numeric_limits<double>::infinity() : v_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
  }

  friend constexpr std::partial_ordering operator<=>(const ExtReal& a,
                                                     const ExtReal& b) {
    if (a.inf_ && b.inf_) return std::partial_ordering::equivalent;
    if (a.inf_) return std::partial_ordering::greater;
    if (b.inf_) return std::partial_ordering::less;
    return a.v_ <=> b.v_;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtReal(a.v_ + b.v_);
  }

  /// Scale by a positive finite factor; infinity absorbs.
  friend ExtReal operator*(double c, const ExtReal& x) {
    if (c < 0.0 || std::isnan(c) || std::isinf(c))
      throw Error("ExtReal: scale factor must be finite and nonnegative");
    if (x.inf_) return infinity();
    return ExtReal(c * x.v_);
  }

  friend ExtReal max(const ExtReal& a, const ExtReal& b) {
    return b > a ? b : a;
  }

  std::string str() const {
    if (inf_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v_);
    return buf;
  }

 private:
  double v_ = 0.0;
  bool inf_ = false;
};

}  // namespace semifix
