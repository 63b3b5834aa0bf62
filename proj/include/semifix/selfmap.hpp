#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "semifix/errors.hpp"
#include "semifix/finite_space.hpp"

namespace semifix {

/// Self-map of a finite space: an index array, T(i) = image[i].
struct FiniteMap {
  std::vector<std::size_t> image;

  std::size_t operator()(std::size_t i) const { return image[i]; }
  std::size_t size() const { return image.size(); }

  /// Every entry must land back in the carrier.
  void validate_for(const FiniteSpace& s) const {
    if (image.size() != s.size())
      throw ShapeError("FiniteMap: image length " + std::to_string(image.size()) +
                       " does not match carrier size " + std::to_string(s.size()));
    for (std::size_t v : image)
      if (v >= s.size())
        throw ConfigError("FiniteMap: image index " + std::to_string(v) +
                          " outside carrier");
  }

  static FiniteMap identity(std::size_t n) {
    FiniteMap m;
    m.image.resize(n);
    for (std::size_t i = 0; i < n; ++i) m.image[i] = i;
    return m;
  }

  static FiniteMap constant(std::size_t n, std::size_t target) {
    if (target >= n) throw ConfigError("FiniteMap: constant target outside carrier");
    FiniteMap m;
    m.image.assign(n, target);
    return m;
  }
};

/// x -> alpha*x + beta on the real line.
struct Affine1D {
  double alpha = 0.0;
  double beta = 0.0;
  double operator()(double x) const { return alpha * x + beta; }
};

/// x -> x/(1+x) + shift on the nonnegative half-line, clipped to stay
/// there. The canonical Matkowski example: a RationalDecay(1)-contraction
/// whose Picard iterates converge sub-geometrically.
struct Rational1D {
  double shift = 0.0;
  double operator()(double x) const {
    return std::max(0.0, x / (1.0 + x) + shift);
  }
};

/// Runtime-selected one-dimensional self-map for the config-driven layer.
class Map1D {
 public:
  using Variant = std::variant<Affine1D, Rational1D>;

  Map1D(Affine1D m) : m_(m) {}      // NOLINT: implicit by design
  Map1D(Rational1D m) : m_(m) {}    // NOLINT

  double operator()(double x) const {
    return std::visit([x](const auto& m) { return m(x); }, m_);
  }

  const Variant& variant() const { return m_; }

  std::string describe() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Affine1D>)
            return "affine(alpha=" + std::to_string(m.alpha) +
                   ", beta=" + std::to_string(m.beta) + ")";
          if constexpr (std::is_same_v<T, Rational1D>)
            return "rational(shift=" + std::to_string(m.shift) + ")";
        },
        m_);
  }

 private:
  Variant m_;
};

}  // namespace semifix
