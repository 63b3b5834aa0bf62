#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semifix/comparison.hpp"
#include "semifix/errors.hpp"
#include "semifix/io.hpp"
#include "semifix/selfmap.hpp"
#include "semifix/solver.hpp"
#include "semifix/space.hpp"
#include "semifix/stability.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

/// A JSON node together with its location, so every config error carries
/// the offending path ("at $.policy.eps: ...").
class ConfigView {
 public:
  ConfigView(const nlohmann::json& j, std::string path = "$")
      : j_(&j), path_(std::move(path)) {}

  const nlohmann::json& raw() const { return *j_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const {
    return j_->is_object() && j_->contains(key);
  }

  ConfigView child(const std::string& key) const {
    if (!has(key))
      throw ConfigError("at " + path_ + "." + key +
                        ": missing required field");
    return ConfigView(j_->at(key), path_ + "." + key);
  }

  ConfigView element(std::size_t i) const {
    if (!j_->is_array() || i >= j_->size()) fail("missing array element");
    return ConfigView(j_->at(i), path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t array_size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  template <class T>
  T get(const std::string& key) const {
    if (!has(key))
      throw ConfigError("at " + path_ + "." + key +
                        ": missing required field");
    try {
      return j_->at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("at " + path_ + "." + key + ": " + e.what());
    }
  }

  template <class T>
  T get_or(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return get<T>(key);
  }

  template <class T>
  T as() const {
    try {
      return j_->get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("at " + path_ + ": " + what);
  }

 private:
  const nlohmann::json* j_;
  std::string path_;
};

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    throw ConfigError("bad JSON in " + path.string() + ": " + e.what());
  }
}

/// Builtin space registry: name -> constructor over a JSON parameter
/// object. Continuum spaces accept optional domain/window overrides.
inline AnySpace make_builtin_space(const std::string& name,
                                   const ConfigView& params) {
  auto windowed = [&params](LineSpace s) {
    if (params.has("lo") || params.has("hi"))
      s = s.restricted(params.get_or<double>("lo", s.domain_lo()),
                       params.get_or<double>("hi", s.domain_hi()));
    return s;
  };
  if (name == "real_line_abs")
    return windowed(
        LineSpace::real_line(params.get_or<double>("sample_lo", -10.0),
                             params.get_or<double>("sample_hi", 10.0)));
  if (name == "real_line_power_p")
    return windowed(LineSpace::real_line_power(
        params.get<double>("p"), params.get_or<double>("sample_lo", -10.0),
        params.get_or<double>("sample_hi", 10.0)));
  if (name == "half_line_abs")
    return windowed(
        LineSpace::half_line(params.get_or<double>("sample_hi", 10.0)));
  if (name == "discrete_ultrametric")
    return discrete_ultrametric(params.get<std::size_t>("n"));
  if (name == "nonregular_family_N")
    return fan_space(params.get<std::size_t>("N"));
  if (name == "matrix_space")
    return FiniteSpace::from_matrix(
        params.get<std::vector<std::vector<double>>>("matrix"),
        params.get_or<double>("tol", 0.0));
  params.fail("unknown builtin space \"" + name + "\"");
}

/// Space spec: {"builtin": name, "params": {...}} or an inline/loaded
/// matrix ({"matrix": [[...]]}, {"csv": path}, {"json": path}). Referenced
/// files must exist at load.
inline AnySpace parse_space(const ConfigView& spec) {
  if (spec.has("builtin")) {
    const nlohmann::json empty = nlohmann::json::object();
    if (spec.has("params"))
      return make_builtin_space(spec.get<std::string>("builtin"),
                                spec.child("params"));
    return make_builtin_space(spec.get<std::string>("builtin"),
                              ConfigView(empty, spec.path() + ".params"));
  }
  if (spec.has("matrix"))
    return FiniteSpace::from_matrix(
        spec.get<std::vector<std::vector<double>>>("matrix"),
        spec.get_or<double>("tol", 0.0));
  for (const char* key : {"csv", "json"}) {
    if (!spec.has(key)) continue;
    const auto path = spec.get<std::string>(key);
    if (!std::filesystem::exists(path))
      spec.fail("referenced file does not exist: " + path);
    return load_finite_space(path, spec.get_or<double>("tol", 0.0));
  }
  spec.fail("expected \"builtin\", \"matrix\", \"csv\" or \"json\"");
}

/// {"variant": "linear"|"rational_decay"|"tabulated"|"compose"|"power", ...}
inline ComparisonFn parse_phi(const ConfigView& spec) {
  const auto variant = spec.get<std::string>("variant");
  if (variant == "linear") return ComparisonFn::linear(spec.get<double>("q"));
  if (variant == "rational_decay")
    return ComparisonFn::rational_decay(spec.get<double>("a"));
  if (variant == "tabulated")
    return ComparisonFn::tabulated(spec.get<std::vector<double>>("t"),
                                   spec.get<std::vector<double>>("phi"));
  if (variant == "compose") {
    auto stages = spec.child("stages");
    if (stages.array_size() == 0) stages.fail("empty composition");
    ComparisonFn fn = parse_phi(stages.element(0));
    for (std::size_t i = 1; i < stages.array_size(); ++i)
      fn = fn.then(parse_phi(stages.element(i)));
    return fn;
  }
  if (variant == "power")
    return parse_phi(spec.child("base")).power(spec.get<int>("k"));
  spec.fail("unknown comparison-function variant \"" + variant + "\"");
}

/// {"variant": "sum"|"max"|"c_relaxed"|"c_inframetric"|"pth_order"|"tabulated"}
inline TriangleForm parse_form(const ConfigView& spec) {
  const auto variant = spec.get<std::string>("variant");
  if (variant == "sum") return TriangleForm::sum();
  if (variant == "max") return TriangleForm::max_form();
  if (variant == "c_relaxed")
    return TriangleForm::c_relaxed(spec.get<double>("c"));
  if (variant == "c_inframetric")
    return TriangleForm::c_inframetric(spec.get<double>("c"));
  if (variant == "pth_order")
    return TriangleForm::pth_order(spec.get<double>("p"));
  if (variant == "tabulated") {
    const auto grid = spec.get<std::vector<double>>("grid");
    const auto raw = spec.get<std::vector<std::vector<double>>>("value");
    std::vector<std::vector<ExtReal>> value(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      value[i].assign(raw[i].begin(), raw[i].end());
    return TriangleForm::tabulated(grid, value);
  }
  spec.fail("unknown triangle-form variant \"" + variant + "\"");
}

inline FiniteMap parse_finite_map(const ConfigView& spec) {
  if (spec.has("image")) return FiniteMap{spec.get<std::vector<std::size_t>>("image")};
  spec.fail("finite map needs an \"image\" index array");
}

inline Map1D parse_map1d(const ConfigView& spec) {
  const auto variant = spec.get<std::string>("variant");
  if (variant == "affine")
    return Map1D(Affine1D{spec.get<double>("alpha"), spec.get<double>("beta")});
  if (variant == "rational")
    return Map1D(Rational1D{spec.get_or<double>("shift", 0.0)});
  spec.fail("unknown 1d map variant \"" + variant + "\"");
}

/// Policy spec. theory_guided takes a triangle form and a phi inline:
/// {"variant": "theory_guided", "eps": 1e-3, "form": {...}, "phi": {...}}.
/// The special form {"variant": "basic_table"} resolves to the exact
/// basic-triangle table of the (finite) space being solved.
inline StopPolicy parse_policy(const ConfigView& spec, const AnySpace& space) {
  const auto variant = spec.get<std::string>("variant");
  const auto cap = spec.get_or<std::uint64_t>("max_iter", 1000000);
  if (variant == "exact_finite") return StopPolicy::exact_finite(cap);
  if (variant == "window_cauchy")
    return StopPolicy::window_cauchy(spec.get_or<double>("eps", 1e-9),
                                     spec.get_or<std::size_t>("window", 3), cap);
  if (variant == "theory_guided") {
    auto form_spec = spec.child("form");
    TriangleForm form = [&] {
      if (form_spec.get<std::string>("variant") == "basic_table") {
        if (!is_finite_space(space))
          form_spec.fail("basic_table form requires a finite space");
        return basic_triangle_table(std::get<FiniteSpace>(space)).as_form();
      }
      return parse_form(form_spec);
    }();
    return StopPolicy::theory_guided(spec.get<double>("eps"), std::move(form),
                                     parse_phi(spec.child("phi")), cap);
  }
  spec.fail("unknown stop-policy variant \"" + variant + "\"");
}

/// Named map families for stability experiments.
inline MapSequence<Map1D> parse_map_family_1d(const ConfigView& spec) {
  const auto family = spec.get<std::string>("family");
  if (family == "affine_shift_inv_n") {
    const double alpha = spec.get<double>("alpha");
    const double beta0 = spec.get<double>("beta0");
    const double beta_limit = spec.get_or<double>("beta_limit", 0.0);
    return {[alpha, beta0, beta_limit](long n) {
              return Map1D(Affine1D{alpha, beta_limit + beta0 / double(n)});
            },
            Map1D(Affine1D{alpha, beta_limit}), parse_phi(spec.child("phi"))};
  }
  if (family == "rational_shift_inv_n2") {
    const double shift0 = spec.get<double>("shift0");
    return {[shift0](long n) {
              return Map1D(Rational1D{shift0 / double(n * n)});
            },
            Map1D(Rational1D{}), parse_phi(spec.child("phi"))};
  }
  spec.fail("unknown 1d map family \"" + family + "\"");
}

inline MapSequence<FiniteMap> parse_map_family_finite(const ConfigView& spec) {
  const auto family = spec.get<std::string>("family");
  if (family == "finite_switch") {
    const FiniteMap before = parse_finite_map(spec.child("before"));
    const FiniteMap after = parse_finite_map(spec.child("after"));
    const long switch_at = spec.get<long>("switch_at");
    return {[before, after, switch_at](long n) {
              return n < switch_at ? before : after;
            },
            after, parse_phi(spec.child("phi"))};
  }
  spec.fail("unknown finite map family \"" + family + "\"");
}

}  // namespace semifix
