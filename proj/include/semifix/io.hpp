#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semifix/equivalence.hpp"
#include "semifix/errors.hpp"
#include "semifix/finite_space.hpp"
#include "semifix/solver.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

/// Shortest round-trip formatting; stable across runs for deterministic
/// output files.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_ext(const ExtReal& v) { return v.str(); }

/// n x n numeric matrix, comma-separated, no header.
inline std::vector<std::vector<double>> load_matrix_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ConfigError("bad numeric cell '" + cell + "' in " + path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("empty matrix file: " + path.string());
  return rows;
}

/// {"n": int, "matrix": [[...]]}.
inline std::vector<std::vector<double>> load_matrix_json(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("bad JSON in " + path.string() + ": " + e.what());
  }
  if (!j.contains("n") || !j.contains("matrix"))
    throw ConfigError(path.string() + ": expected fields \"n\" and \"matrix\"");
  const auto n = j.at("n").get<std::size_t>();
  auto m = j.at("matrix").get<std::vector<std::vector<double>>>();
  if (m.size() != n)
    throw ShapeError(path.string() + ": matrix size does not match n");
  return m;
}

inline FiniteSpace load_finite_space(const std::filesystem::path& path,
                                     double tol = 0.0) {
  const auto ext = path.extension().string();
  const auto m =
      ext == ".json" ? load_matrix_json(path) : load_matrix_csv(path);
  return FiniteSpace::from_matrix(m, tol);
}

namespace detail {
inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  return out;
}
}  // namespace detail

/// Columns (u, v, phi).
inline void write_phi_table_csv(const std::filesystem::path& path,
                                const BasicTriangleTable& table) {
  auto out = detail::open_out(path);
  out << "u,v,phi\n";
  for (double u : table.grid())
    for (double v : table.grid())
      out << fmt_double(u) << ',' << fmt_double(v) << ','
          << fmt_double(table.entry(u, v)) << '\n';
}

/// Columns (r, value, exactness_flag) for ball-diameter curves and
/// (t, L, exactness_flag) for modulus curves.
inline void write_curve_csv(const std::filesystem::path& path,
                            const DiagnosticCurve& curve) {
  auto out = detail::open_out(path);
  out << (curve.meaning == DiagnosticCurve::Meaning::ball_diameter
              ? "r,value,exactness_flag\n"
              : "t,L,exactness_flag\n");
  const char* flag = curve.exact ? "exact" : "lower_bound";
  for (const auto& s : curve.samples)
    out << fmt_double(s.param) << ',' << fmt_ext(s.value) << ',' << flag
        << '\n';
}

/// Columns (n, residual), one row per retained iterate.
template <class P>
void write_trace_csv(const std::filesystem::path& path,
                     const SolveTrace<P>& trace) {
  auto out = detail::open_out(path);
  out << "n,residual\n";
  for (const auto& step : trace.retained)
    out << step.n << ',' << fmt_double(step.residual) << '\n';
}

/// Columns (t, L).
inline void write_modulus_csv(const std::filesystem::path& path,
                              const LipschitzTable& table) {
  auto out = detail::open_out(path);
  out << "t,L\n";
  for (std::size_t i = 0; i < table.grid().size(); ++i)
    out << fmt_double(table.grid()[i]) << ',' << fmt_double(table.values()[i])
        << '\n';
}

inline void write_json(const std::filesystem::path& path,
                       const nlohmann::json& j) {
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace semifix
