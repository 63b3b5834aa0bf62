// semifix: config-driven experiments on semimetric spaces.
//
// Subcommands mirror the library: validate, phi-table, regularity,
// contraction-check, solve, uniqueness, equivalence, stability, and a
// suite runner with fixed presets. Every command reads one JSON config,
// writes CSV/JSON artifacts into an output directory and encodes its
// outcome in the exit status:
//   0  all checks passed / converged
//   1  a falsification or non-convergence was found
//   2  configuration error

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "semifix/semifix.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace semifix;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;  // empty: from config, else "out"
  std::int64_t seed = -1;  // -1: from config, else 0
  bool quiet = false;
};

void say(const Options& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << '\n';
}

json violation_to_json(const AxiomViolation& v) {
  const char* kind = nullptr;
  switch (v.kind) {
    case AxiomViolation::Kind::asymmetry: kind = "asymmetry"; break;
    case AxiomViolation::Kind::nonzero_diagonal: kind = "nonzero_diagonal"; break;
    case AxiomViolation::Kind::vanishing_off_diagonal:
      kind = "vanishing_off_diagonal";
      break;
  }
  return {{"kind", kind}, {"i", v.i}, {"j", v.j}, {"value", v.value}};
}

json certificate_to_json(const ContractionCertificate& cert,
                         std::size_t max_witnesses = 32) {
  json out{{"map", cert.map},
           {"phi", cert.phi},
           {"mode", cert.exhaustive ? "exhaustive" : "sample"},
           {"checked", cert.checked},
           {"verdict", to_string(cert.verdict)}};
  json witnesses = json::array();
  for (const auto& v : cert.violations) {
    if (witnesses.size() >= max_witnesses) break;
    witnesses.push_back({{"x", v.x},
                         {"y", v.y},
                         {"dxy", v.dxy},
                         {"d_image", v.d_image},
                         {"phi_dxy", v.phi_dxy}});
  }
  for (const auto& v : cert.sampled_violations) {
    if (witnesses.size() >= max_witnesses) break;
    witnesses.push_back({{"x", v.x},
                         {"y", v.y},
                         {"dxy", v.dxy},
                         {"d_image", v.d_image},
                         {"phi_dxy", v.phi_dxy}});
  }
  out["violations"] = witnesses;
  out["violation_count"] =
      cert.violations.size() + cert.sampled_violations.size();
  return out;
}

template <class P>
json trace_to_json(const SolveTrace<P>& trace) {
  json out{{"final_point", trace.final_point},
           {"stop_reason", to_string(trace.reason)},
           {"iterations", trace.iterations},
           {"final_residual", trace.final_residual},
           {"retained_steps", trace.retained.size()}};
  if (trace.theory) {
    out["theory_guided"] = {{"delta", trace.theory->delta},
                            {"n_eps", trace.theory->n_eps},
                            {"window_start", trace.theory->window_start},
                            {"window_max_pairwise",
                             trace.theory->window_max_pairwise}};
  }
  return out;
}

json curve_to_json(const DiagnosticCurve& curve) {
  json samples = json::array();
  for (const auto& s : curve.samples)
    samples.push_back({{"param", s.param},
                       {"value", s.value.is_finite()
                                     ? json(s.value.value())
                                     : json("inf")}});
  return {{"samples", samples}, {"exact", curve.exact}};
}

template <class P>
void write_stability_csv(const fs::path& path,
                         const StabilityReport<P>& report) {
  std::ofstream out(path);
  out << "n,x_n,distance\n";
  for (const auto& row : report.rows) {
    out << row.n << ',';
    if constexpr (std::is_same_v<P, std::size_t>)
      out << row.member_fixed_point;
    else
      out << fmt_double(row.member_fixed_point);
    out << ',' << fmt_double(row.distance) << '\n';
  }
}

// ---------------------------------------------------------------------------
// commands

int cmd_validate(const ConfigView& cfg, const fs::path& out, Rng& rng,
                 const Options& opt) {
  const auto spec = cfg.child("space");
  const double tol = cfg.get_or<double>("tol", 0.0);
  json report;
  bool ok = true;
  // Explicit matrices are validated raw, so the report can list axiom
  // violations instead of aborting at space construction.
  std::optional<std::vector<std::vector<double>>> matrix;
  if (spec.has("matrix"))
    matrix = spec.get<std::vector<std::vector<double>>>("matrix");
  else if (spec.has("csv") || spec.has("json")) {
    const char* key = spec.has("csv") ? "csv" : "json";
    const auto path = spec.get<std::string>(key);
    if (!std::filesystem::exists(path))
      spec.fail("referenced file does not exist: " + path);
    matrix = spec.has("csv") ? load_matrix_csv(path) : load_matrix_json(path);
  }
  if (matrix) {
    const auto violations = validate_semimetric(*matrix, tol);
    ok = violations.empty();
    report["n"] = matrix->size();
    report["mode"] = "exact";
    json items = json::array();
    for (const auto& v : violations) items.push_back(violation_to_json(v));
    report["violations"] = items;
  } else if (const AnySpace space = parse_space(spec); is_finite_space(space)) {
    const auto violations =
        validate_semimetric(std::get<FiniteSpace>(space).matrix(), tol);
    ok = violations.empty();
    report["n"] = std::get<FiniteSpace>(space).size();
    report["mode"] = "exact";
    json items = json::array();
    for (const auto& v : violations) items.push_back(violation_to_json(v));
    report["violations"] = items;
  } else {
    const auto& s = std::get<LineSpace>(space);
    const double float_tol = cfg.get_or<double>("tol", 1e-12);
    const auto samples = cfg.get_or<std::size_t>("samples", 10000);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double x = s.sample(rng), y = s.sample(rng);
      const double dxy = s.distance(x, y), dyx = s.distance(y, x);
      if (std::abs(dxy - dyx) > float_tol || dxy < 0.0 ||
          s.distance(x, x) > float_tol || (x != y && dxy == 0.0))
        ++bad;
    }
    ok = bad == 0;
    report["mode"] = "sampled";
    report["samples"] = samples;
    report["violations_found"] = bad;
  }
  report["ok"] = ok;
  write_json(out / "validate.json", report);
  say(opt, std::string("validate: ") + (ok ? "ok" : "violations found"));
  return ok ? 0 : 1;
}

int cmd_phi_table(const ConfigView& cfg, const fs::path& out, Rng&,
                  const Options& opt) {
  const AnySpace space = parse_space(cfg.child("space"));
  if (!is_finite_space(space))
    throw ModeError("phi-table: exact tabulation needs a finite space");
  const auto& s = std::get<FiniteSpace>(space);
  const auto table = basic_triangle_table(s);
  write_phi_table_csv(out / "phi_table.csv", table);
  const auto violations = verify_triangle_exhaustive(s, table.as_form());
  json report{{"n", s.size()},
              {"grid_size", table.grid().size()},
              {"diameter", s.diameter()},
              {"verified_as_triangle_function", violations.empty()},
              {"note",
               "entries are maxima over witness triples; (p,p,p) always "
               "qualifies, so values are defined (0) below the smallest "
               "positive attained distance"}};
  write_json(out / "phi_table.json", report);
  say(opt, "phi-table: " + std::to_string(table.grid().size()) + " grid values");
  return violations.empty() ? 0 : 1;
}

int cmd_regularity(const ConfigView& cfg, const fs::path& out, Rng& rng,
                   const Options& opt) {
  const AnySpace space = parse_space(cfg.child("space"));
  const auto radii = cfg.get<std::vector<double>>("radii");
  const DiagnosticCurve curve =
      is_finite_space(space)
          ? regularity_diagnostic(std::get<FiniteSpace>(space), radii)
          : regularity_diagnostic(std::get<LineSpace>(space), radii,
                                  cfg.get_or<std::size_t>("samples", 256), rng);
  write_curve_csv(out / "regularity.csv", curve);

  json report = curve_to_json(curve);
  int rc = 0;
  if (cfg.get_or<bool>("require_regular", false)) {
    // Values sorted by increasing radius; a regular space decays toward 0
    // as r shrinks, so test the reversed column.
    std::vector<double> descending;
    for (auto it = curve.samples.rbegin(); it != curve.samples.rend(); ++it)
      descending.push_back(it->value.is_finite() ? it->value.value() : 1e308);
    TrendOptions trend{cfg.get_or<double>("trend_frac", 0.1),
                       cfg.get_or<double>("trend_abs_tol", 1e-3)};
    const bool pass = trend_to_zero(descending, trend);
    report["regularity_trend_pass"] = pass;
    rc = pass ? 0 : 1;
  }
  write_json(out / "regularity.json", report);
  say(opt, "regularity: " + std::to_string(curve.samples.size()) + " radii");
  return rc;
}

int cmd_contraction_check(const ConfigView& cfg, const fs::path& out, Rng& rng,
                          const Options& opt) {
  const AnySpace space = parse_space(cfg.child("space"));
  const ComparisonFn phi = parse_phi(cfg.child("phi"));
  const auto samples = cfg.get_or<std::size_t>("samples", 10000);
  ContractionCertificate cert;
  if (is_finite_space(space)) {
    const auto& s = std::get<FiniteSpace>(space);
    const FiniteMap map = parse_finite_map(cfg.child("map"));
    const auto mode = cfg.get_or<std::string>("mode", "exhaustive");
    if (mode == "exhaustive") {
      cert = verify_phi_contraction(s, map, phi);
    } else if (mode == "sample") {
      map.validate_for(s);
      cert.map = "finite_map(n=" + std::to_string(map.size()) + ")";
      cert.phi = phi.describe();
      for (std::size_t i = 0; i < samples; ++i) {
        const std::size_t x = uniform_index(rng, s.size());
        const std::size_t y = uniform_index(rng, s.size());
        if (x == y) continue;
        ++cert.checked;
        const double dxy = s.distance(x, y);
        const double d_image = s.distance(map(x), map(y));
        if (d_image > phi(dxy))
          cert.violations.push_back({x, y, dxy, d_image, phi(dxy)});
      }
      cert.verdict = cert.violations.empty() ? Verdict::not_falsified
                                             : Verdict::falsified;
    } else {
      cfg.child("mode").fail("expected \"exhaustive\" or \"sample\"");
    }
  } else {
    const auto& s = std::get<LineSpace>(space);
    if (cfg.get_or<std::string>("mode", "sample") == "exhaustive")
      throw ModeError(
          "contraction-check: exhaustive mode is impossible on a continuum "
          "space; use mode \"sample\"");
    cert = verify_phi_contraction(s, parse_map1d(cfg.child("map")), phi,
                                  samples, rng,
                                  cfg.get_or<double>("tol", 1e-12));
  }
  write_json(out / "certificate.json", certificate_to_json(cert));
  say(opt, "contraction-check: " + to_string(cert.verdict));
  return cert.ok() ? 0 : 1;
}

int cmd_solve(const ConfigView& cfg, const fs::path& out, Rng&,
              const Options& opt) {
  const AnySpace space = parse_space(cfg.child("space"));
  const StopPolicy policy =
      cfg.has("policy")
          ? parse_policy(cfg.child("policy"), space)
          : StopPolicy::window_cauchy(1e-9, 3);
  StopReason reason;
  if (is_finite_space(space)) {
    const auto& s = std::get<FiniteSpace>(space);
    const FiniteMap map = parse_finite_map(cfg.child("map"));
    map.validate_for(s);
    auto trace =
        picard_solve(s, map, cfg.get<std::size_t>("start"), policy);
    write_trace_csv(out / "trace.csv", trace);
    write_json(out / "solve.json", trace_to_json(trace));
    reason = trace.reason;
  } else {
    const auto& s = std::get<LineSpace>(space);
    const Map1D map = parse_map1d(cfg.child("map"));
    auto trace = picard_solve(s, map, cfg.get<double>("start"), policy);
    write_trace_csv(out / "trace.csv", trace);
    write_json(out / "solve.json", trace_to_json(trace));
    reason = trace.reason;
  }
  say(opt, "solve: " + to_string(reason));
  return reason == StopReason::converged ? 0 : 1;
}

int cmd_uniqueness(const ConfigView& cfg, const fs::path& out, Rng&,
                   const Options& opt) {
  const AnySpace space = parse_space(cfg.child("space"));
  const StopPolicy policy =
      cfg.has("policy") ? parse_policy(cfg.child("policy"), space)
                        : StopPolicy::window_cauchy(1e-9, 3);
  const double agree_tol = cfg.get_or<double>("agree_tol", 1e-6);
  json report;
  double max_pairwise = 0.0;
  bool inconclusive = false;
  if (is_finite_space(space)) {
    const auto& s = std::get<FiniteSpace>(space);
    auto probe = uniqueness_probe(s, parse_finite_map(cfg.child("map")),
                                  cfg.get<std::vector<std::size_t>>("starts"),
                                  policy);
    max_pairwise = probe.max_pairwise;
    inconclusive = probe.inconclusive;
    json finals = json::array();
    for (const auto& run : probe.runs) finals.push_back(run.final_point);
    report["final_points"] = finals;
  } else {
    const auto& s = std::get<LineSpace>(space);
    auto probe = uniqueness_probe(s, parse_map1d(cfg.child("map")),
                                  cfg.get<std::vector<double>>("starts"),
                                  policy);
    max_pairwise = probe.max_pairwise;
    inconclusive = probe.inconclusive;
    json finals = json::array();
    for (const auto& run : probe.runs) finals.push_back(run.final_point);
    report["final_points"] = finals;
  }
  report["max_pairwise_distance"] = max_pairwise;
  report["inconclusive"] = inconclusive;
  report["agree_tol"] = agree_tol;
  // Converged runs landing on distinct fixed points contradict
  // phi-contractivity on a complete regular space.
  report["distinct_fixed_points"] = !inconclusive && max_pairwise > agree_tol;
  write_json(out / "uniqueness.json", report);
  const bool ok = !inconclusive && max_pairwise <= agree_tol;
  say(opt, std::string("uniqueness: ") + (ok ? "agree" : "disagree"));
  return ok ? 0 : 1;
}

int cmd_equivalence(const ConfigView& cfg, const fs::path& out, Rng&,
                    const Options& opt) {
  const AnySpace s1 = parse_space(cfg.child("space1"));
  const AnySpace s2 = parse_space(cfg.child("space2"));
  if (!is_finite_space(s1) || !is_finite_space(s2))
    throw ModeError("equivalence: exact moduli need finite spaces");
  const auto& d1 = std::get<FiniteSpace>(s1);
  const auto& d2 = std::get<FiniteSpace>(s2);

  std::vector<double> grid;
  if (cfg.has("t_grid")) {
    grid = cfg.get<std::vector<double>>("t_grid");
  } else {
    for (double v : d2.attained_distances())
      if (v > 0.0) grid.push_back(v);
  }
  EquivalenceOptions eopts;
  eopts.plateau_frac = cfg.get_or<double>("plateau_frac", 0.9);
  eopts.plateau_abs_tol = cfg.get_or<double>("plateau_abs_tol", 1e-9);
  const auto diag = equivalence_diagnostic(d1, d2, grid, eopts);
  const auto composed = composed_triangle_bound_check(d1, d2);

  write_modulus_csv(out / "modulus_12.csv", build_lipschitz_table(d1, d2));
  write_modulus_csv(out / "modulus_21.csv", build_lipschitz_table(d2, d1));

  json report{{"verdict", to_string(diag.verdict)},
              {"plateau_12", diag.plateau_12},
              {"plateau_21", diag.plateau_21},
              {"modulus_12", curve_to_json(diag.modulus_12)},
              {"modulus_21", curve_to_json(diag.modulus_21)},
              {"composed_bound_violations", composed.size()},
              {"exactness", "exact (finite carrier)"}};

  if (cfg.has("probes") &&
      diag.verdict == EquivalenceVerdict::consistent_with_equivalent) {
    std::vector<ProbeSequence<std::size_t>> probes;
    const auto probes_cfg = cfg.child("probes");
    for (std::size_t i = 0; i < probes_cfg.array_size(); ++i) {
      const auto p = probes_cfg.element(i);
      probes.push_back({p.get<std::vector<std::size_t>>("points"),
                        p.get<std::size_t>("limit")});
    }
    TransferOptions topts;
    topts.tol = cfg.get_or<double>("transfer_tol", 1e-6);
    topts.window = cfg.get_or<std::size_t>("transfer_window", 5);
    auto rows = transfer_check(d1, d2, probes, topts);
    json jrows = json::array();
    bool agree = true;
    for (const auto& r : rows) {
      jrows.push_back({{"converges_d1", r.converges_d1},
                       {"converges_d2", r.converges_d2},
                       {"cauchy_d1", r.cauchy_d1},
                       {"cauchy_d2", r.cauchy_d2}});
      agree = agree && r.convergence_agrees() && r.cauchy_agrees();
    }
    report["transfer"] = jrows;
    report["transfer_agrees"] = agree;
  }

  write_json(out / "equivalence.json", report);
  const bool ok =
      diag.verdict == EquivalenceVerdict::consistent_with_equivalent &&
      composed.empty();
  say(opt, "equivalence: " + to_string(diag.verdict));
  return ok ? 0 : 1;
}

int cmd_stability(const ConfigView& cfg, const fs::path& out, Rng& rng,
                  const Options& opt) {
  const AnySpace space = parse_space(cfg.child("space"));
  const StopPolicy policy =
      cfg.has("policy") ? parse_policy(cfg.child("policy"), space)
                        : StopPolicy::window_cauchy(1e-9, 3);
  std::vector<long> n_list;
  if (cfg.has("n_list")) {
    n_list = cfg.get<std::vector<long>>("n_list");
  } else {
    const long from = cfg.get_or<long>("n_from", 1);
    const long to = cfg.get<long>("n_to");
    for (long n = from; n <= to; ++n) n_list.push_back(n);
  }
  StabilityOptions sopts;
  sopts.verify_members = cfg.get_or<bool>("verify_members", true);
  sopts.verify_samples = cfg.get_or<std::size_t>("verify_samples", 2000);
  sopts.trend.frac = cfg.get_or<double>("trend_frac", 0.1);
  sopts.trend.abs_tol = cfg.get_or<double>("trend_abs_tol", 1e-3);

  bool ok;
  json report;
  if (is_finite_space(space)) {
    const auto& s = std::get<FiniteSpace>(space);
    auto family = parse_map_family_finite(cfg.child("family"));
    auto rep = stability_run(s, family, n_list, cfg.get<std::size_t>("start"),
                             policy, rng, sopts);
    write_stability_csv(out / "stability.csv", rep);
    report["limit_fixed_point"] = rep.limit_fixed_point;
    report["trend_pass"] = rep.trend_pass;
    report["inconclusive"] = rep.any_inconclusive();
    ok = rep.trend_pass && !rep.any_inconclusive();
  } else {
    const auto& s = std::get<LineSpace>(space);
    auto family = parse_map_family_1d(cfg.child("family"));
    auto rep = stability_run(s, family, n_list, cfg.get<double>("start"),
                             policy, rng, sopts);
    write_stability_csv(out / "stability.csv", rep);
    report["limit_fixed_point"] = rep.limit_fixed_point;
    report["trend_pass"] = rep.trend_pass;
    report["inconclusive"] = rep.any_inconclusive();
    ok = rep.trend_pass && !rep.any_inconclusive();

    if (cfg.has("iterate_bound")) {
      const auto ib = cfg.child("iterate_bound");
      auto violations = iterate_bound_check(
          s, family, ib.get<std::vector<long>>("ks"),
          ib.get<std::vector<double>>("probes"), n_list,
          parse_form(ib.child("form")), ib.get_or<double>("tol", 1e-12));
      report["iterate_bound_violations"] = violations.size();
      ok = ok && violations.empty();
    }
  }
  write_json(out / "stability.json", report);
  say(opt, std::string("stability: ") + (ok ? "trend holds" : "trend fails"));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// suite presets

bool preset_matkowski1_crelaxed(const fs::path& out, Rng& rng,
                                const Options& opt) {
  bool ok = true;
  // Continuum part: the squared line is a 2-relaxed semimetric.
  auto line2 = LineSpace::real_line_power(2.0);
  ok &= verify_triangle_sampled(line2, TriangleForm::c_relaxed(2.0), 10000, rng)
            .empty();
  // On it, x -> x/2 + 1 contracts squared distances by 1/4.
  auto cert = verify_phi_contraction(line2, Map1D(Affine1D{0.5, 1.0}),
                                     ComparisonFn::linear(0.25), 10000, rng);
  ok &= cert.ok();
  auto trace = picard_solve(line2, Affine1D{0.5, 1.0}, 0.0,
                            StopPolicy::window_cauchy(1e-12, 3));
  write_trace_csv(out / "crelaxed_trace.csv", trace);
  ok &= trace.reason == StopReason::converged;
  ok &= check_residual_majorization(trace, ComparisonFn::linear(0.25)).empty();
  auto probe = uniqueness_probe(line2, Affine1D{0.5, 1.0},
                                std::vector<double>{-10.0, 0.0, 10.0},
                                StopPolicy::window_cauchy(1e-12, 3));
  ok &= !probe.inconclusive && probe.max_pairwise < 1e-6;

  // Finite part: the minimal relaxation constant verifies and dominates.
  std::ofstream csv(out / "crelaxed_finite.csv");
  csv << "trial,n,c\n";
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_semimetric(rng, 3 + uniform_index(rng, 8));
    auto table = basic_triangle_table(s);
    const double c = smallest_valid_c_relaxed(table);
    ok &= verify_triangle_exhaustive(s, TriangleForm::c_relaxed(c)).empty();
    ok &= check_optimality(table, TriangleForm::c_relaxed(c)).empty();
    csv << trial << ',' << s.size() << ',' << fmt_double(c) << '\n';
  }
  say(opt, std::string("suite[matkowski1-crelaxed]: ") + (ok ? "pass" : "fail"));
  return ok;
}

bool preset_matkowski1_cinframetric(const fs::path& out, Rng& rng,
                                    const Options& opt) {
  bool ok = true;
  // Ultrametric spaces are 1-inframetric; max{u,v} verifies and is tight.
  auto ultra = discrete_ultrametric(6);
  auto ultra_table = basic_triangle_table(ultra);
  ok &= verify_triangle_exhaustive(ultra, TriangleForm::max_form()).empty();
  ok &= check_optimality(ultra_table, TriangleForm::max_form()).empty();

  // Constant maps are phi-contractions for every phi; their Picard orbit
  // fixes in one step from any start.
  auto probe = uniqueness_probe(ultra, FiniteMap::constant(6, 2),
                                std::vector<std::size_t>{0, 3, 5},
                                StopPolicy::exact_finite());
  ok &= !probe.inconclusive && probe.max_pairwise == 0.0;

  std::ofstream csv(out / "cinframetric_finite.csv");
  csv << "trial,n,c\n";
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_semimetric(rng, 3 + uniform_index(rng, 8));
    auto table = basic_triangle_table(s);
    const double c = smallest_valid_c_inframetric(table);
    ok &= verify_triangle_exhaustive(s, TriangleForm::c_inframetric(c)).empty();
    ok &= check_optimality(table, TriangleForm::c_inframetric(c)).empty();
    csv << trial << ',' << s.size() << ',' << fmt_double(c) << '\n';
  }
  say(opt,
      std::string("suite[matkowski1-cinframetric]: ") + (ok ? "pass" : "fail"));
  return ok;
}

bool preset_matkowski2_metric(const fs::path& out, Rng& rng,
                              const Options& opt) {
  bool ok = true;
  auto line = LineSpace::real_line();
  MapSequence<Map1D> family{
      [](long n) { return Map1D(Affine1D{0.5, 1.0 / double(n)}); },
      Map1D(Affine1D{0.5, 0.0}), ComparisonFn::linear(0.5)};
  std::vector<long> n_list;
  for (long n = 1; n <= 50; ++n) n_list.push_back(n);
  StabilityOptions sopts;
  sopts.trend = {0.1, 0.1};
  auto report = stability_run(line, family, n_list, 0.0,
                              StopPolicy::window_cauchy(1e-12, 3), rng, sopts);
  write_stability_csv(out / "metric_stability.csv", report);
  ok &= report.trend_pass && !report.any_inconclusive();
  for (const auto& row : report.rows)
    ok &= std::abs(row.distance - 2.0 / double(row.n)) < 1e-9;

  ok &= iterate_bound_check(line, family, {1, 2, 3},
                            std::vector<double>{0.0, 3.7, -2.0}, n_list,
                            TriangleForm::sum())
            .empty();

  ProbeSequence<double> xs, ys;
  xs.limit = 0.0;
  ys.limit = 1.0;
  for (int m = 2; m <= 60; ++m) {
    xs.points.push_back(1.0 / m);
    ys.points.push_back(1.0 - 1.0 / m);
  }
  ok &= self_continuity_check(line, xs, ys, {0.1, 0.05}).trend_pass;
  say(opt, std::string("suite[matkowski2-metric]: ") + (ok ? "pass" : "fail"));
  return ok;
}

bool preset_matkowski2_ultrametric(const fs::path& out, Rng& rng,
                                   const Options& opt) {
  bool ok = true;
  auto ultra = discrete_ultrametric(5);
  MapSequence<FiniteMap> family{
      [](long n) {
        return n < 5 ? FiniteMap::constant(5, 1) : FiniteMap::constant(5, 0);
      },
      FiniteMap::constant(5, 0), ComparisonFn::linear(0.5)};
  auto report = stability_run(ultra, family, {1, 2, 3, 5, 8, 13, 20},
                              std::size_t{4}, StopPolicy::exact_finite(), rng);
  write_stability_csv(out / "ultrametric_stability.csv", report);
  ok &= report.trend_pass && !report.any_inconclusive();
  ok &= report.rows.back().distance == 0.0;

  // Eventually-constant probes: the only convergence mode here.
  ProbeSequence<std::size_t> xs{{1, 1, 2, 2, 2, 2}, 2};
  ProbeSequence<std::size_t> ys{{0, 3, 3, 3, 3, 3}, 3};
  ok &= self_continuity_check(ultra, xs, ys).tail_max == 0.0;
  say(opt,
      std::string("suite[matkowski2-ultrametric]: ") + (ok ? "pass" : "fail"));
  return ok;
}

bool preset_extension_equivalent(const fs::path& out, Rng& rng,
                                 const Options& opt) {
  bool ok = true;
  // d2: a random finite semimetric; d1: its entrywise square root, an
  // equivalent semimetric (monotone rescaling). Fixed-point machinery on
  // d1 inherits completeness and regularity from d2.
  auto d2 = random_semimetric(rng, 8);
  auto m = d2.matrix();
  for (auto& row : m)
    for (auto& v : row) v = std::sqrt(v);
  auto d1 = FiniteSpace::from_matrix(m);

  std::vector<double> grid;
  for (double v : d2.attained_distances())
    if (v > 0.0) grid.push_back(v);
  auto diag = equivalence_diagnostic(d1, d2, grid);
  ok &= diag.verdict == EquivalenceVerdict::consistent_with_equivalent;
  ok &= composed_triangle_bound_check(d1, d2).empty();
  ok &= composed_triangle_bound_check(d2, d1).empty();
  write_modulus_csv(out / "extension_modulus_12.csv",
                    build_lipschitz_table(d1, d2));
  write_modulus_csv(out / "extension_modulus_21.csv",
                    build_lipschitz_table(d2, d1));

  auto probe = uniqueness_probe(d1, FiniteMap::constant(8, 3),
                                std::vector<std::size_t>{0, 4, 7},
                                StopPolicy::exact_finite());
  ok &= !probe.inconclusive && probe.max_pairwise == 0.0;
  say(opt,
      std::string("suite[extension-equivalent]: ") + (ok ? "pass" : "fail"));
  return ok;
}

int cmd_suite(const ConfigView& cfg, const fs::path& out, Rng& rng,
              const Options& opt) {
  const auto preset = cfg.get<std::string>("preset");
  bool ok;
  if (preset == "matkowski1-crelaxed")
    ok = preset_matkowski1_crelaxed(out, rng, opt);
  else if (preset == "matkowski1-cinframetric")
    ok = preset_matkowski1_cinframetric(out, rng, opt);
  else if (preset == "matkowski2-metric")
    ok = preset_matkowski2_metric(out, rng, opt);
  else if (preset == "matkowski2-ultrametric")
    ok = preset_matkowski2_ultrametric(out, rng, opt);
  else if (preset == "extension-equivalent")
    ok = preset_extension_equivalent(out, rng, opt);
  else
    cfg.child("preset").fail("unknown preset \"" + preset + "\"");
  write_json(out / "suite.json", {{"preset", preset}, {"pass", ok}});
  return ok ? 0 : 1;
}

int dispatch(const std::string& command, const Options& opt) {
  const json config = load_json_file(opt.config_path);
  const ConfigView cfg(config);

  fs::path out = !opt.out_dir.empty()
                     ? fs::path(opt.out_dir)
                     : fs::path(cfg.get_or<std::string>("out", "out"));
  fs::create_directories(out);

  const std::uint64_t seed =
      opt.seed >= 0 ? static_cast<std::uint64_t>(opt.seed)
                    : cfg.get_or<std::uint64_t>("seed", 0);
  Rng rng(seed);

  if (command == "validate") return cmd_validate(cfg, out, rng, opt);
  if (command == "phi-table") return cmd_phi_table(cfg, out, rng, opt);
  if (command == "regularity") return cmd_regularity(cfg, out, rng, opt);
  if (command == "contraction-check")
    return cmd_contraction_check(cfg, out, rng, opt);
  if (command == "solve") return cmd_solve(cfg, out, rng, opt);
  if (command == "uniqueness") return cmd_uniqueness(cfg, out, rng, opt);
  if (command == "equivalence") return cmd_equivalence(cfg, out, rng, opt);
  if (command == "stability") return cmd_stability(cfg, out, rng, opt);
  if (command == "suite") return cmd_suite(cfg, out, rng, opt);
  throw ConfigError("unknown command: " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-point experiments on semimetric spaces"};
  app.require_subcommand(1);

  Options opt;
  std::vector<CLI::App*> subcommands;
  for (const char* name :
       {"validate", "phi-table", "regularity", "contraction-check", "solve",
        "uniqueness", "equivalence", "stability", "suite"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "seed override (default: config)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress lines");
    subcommands.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return dispatch(app.get_subcommands().front()->get_name(), opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
