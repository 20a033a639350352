#pragma once

// Scenario runs and parameter sweeps behind the bcsmeta command-line tool, plus
// their CSV / JSON emitters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bcsmeta/dynamics.hpp"
#include "bcsmeta/equilibrium.hpp"
#include "bcsmeta/metastability.hpp"
#include "bcsmeta/oracle.hpp"
#include "bcsmeta/stability.hpp"
#include "bcsmeta/time_grid.hpp"
#include "json.hpp"

namespace bcsmeta {

enum class ObservableKind { XQuadrature, YQuadrature, SigmaZ, Custom };
enum class OutputFormat { Csv, Json };

struct ScenarioConfig {
  double epsilon = 0.25;
  std::optional<double> beta;
  std::optional<double> beta_ratio = 2.0;  // multiple of beta_c(eps), used when beta is unset
  double phi = std::numbers::pi / 4.0;
  ObservableKind observable = ObservableKind::SigmaZ;
  Matrix2 custom;  // row-major entries when observable == Custom
  std::optional<double> t_min;  // defaults to 1e-4/c
  std::optional<double> t_max;  // defaults to 20/c
  int t_count = 1000;
  GridScale t_scale = GridScale::Log;
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (!(epsilon > 0.0)) throw DomainError("--epsilon must be positive");
    if (beta && !(*beta > 0.0)) throw DomainError("--beta must be positive");
    if (!beta && !beta_ratio) throw DomainError("one of --beta or --beta-ratio is required");
    if (!beta && !(*beta_ratio > 0.0)) throw DomainError("--beta-ratio must be positive");
    if (t_count < 2) throw DomainError("--t-count must be at least 2");
    if (t_min && t_max && !(*t_min < *t_max)) throw DomainError("--t-min must be below --t-max");
    if (t_min && !(*t_min >= 0.0)) throw DomainError("--t-min must be non-negative");
  }
};

inline std::string_view to_string(ObservableKind k) {
  switch (k) {
    case ObservableKind::XQuadrature: return "x-quad";
    case ObservableKind::YQuadrature: return "y-quad";
    case ObservableKind::SigmaZ: return "sigma-z";
    case ObservableKind::Custom: return "custom";
  }
  return "unknown";
}

inline ModelParams resolve_params(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.beta) return make_params(cfg.epsilon, *cfg.beta, cfg.phi);
  if (cfg.epsilon >= 0.5) {
    throw DomainError("--beta-ratio needs epsilon < 1/2 (no critical temperature for epsilon = " +
                      std::to_string(cfg.epsilon) + "); pass --beta instead");
  }
  return make_params_relative(cfg.epsilon, *cfg.beta_ratio, cfg.phi);
}

struct ResolvedObservable {
  Matrix2 matrix;
  double asymmetry = 0.0;  // |X - X^dag| of the raw custom input
  bool hermitized = false;
};

inline constexpr double kCustomAsymmetryTol = 1e-12;

inline ResolvedObservable resolve_observable(const ScenarioConfig& cfg, const ModelParams& p) {
  switch (cfg.observable) {
    case ObservableKind::XQuadrature: return {quadrature_observable(p, Quadrature::X)};
    case ObservableKind::YQuadrature: return {quadrature_observable(p, Quadrature::Y)};
    case ObservableKind::SigmaZ: return {sigma_z()};
    case ObservableKind::Custom: {
      const double asym = distance(cfg.custom, adjoint(cfg.custom));
      return {HermitianMatrix2::hermitian_part(cfg.custom), asym, asym > kCustomAsymmetryTol};
    }
  }
  return {};
}

struct TrajectoryRow {
  double t = 0.0;
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
};

struct StabilityRow {
  std::string label;  // "half_exit", "exit", "double_exit"
  StabilityReport report;
};

struct ScenarioResult {
  ModelParams params;
  double beta_c = std::numeric_limits<double>::quiet_NaN();
  RelaxationConstants constants;
  ResolvedObservable observable;
  RelaxationReport relaxation;
  std::optional<double> invariant_exit_time;
  std::vector<TrajectoryRow> trajectory;
  std::vector<StabilityRow> stability;  // at t*/2, t*, 2t* of the invariant exit time
};

inline std::vector<double> scenario_grid(const ScenarioConfig& cfg, double c) {
  return time_grid(cfg.t_min.value_or(1e-4 / c), cfg.t_max.value_or(20.0 / c), cfg.t_count,
                   cfg.t_scale);
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  ScenarioResult r;
  r.params = resolve_params(cfg);
  const ModelParams& p = r.params;
  if (p.epsilon < 0.5) r.beta_c = critical_beta(p.epsilon);
  r.constants = relaxation_constants(p);
  r.observable = resolve_observable(cfg, p);
  r.relaxation = classify_relaxation(p, r.observable.matrix);

  const ExpectationTrajectory closed = make_trajectory(p, r.observable.matrix);
  const Superoperator generator = generator_superoperator(p);
  const DensityMatrix2 initial = equilibrium_state(p, -p.phi);
  for (double t : scenario_grid(cfg, r.constants.c)) {
    const double cf = closed.value(t).real();
    const double orc = initial.expect(semigroup_at(generator, t).apply(r.observable.matrix)).real();
    r.trajectory.push_back({t, cf, orc, std::abs(cf - orc)});
  }

  if (p.superconducting()) {
    const double ts = invariant_exit_time(p);
    r.invariant_exit_time = ts;
    r.stability.push_back({"half_exit", stability_report(p, 0.5 * ts, cfg.seed)});
    r.stability.push_back({"exit", stability_report(p, ts, cfg.seed)});
    r.stability.push_back({"double_exit", stability_report(p, 2.0 * ts, cfg.seed)});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepGrid {
  std::vector<double> epsilons;
  std::vector<double> beta_ratios;  // used when betas is empty
  std::vector<double> betas;
  std::vector<double> phis;
  ObservableKind observable = ObservableKind::SigmaZ;
  Matrix2 custom;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double epsilon = 0.0;
  std::optional<double> beta_ratio;
  std::optional<double> beta;
  double phi = 0.0;
  GapSolution gap;
  std::optional<RelaxationClass> relaxation;
  std::optional<double> exit_time;            // of the swept observable
  std::optional<double> invariant_exit_time;  // shared by gauge-invariant observables
  double amplitude = 0.0;  // max_t |omega_t(X) - omega_phi(X)| on the report grid
  int families_satisfied = 0;  // EEB families fully satisfied at the invariant exit time
  int families_violated = 0;   // EEB families with at least one violation there
  std::string note;            // per-row diagnostics (normal phase, errors)
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline SweepRow sweep_row(double eps, std::optional<double> ratio, std::optional<double> beta,
                          double phi, const SweepGrid& grid) {
  SweepRow row;
  row.epsilon = eps;
  row.beta_ratio = ratio;
  row.beta = beta;
  row.phi = phi;
  try {
    if (!beta) {
      if (eps >= 0.5) {
        row.note = "no critical temperature for epsilon >= 1/2: normal phase at every beta";
        row.gap = {0.0, eps, false, 0.0};
        return row;
      }
      row.beta = *ratio * critical_beta(eps);
    }
    const ModelParams p = make_params(eps, *row.beta, phi);
    row.gap = p.gap;
    ScenarioConfig cfg;
    cfg.observable = grid.observable;
    cfg.custom = grid.custom;
    const Matrix2 x = resolve_observable(cfg, p).matrix;
    const RelaxationReport rep = classify_relaxation(p, x);
    row.relaxation = rep.relaxation;
    row.exit_time = rep.exit_time;
    const double mean = make_trajectory(p, x).mean.real();
    for (const auto& [t, v] : rep.trajectory) row.amplitude = std::max(row.amplitude, std::abs(v - mean));
    if (!p.superconducting()) {
      row.note = "normal phase";
      return row;
    }
    row.invariant_exit_time = invariant_exit_time(p);
    const StabilityReport st = stability_report(p, *row.invariant_exit_time, grid.seed);
    for (const FamilyVerdict* f : {&st.quadratures, &st.constants, &st.creation, &st.annihilation}) {
      (f->all_satisfied() ? row.families_satisfied : row.families_violated) += 1;
    }
  } catch (const std::exception& e) {
    row.note = std::string("error: ") + e.what();
  }
  return row;
}

/// Evaluates every grid point independently; rows keep grid order
/// (epsilon outermost, phi innermost).
inline SweepResult run_sweep(const SweepGrid& grid) {
  struct Point {
    double eps;
    std::optional<double> ratio;
    std::optional<double> beta;
    double phi;
  };
  std::vector<Point> points;
  for (double eps : grid.epsilons) {
    if (!grid.betas.empty()) {
      for (double b : grid.betas)
        for (double phi : grid.phis) points.push_back({eps, std::nullopt, b, phi});
    } else {
      for (double r : grid.beta_ratios)
        for (double phi : grid.phis) points.push_back({eps, r, std::nullopt, phi});
    }
  }

  SweepResult out;
  out.rows.resize(points.size());
  unsigned workers = grid.threads ? grid.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, std::max<std::size_t>(points.size(), 1));
  std::vector<std::future<void>> tasks;
  for (unsigned w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < points.size(); i += workers) {
        const Point& pt = points[i];
        out.rows[i] = sweep_row(pt.eps, pt.ratio, pt.beta, pt.phi, grid);
      }
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

using nlohmann::json;

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json to_json(const GapSolution& g) {
  return {{"lambda", g.lambda},
          {"k", g.k},
          {"superconducting", g.superconducting},
          {"residual", g.residual}};
}

inline json to_json(const FamilyVerdict& f) {
  return {{"members", f.members},
          {"satisfied", f.satisfied},
          {"min_margin", f.min_margin},
          {"max_margin", f.max_margin}};
}

inline json to_json(const StabilityReport& s) {
  return {{"t", s.t},
          {"seed", s.seed},
          {"is_equilibrium", s.is_equilibrium},
          {"population_ratio", s.population_ratio},
          {"boltzmann_ratio", s.boltzmann_ratio},
          {"qp_combinations", to_json(s.quadratures)},
          {"constants_of_motion", to_json(s.constants)},
          {"creation", to_json(s.creation)},
          {"annihilation", to_json(s.annihilation)},
          {"creation_stable_annihilation_unstable", s.creation_stable_annihilation_unstable()}};
}

/// Report object (everything except the trajectory table).
inline json report_json(const ScenarioResult& r) {
  json j{{"epsilon", r.params.epsilon},
         {"beta", r.params.beta},
         {"beta_c", std::isnan(r.beta_c) ? json(nullptr) : json(r.beta_c)},
         {"phi", r.params.phi},
         {"gap", to_json(r.params.gap)},
         {"c", r.constants.c},
         {"d", r.constants.d},
         {"classification", std::string(to_string(r.relaxation.relaxation))},
         {"amplitude_offdiag", r.relaxation.amplitude_offdiag},
         {"amplitude_diag", r.relaxation.amplitude_diag},
         {"invariant_exit_time", optional_json(r.invariant_exit_time)},
         {"observable_hermitized", r.observable.hermitized}};
  if (r.relaxation.exit_time) j["exit_time"] = *r.relaxation.exit_time;
  json st = json::object();
  for (const auto& row : r.stability) st[row.label] = to_json(row.report);
  j["stability"] = st;
  return j;
}

inline json trajectory_json(const std::vector<TrajectoryRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back({{"t", row.t},
                   {"closed_form", row.closed_form},
                   {"oracle", row.oracle},
                   {"abs_diff", row.abs_diff}});
  }
  return arr;
}

inline std::string relaxation_name(const std::optional<RelaxationClass>& c) {
  return c ? std::string(to_string(*c)) : std::string();
}

inline json to_json(const SweepRow& row) {
  return {{"epsilon", row.epsilon},
          {"beta_ratio", optional_json(row.beta_ratio)},
          {"beta", optional_json(row.beta)},
          {"phi", row.phi},
          {"gap", to_json(row.gap)},
          {"classification", row.relaxation ? json(relaxation_name(row.relaxation)) : json(nullptr)},
          {"exit_time", optional_json(row.exit_time)},
          {"invariant_exit_time", optional_json(row.invariant_exit_time)},
          {"amplitude", row.amplitude},
          {"families_satisfied", row.families_satisfied},
          {"families_violated", row.families_violated},
          {"note", row.note}};
}

inline json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& row : s.rows) rows.push_back(to_json(row));
  return {{"rows", rows}};
}

namespace detail {

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) { os_ << std::setprecision(17); }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ","), first = false, cell(cells)), ...);
    os_ << '\n';
  }

 private:
  void cell(double v) { os_ << v; }
  void cell(int v) { os_ << v; }
  void cell(bool v) { os_ << (v ? "true" : "false"); }
  void cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
      os_ << s;
      return;
    }
    os_ << '"';
    for (char ch : s) os_ << (ch == '"' ? "\"\"" : std::string(1, ch));
    os_ << '"';
  }
  void cell(const char* s) { cell(std::string(s)); }
  void cell(const std::optional<double>& v) {
    if (v) os_ << *v;
  }

  std::ostream& os_;
};

}  // namespace detail

inline constexpr const char* kTrajectoryHeader = "t,closed_form,oracle,abs_diff";

inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  detail::CsvWriter w(os);
  w.row("t", "closed_form", "oracle", "abs_diff");
  for (const auto& r : rows) w.row(r.t, r.closed_form, r.oracle, r.abs_diff);
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  detail::CsvWriter w(os);
  w.row("epsilon", "beta_ratio", "beta", "phi", "lambda", "k", "superconducting", "residual",
        "classification", "exit_time", "invariant_exit_time", "amplitude", "families_satisfied",
        "families_violated", "note");
  for (const auto& r : s.rows) {
    w.row(r.epsilon, r.beta_ratio, r.beta, r.phi, r.gap.lambda, r.gap.k, r.gap.superconducting,
          r.gap.residual, relaxation_name(r.relaxation), r.exit_time, r.invariant_exit_time,
          r.amplitude, r.families_satisfied, r.families_violated, r.note);
  }
}

}  // namespace bcsmeta
