// bcsmeta: command-line front end for gap solving, relaxation trajectories,
// classification, exit times, stability audits and parameter sweeps.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcsmeta/scenario.hpp"

namespace {

using namespace bcsmeta;

struct CommonOptions {
  double epsilon = 0.25;
  std::optional<double> beta;
  std::optional<double> beta_ratio;
  double phi = std::numbers::pi / 4.0;
  std::string observable = "sigma-z";
  std::vector<double> matrix;
  std::optional<double> t_min;
  std::optional<double> t_max;
  int t_count = 1000;
  std::string t_scale = "log";
  std::string format = "csv";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string report;
};

const std::map<std::string, ObservableKind> kObservables{{"x-quad", ObservableKind::XQuadrature},
                                                         {"y-quad", ObservableKind::YQuadrature},
                                                         {"sigma-z", ObservableKind::SigmaZ},
                                                         {"custom", ObservableKind::Custom}};

void add_output_options(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", o.seed, "Seed for random operator families");
  sub->add_option("--out", o.out, "Output path (default: stdout)");
}

void add_scenario_options(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--epsilon", o.epsilon, "Field strength eps > 0");
  auto* beta = sub->add_option("--beta", o.beta, "Inverse temperature");
  sub->add_option("--beta-ratio", o.beta_ratio, "Inverse temperature as a multiple of beta_c")
      ->excludes(beta);
  sub->add_option("--phi", o.phi, "Phase of the target state, in [0, 2pi]");
  sub->add_option("--observable", o.observable, "x-quad | y-quad | sigma-z | custom")
      ->check(CLI::IsMember({"x-quad", "y-quad", "sigma-z", "custom"}));
  sub->add_option("--matrix", o.matrix,
                  "Custom observable: re00,im00,re01,im01,re10,im10,re11,im11")
      ->delimiter(',')
      ->expected(8);
  sub->add_option("--t-min", o.t_min, "First grid time (default 1e-4/c)");
  sub->add_option("--t-max", o.t_max, "Last grid time (default 20/c)");
  sub->add_option("--t-count", o.t_count, "Number of grid points");
  sub->add_option("--t-scale", o.t_scale, "linear | log")->check(CLI::IsMember({"linear", "log"}));
  add_output_options(sub, o);
}

ScenarioConfig to_config(const CommonOptions& o) {
  ScenarioConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.beta = o.beta;
  cfg.beta_ratio = o.beta ? std::nullopt : std::optional<double>(o.beta_ratio.value_or(2.0));
  cfg.phi = o.phi;
  cfg.observable = kObservables.at(o.observable);
  if (cfg.observable == ObservableKind::Custom) {
    if (o.matrix.size() != 8) throw DomainError("--observable custom needs --matrix with 8 values");
    for (int i = 0; i < 4; ++i) cfg.custom(i / 2, i % 2) = cplx(o.matrix[2 * i], o.matrix[2 * i + 1]);
  }
  cfg.t_min = o.t_min;
  cfg.t_max = o.t_max;
  cfg.t_count = o.t_count;
  cfg.t_scale = o.t_scale == "linear" ? GridScale::Linear : GridScale::Log;
  cfg.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

std::string parameter_context(const ScenarioConfig& cfg) {
  std::ostringstream s;
  s << std::setprecision(17) << "(epsilon=" << cfg.epsilon;
  if (cfg.beta) s << ", beta=" << *cfg.beta;
  if (!cfg.beta && cfg.beta_ratio) s << ", beta_ratio=" << *cfg.beta_ratio;
  s << ", phi=" << cfg.phi << ")";
  return s.str();
}

/// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_json(const CommonOptions& o, const json& j) {
  Sink sink(o.out);
  sink.stream() << j.dump(2) << '\n';
}

ScenarioResult scenario(const ScenarioConfig& cfg) {
  try {
    ScenarioResult r = run_scenario(cfg);
    if (r.observable.hermitized) {
      std::cerr << "bcsmeta: warning: custom observable not Hermitian (asymmetry "
                << r.observable.asymmetry << "); using its Hermitian part\n";
    }
    return r;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " " + parameter_context(cfg));
  }
}

int cmd_gap_solve(const CommonOptions& o) {
  const ScenarioConfig cfg = to_config(o);
  ModelParams p;
  try {
    p = resolve_params(cfg);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " " + parameter_context(cfg));
  }
  const bool has_critical = p.epsilon < 0.5;
  if (cfg.format == OutputFormat::Json) {
    json j{{"epsilon", p.epsilon},
           {"beta", p.beta},
           {"beta_c", has_critical ? json(critical_beta(p.epsilon)) : json(nullptr)}};
    j.update(to_json(p.gap));
    emit_json(o, j);
  } else {
    Sink sink(o.out);
    detail::CsvWriter w(sink.stream());
    w.row("epsilon", "beta", "beta_c", "lambda", "k", "superconducting", "residual");
    const std::optional<double> beta_c =
        has_critical ? std::optional<double>(critical_beta(p.epsilon)) : std::nullopt;
    w.row(p.epsilon, p.beta, beta_c, p.gap.lambda, p.gap.k, p.gap.superconducting, p.gap.residual);
  }
  return 0;
}

int cmd_evolve(const CommonOptions& o) {
  const ScenarioConfig cfg = to_config(o);
  const ScenarioResult r = scenario(cfg);
  if (cfg.format == OutputFormat::Json) {
    emit_json(o, {{"report", report_json(r)}, {"trajectory", trajectory_json(r.trajectory)}});
  } else {
    Sink sink(o.out);
    write_trajectory_csv(sink.stream(), r.trajectory);
  }
  if (!o.report.empty()) {
    std::ofstream rep(o.report);
    if (!rep) throw std::runtime_error("cannot open report file " + o.report);
    rep << report_json(r).dump(2) << '\n';
  }
  return 0;
}

int cmd_classify(const CommonOptions& o) {
  const ScenarioConfig cfg = to_config(o);
  const ScenarioResult r = scenario(cfg);
  if (cfg.format == OutputFormat::Json) {
    emit_json(o, report_json(r));
  } else {
    Sink sink(o.out);
    detail::CsvWriter w(sink.stream());
    w.row("classification", "exit_time", "amplitude_offdiag", "amplitude_diag", "c", "d", "lambda",
          "k", "invariant_exit_time");
    w.row(std::string(to_string(r.relaxation.relaxation)), r.relaxation.exit_time,
          r.relaxation.amplitude_offdiag, r.relaxation.amplitude_diag, r.constants.c, r.constants.d,
          r.params.lambda(), r.params.k(), r.invariant_exit_time);
  }
  return 0;
}

int cmd_exit_time(const CommonOptions& o) {
  const ScenarioConfig cfg = to_config(o);
  const ScenarioResult r = scenario(cfg);
  if (cfg.format == OutputFormat::Json) {
    json j{{"classification", std::string(to_string(r.relaxation.relaxation))},
           {"invariant_exit_time", optional_json(r.invariant_exit_time)}};
    if (r.relaxation.exit_time) j["exit_time"] = *r.relaxation.exit_time;
    emit_json(o, j);
  } else {
    Sink sink(o.out);
    detail::CsvWriter w(sink.stream());
    w.row("observable", "classification", "exit_time", "invariant_exit_time");
    w.row(std::string(to_string(cfg.observable)), std::string(to_string(r.relaxation.relaxation)),
          r.relaxation.exit_time, r.invariant_exit_time);
  }
  return 0;
}

int cmd_stability(const CommonOptions& o) {
  const ScenarioConfig cfg = to_config(o);
  const ScenarioResult r = scenario(cfg);
  if (r.stability.empty()) {
    throw std::runtime_error("stability audit needs superconducting parameters " +
                             parameter_context(cfg));
  }
  if (cfg.format == OutputFormat::Json) {
    emit_json(o, {{"invariant_exit_time", optional_json(r.invariant_exit_time)},
                  {"stability", report_json(r)["stability"]}});
  } else {
    Sink sink(o.out);
    detail::CsvWriter w(sink.stream());
    w.row("label", "t", "is_equilibrium", "population_ratio", "boltzmann_ratio", "qp_satisfied",
          "qp_members", "constants_satisfied", "constants_members", "creation_satisfied",
          "creation_members", "annihilation_satisfied", "annihilation_members",
          "annihilation_max_margin");
    for (const auto& row : r.stability) {
      const StabilityReport& s = row.report;
      w.row(row.label, s.t, s.is_equilibrium, s.population_ratio, s.boltzmann_ratio,
            s.quadratures.satisfied, s.quadratures.members, s.constants.satisfied,
            s.constants.members, s.creation.satisfied, s.creation.members, s.annihilation.satisfied,
            s.annihilation.members, s.annihilation.max_margin);
    }
  }
  return 0;
}

struct SweepOptions {
  std::vector<double> epsilons{0.25};
  std::vector<double> beta_ratios;
  std::vector<double> betas;
  std::vector<double> phis{std::numbers::pi / 4.0};
  std::string observable = "sigma-z";
  unsigned threads = 0;
};

int cmd_sweep(const CommonOptions& o, const SweepOptions& s) {
  SweepGrid grid;
  grid.epsilons = s.epsilons;
  grid.betas = s.betas;
  grid.beta_ratios = s.beta_ratios.empty() && s.betas.empty() ? std::vector<double>{2.0}
                                                                : s.beta_ratios;
  grid.phis = s.phis;
  grid.observable = kObservables.at(s.observable);
  if (grid.observable == ObservableKind::Custom) {
    throw DomainError("sweep supports x-quad, y-quad and sigma-z observables");
  }
  grid.seed = o.seed;
  grid.threads = s.threads;
  const SweepResult result = run_sweep(grid);
  if (o.format == "json") {
    emit_json(o, to_json(result));
  } else {
    Sink sink(o.out);
    write_sweep_csv(sink.stream(), result);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metastable relaxation between BCS phase states"};
  app.require_subcommand(1);

  CommonOptions o;
  SweepOptions sw;
  auto* gap = app.add_subcommand("gap-solve", "Solve the gap equation");
  gap->add_option("--epsilon", o.epsilon, "Field strength eps > 0");
  auto* gap_beta = gap->add_option("--beta", o.beta, "Inverse temperature");
  gap->add_option("--beta-ratio", o.beta_ratio, "Inverse temperature as a multiple of beta_c")
      ->excludes(gap_beta);
  add_output_options(gap, o);

  auto* evolve = app.add_subcommand("evolve", "Trajectory table: closed form vs semigroup oracle");
  add_scenario_options(evolve, o);
  evolve->add_option("--report", o.report, "Also write the JSON report object to this path");

  auto* classify = app.add_subcommand("classify", "Monotone / metastable / constant report");
  add_scenario_options(classify, o);
  auto* exit = app.add_subcommand("exit-time", "Exit time of the observable");
  add_scenario_options(exit, o);
  auto* stability = app.add_subcommand("stability", "EEB audit at t*/2, t*, 2t*");
  add_scenario_options(stability, o);

  auto* sweep = app.add_subcommand("sweep", "Grid over (epsilon, beta or beta/beta_c, phi)");
  sweep->add_option("--epsilon", sw.epsilons, "Comma-separated epsilon values")->delimiter(',');
  auto* sweep_beta =
      sweep->add_option("--beta", sw.betas, "Comma-separated beta values")->delimiter(',');
  sweep->add_option("--beta-ratio", sw.beta_ratios, "Comma-separated beta/beta_c values")
      ->delimiter(',')
      ->excludes(sweep_beta);
  sweep->add_option("--phi", sw.phis, "Comma-separated phases")->delimiter(',');
  sweep->add_option("--observable", sw.observable, "x-quad | y-quad | sigma-z")
      ->check(CLI::IsMember({"x-quad", "y-quad", "sigma-z"}));
  sweep->add_option("--threads", sw.threads, "Worker threads (0: all cores)");
  add_output_options(sweep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gap) {
      if (!o.beta && !o.beta_ratio) o.beta_ratio = 2.0;
      return cmd_gap_solve(o);
    }
    if (*evolve) return cmd_evolve(o);
    if (*classify) return cmd_classify(o);
    if (*exit) return cmd_exit_time(o);
    if (*stability) return cmd_stability(o);
    if (*sweep) return cmd_sweep(o, sw);
  } catch (const std::exception& e) {
    std::cerr << "bcsmeta: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
