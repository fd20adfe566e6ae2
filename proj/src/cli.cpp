#include "ridgerec/cli.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/experiment.hpp"
#include "ridgerec/rng.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

namespace ridgerec {

namespace {

struct Flags {
  std::vector<Eigen::Index> dim{100};
  std::vector<Eigen::Index> m;
  Eigen::Index s = 5;
  std::vector<double> h{0.1};
  std::vector<double> sigma{0.0};
  std::string profile;
  int trials = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string records;
  unsigned jobs = 0;
  bool allow_exterior = false;
  bool full = false;
  bool no_timing = false;
  std::size_t sup_points = 0;
  std::optional<double> radius;
  std::size_t grid = 1024;
  int probes = 10;
  double tol = 1e-8;
  std::string solver = "l1-eq";
  double eta = 0.0;
  double thresh = 0.0;
};

void setup_logging() {
  auto logger = spdlog::get("ridgerec");
  if (!logger) {
    logger = spdlog::stderr_logger_mt("ridgerec");
    spdlog::set_default_logger(logger);
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("RIDGEREC_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

void add_run_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--trials", f.trials, "trials per grid point")->check(CLI::PositiveNumber);
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--jobs", f.jobs, "worker threads (0: hardware parallelism)");
  sub->add_option("--sup-points", f.sup_points, "random points for the sup-error estimate (0: skip)");
  sub->add_flag("--no-timing", f.no_timing, "write wall_ms as 0");
  sub->add_option("--grid", f.grid, "profile table size T")->check(CLI::Range(2, 1 << 24));
  sub->add_option("--probes", f.probes, "sign probes K for radial algorithms")->check(CLI::Range(1, 1 << 20));
  sub->add_option("--tol", f.tol, "solver tolerance")->check(CLI::PositiveNumber);
}

void add_algo_flags(CLI::App* sub, Flags& f, Algo algo) {
  sub->add_option("--dim", f.dim, "dimension d (comma-separated list)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  if (uses_measurements(algo)) {
    sub->add_option("--m", f.m, "measurements m (comma-separated list)")
        ->delimiter(',')
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("--s", f.s, "sparsity of the hidden direction")->check(CLI::PositiveNumber);
  }
  sub->add_option("--h", f.h, "step size (comma-separated list)")->delimiter(',')->check(CLI::PositiveNumber);
  sub->add_option("--sigma", f.sigma, "noise level (comma-separated list)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--profile", f.profile, "profile name")->check(CLI::IsMember(profile_names()));
  sub->add_option("--out", f.out, "trial records CSV");
  sub->add_flag("--allow-exterior", f.allow_exterior, "accept queries in the cube around the ball");
  if (algo == Algo::D_cs) sub->add_option("--radius", f.radius, "l1 bound R (default sqrt(s))")->check(CLI::PositiveNumber);
  add_run_flags(sub, f);
}

std::string default_profile(Algo algo) {
  return model_of(algo) == ModelKind::radial_ball ? "recip" : "tanh-shift";
}

void apply_run_flags(ExperimentConfig& cfg, const Flags& f) {
  if (f.trials > 0) cfg.trials = f.trials;
  cfg.jobs = f.jobs;
  cfg.sup_error_points = f.sup_points;
  cfg.record_time = !f.no_timing;
  cfg.recovery.grid_size = f.grid;
  cfg.recovery.sign_probes = f.probes;
  cfg.recovery.solver.tol = f.tol;
}

double mean_primary(const std::vector<SummaryRow>& rows) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    const double e = (r.algo == Algo::A || r.algo == Algo::B) ? r.mean_err_l1 : r.mean_err_l2;
    if (!std::isnan(e)) {
      sum += e;
      ++n;
    }
  }
  return n > 0 ? sum / n : std::nan("");
}

int run_algo(Algo algo, const Flags& f, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.algo = algo;
  cfg.d_grid = f.dim;
  cfg.m_grid = f.m;
  cfg.s = f.s;
  cfg.h_grid = f.h;
  cfg.sigma_grid = f.sigma;
  cfg.profile = f.profile.empty() ? default_profile(algo) : f.profile;
  cfg.master_seed = f.seed.value_or(0);
  cfg.allow_exterior = f.allow_exterior;
  cfg.radius = f.radius;
  apply_run_flags(cfg, f);

  const auto records = run_grid(cfg);
  if (!f.out.empty()) write_records_csv(f.out, records);
  const auto rows = summarize(records, cfg.profile);
  int failures = 0;
  for (const auto& r : rows) failures += r.failures;
  out << "algo=" << to_string(algo) << " points=" << rows.size() << " records=" << records.size()
      << " failures=" << failures << " mean_err=" << format_double(mean_primary(rows))
      << " out=" << (f.out.empty() ? "-" : f.out) << '\n';
  return kExitOk;
}

int run_repro(int figure, const Flags& f, std::ostream& out) {
  if (!f.seed) throw InputError("repro-fig" + std::to_string(figure) + ": --seed is required");
  const std::string path = f.out.empty() ? "fig" + std::to_string(figure) + ".csv" : f.out;
  std::vector<SummaryRow> rows;
  std::vector<TrialRecord> all;
  for (ExperimentConfig cfg : repro_configs(figure, *f.seed, f.full)) {
    apply_run_flags(cfg, f);
    const auto records = run_grid(cfg);
    const auto part = summarize(records, cfg.profile);
    rows.insert(rows.end(), part.begin(), part.end());
    if (!f.records.empty()) all.insert(all.end(), records.begin(), records.end());
  }
  write_summary_csv(path, rows);
  if (!f.records.empty()) write_records_csv(f.records, all);
  out << "repro-fig" << figure << " points=" << rows.size() << " mean_err=" << format_double(mean_primary(rows))
      << " out=" << path << '\n';
  return kExitOk;
}

int run_rip(const Flags& f, std::ostream& out) {
  if (f.m.size() != 1 || f.dim.size() != 1) throw InputError("rip-check: give one --m and one --dim");
  const auto phi = SensingMatrix::bernoulli(f.m.front(), f.dim.front(), f.seed.value_or(0));
  for (Eigen::Index k = 1; k <= f.s; ++k) {
    const RipEstimate e = rip_constant_exhaustive(phi.matrix(), k);
    out << "m=" << phi.rows() << " d=" << phi.cols() << " s=" << k << " delta=" << format_double(e.delta) << '\n';
  }
  return kExitOk;
}

int run_solve(const Flags& f, std::ostream& out) {
  if (f.m.size() != 1 || f.dim.size() != 1) throw InputError("solve: give one --m and one --dim");
  const Eigen::Index m = f.m.front();
  const Eigen::Index d = f.dim.front();
  const double sigma = f.sigma.empty() ? 0.0 : f.sigma.front();
  const std::uint64_t seed = f.seed.value_or(0);
  const auto phi = SensingMatrix::bernoulli(m, d, seed);
  const Vector x = make_direction(d, DirectionMode::sparse, f.s, NormKind::l1, seed);
  Vector y = phi.matrix() * x;
  CounterRng rng(derive_key(seed, Stream::noise));
  for (Eigen::Index j = 0; j < m; ++j) y[j] += sigma * rng.normal();

  SolveOptions opts;
  opts.tol = f.tol;
  SolveReport rep;
  if (f.solver == "l1-eq") {
    rep = solve_l1_eq(phi.matrix(), y, opts);
  } else if (f.solver == "qc") {
    rep = solve_l1_qc(phi.matrix(), y, f.eta, opts);
  } else {
    rep = solve_dantzig(phi.matrix(), y, f.thresh, opts);
  }
  out << "solver=" << f.solver << " converged=" << (rep.converged ? 1 : 0) << " iterations=" << rep.iterations
      << " objective=" << format_double(rep.objective()) << " residual=" << format_double(rep.residual)
      << " err_l1=" << format_double((rep.solution - x).lpNorm<1>()) << '\n';
  if (!rep.converged) throw SolverFailure("solve: solver did not converge");
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging();
  CLI::App app{"Recovery of ridge and translated radial functions from point queries"};
  app.name(args.empty() ? "ridgerec" : args.front());
  app.set_help_flag("--help", "print this help and exit");
  app.set_config("--config", "", "read flags from an INI or TOML file");
  app.require_subcommand(1);

  Flags f;
  const std::vector<std::pair<std::string, Algo>> algos{
      {"algo-a", Algo::A}, {"algo-b", Algo::B}, {"algo-c", Algo::C},
      {"algo-d", Algo::D}, {"algo-d-cs", Algo::D_cs}, {"algo-d-noisy", Algo::D_noisy}};
  std::vector<std::pair<CLI::App*, Algo>> algo_cmds;
  for (const auto& [name, algo] : algos) {
    auto* sub = app.add_subcommand(name, "run Algorithm " + std::string(to_string(algo)) + " over a grid");
    add_algo_flags(sub, f, algo);
    algo_cmds.emplace_back(sub, algo);
  }
  std::vector<CLI::App*> repro_cmds;
  for (int fig = 1; fig <= 4; ++fig) {
    auto* sub = app.add_subcommand("repro-fig" + std::to_string(fig), "reproduce figure " + std::to_string(fig));
    sub->add_option("--out", f.out, "summary CSV (default figN.csv)");
    sub->add_option("--records", f.records, "also write the trial records here");
    sub->add_flag("--full", f.full, "paper-scale grid including d = 10000");
    add_run_flags(sub, f);
    repro_cmds.push_back(sub);
  }
  auto* rip = app.add_subcommand("rip-check", "restricted isometry constants of a Bernoulli matrix");
  rip->add_option("--m", f.m, "rows")->required()->check(CLI::PositiveNumber);
  rip->add_option("--dim", f.dim, "columns")->check(CLI::PositiveNumber);
  rip->add_option("--s", f.s, "largest order")->check(CLI::PositiveNumber);
  rip->add_option("--seed", f.seed, "matrix seed");
  auto* solve = app.add_subcommand("solve", "run a sparse solver on a random instance");
  solve->add_option("--solver", f.solver, "l1-eq, qc or dantzig")->check(CLI::IsMember({"l1-eq", "qc", "dantzig"}));
  solve->add_option("--m", f.m, "rows")->required()->check(CLI::PositiveNumber);
  solve->add_option("--dim", f.dim, "columns")->check(CLI::PositiveNumber);
  solve->add_option("--s", f.s, "sparsity")->check(CLI::PositiveNumber);
  solve->add_option("--sigma", f.sigma, "measurement noise")->check(CLI::NonNegativeNumber);
  solve->add_option("--eta", f.eta, "qc radius")->check(CLI::NonNegativeNumber);
  solve->add_option("--thresh", f.thresh, "Dantzig threshold")->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", f.seed, "instance seed");
  solve->add_option("--tol", f.tol, "solver tolerance")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("ridgerec");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    for (const auto& [sub, algo] : algo_cmds) {
      if (sub->parsed()) return run_algo(algo, f, out);
    }
    for (int fig = 1; fig <= 4; ++fig) {
      if (repro_cmds[static_cast<std::size_t>(fig - 1)]->parsed()) return run_repro(fig, f, out);
    }
    if (rip->parsed()) return run_rip(f, out);
    if (solve->parsed()) return run_solve(f, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace ridgerec
