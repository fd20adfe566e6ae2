#include "ridgerec/experiment.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace ridgerec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool uses_l1(Algo algo) { return algo == Algo::A || algo == Algo::B; }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (n - 1));
  return out;
}

std::vector<Eigen::Index> int_range(Eigen::Index lo, Eigen::Index hi, Eigen::Index step) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

}  // namespace

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::A: return "A";
    case Algo::B: return "B";
    case Algo::C: return "C";
    case Algo::D: return "D";
    case Algo::D_cs: return "D-cs";
    case Algo::D_noisy: return "D-noisy";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  const std::string n = lower(name);
  if (n == "a") return Algo::A;
  if (n == "b") return Algo::B;
  if (n == "c") return Algo::C;
  if (n == "d") return Algo::D;
  if (n == "d-cs") return Algo::D_cs;
  if (n == "d-noisy") return Algo::D_noisy;
  throw InputError("unknown algorithm '" + std::string(name) + "'");
}

ModelKind model_of(Algo algo) {
  switch (algo) {
    case Algo::A:
    case Algo::B: return ModelKind::ridge_cube;
    case Algo::C: return ModelKind::ridge_ball;
    default: return ModelKind::radial_ball;
  }
}

bool uses_measurements(Algo algo) { return algo != Algo::A && algo != Algo::D; }

void validate(const ExperimentConfig& cfg) {
  if (cfg.d_grid.empty() && cfg.dm_pairs.empty()) throw InputError("config: d grid is empty");
  if (uses_measurements(cfg.algo) && cfg.m_grid.empty() && cfg.dm_pairs.empty()) {
    throw InputError("config: m grid is empty");
  }
  if (cfg.h_grid.empty()) throw InputError("config: h grid is empty");
  if (cfg.sigma_grid.empty()) throw InputError("config: sigma grid is empty");
  if (cfg.trials < 1) throw InputError("config: trials must be >= 1");
  const auto& names = profile_names();
  if (std::find(names.begin(), names.end(), cfg.profile) == names.end()) {
    throw InputError("config: unknown profile '" + cfg.profile + "'");
  }
  for (double h : cfg.h_grid) {
    if (!std::isfinite(h)) throw InputError("config: h values must be finite");
  }
  for (double s : cfg.sigma_grid) {
    if (!std::isfinite(s)) throw InputError("config: sigma values must be finite");
  }
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> dm = cfg.dm_pairs;
  if (dm.empty()) {
    for (Eigen::Index d : cfg.d_grid) {
      if (uses_measurements(cfg.algo)) {
        for (Eigen::Index m : cfg.m_grid) dm.emplace_back(d, m);
      } else {
        dm.emplace_back(d, 0);
      }
    }
  }
  std::vector<GridPoint> out;
  for (const auto& [d, m] : dm) {
    for (double h : cfg.h_grid) {
      for (double sigma : cfg.sigma_grid) {
        out.push_back({d, uses_measurements(cfg.algo) ? m : 0, h, sigma});
      }
    }
  }
  return out;
}

bool TrialRecord::failed() const { return std::isnan(err_l1) || std::isnan(err_l2); }

namespace {

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

bool operator==(const TrialRecord& a, const TrialRecord& b) {
  return a.algo == b.algo && a.d == b.d && a.m == b.m && a.s == b.s && same_double(a.h, b.h) &&
         same_double(a.sigma, b.sigma) && a.trial == b.trial && a.seed == b.seed &&
         same_double(a.err_l1, b.err_l1) && same_double(a.err_l2, b.err_l2) &&
         same_double(a.sup_err, b.sup_err) && a.queries == b.queries && same_double(a.wall_ms, b.wall_ms);
}

bool operator==(const SummaryRow& a, const SummaryRow& b) {
  return a.algo == b.algo && a.profile == b.profile && a.d == b.d && a.m == b.m && a.s == b.s &&
         same_double(a.h, b.h) && same_double(a.sigma, b.sigma) && a.trials == b.trials &&
         a.failures == b.failures && same_double(a.mean_err_l1, b.mean_err_l1) &&
         same_double(a.median_err_l1, b.median_err_l1) && same_double(a.mean_err_l2, b.mean_err_l2) &&
         same_double(a.median_err_l2, b.median_err_l2) && same_double(a.mean_sup_err, b.mean_sup_err) &&
         same_double(a.success_rate, b.success_rate) && same_double(a.mean_queries, b.mean_queries);
}

namespace {

double profile_radius(const ExperimentConfig& cfg, const GridPoint& p) {
  if (cfg.profile != "recip") return 0.0;
  switch (cfg.algo) {
    case Algo::D: return radial_local_radius(p.h);
    case Algo::D_cs: {
      const double r = cfg.radius ? *cfg.radius : std::sqrt(static_cast<double>(cfg.s));
      return radial_cs_local_radius(r, p.h, p.d, p.m);
    }
    default: return 0.0;
  }
}

RecoveryResult dispatch_algo(const ExperimentConfig& cfg, const GridPoint& p, FunctionOracle& o,
                             std::uint64_t seed) {
  switch (cfg.algo) {
    case Algo::A: return algo_a(o, p.h, cfg.recovery);
    case Algo::B: return algo_b(o, p.m, p.h, seed, cfg.recovery);
    case Algo::C: return algo_c(o, p.m, p.h, seed, cfg.recovery);
    case Algo::D: return algo_d(o, p.h, seed, cfg.recovery);
    case Algo::D_cs: return algo_d_cs(o, p.m, p.h, cfg.radius, cfg.s, seed, cfg.recovery);
    case Algo::D_noisy: return algo_d_noisy(o, p.m, p.h, seed, cfg.recovery);
  }
  throw InputError("unknown algorithm");
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, const GridPoint& p, int trial, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.algo = cfg.algo;
  rec.d = p.d;
  rec.m = p.m;
  rec.s = uses_measurements(cfg.algo) ? cfg.s : 0;
  rec.h = p.h;
  rec.sigma = p.sigma;
  rec.trial = trial;
  rec.seed = seed;

  std::optional<FunctionOracle> oracle;
  try {
    const bool sparse = uses_measurements(cfg.algo);
    const Vector a = make_direction(p.d, sparse ? DirectionMode::sparse : DirectionMode::dense_gaussian,
                                    cfg.s, uses_l1(cfg.algo) ? NormKind::l1 : NormKind::l2, seed);
    ProfileParams params;
    params.local_radius = profile_radius(cfg, p);
    OracleOptions oopts;
    oopts.allow_exterior = cfg.allow_exterior;
    NoiseSpec noise;
    noise.sigma = p.sigma;
    oracle.emplace(model_of(cfg.algo), a, make_profile(cfg.profile, params), noise, seed, oopts);

    RecoveryResult r = dispatch_algo(cfg, p, *oracle, seed);
    rec.err_l1 = r.direction_error_l1;
    rec.err_l2 = r.direction_error_l2;
    rec.queries = r.queries_used;
    if (cfg.sup_error_points > 0) {
      const FunctionOracle& o = *oracle;
      rec.sup_err = estimate_sup_error([&o](const Vector& x) { return o.exact(x); }, r, cfg.sup_error_points, seed);
    } else {
      rec.sup_err = kNaN;
    }
  } catch (const InputError& e) {
    spdlog::debug("{} d={} m={} h={} sigma={}: invalid ({})", to_string(cfg.algo), p.d, p.m, p.h, p.sigma,
                  e.what());
    rec.err_l1 = rec.err_l2 = rec.sup_err = kNaN;
    rec.queries = 0;
  } catch (const DegenerateRecovery& e) {
    spdlog::debug("{} trial {}: {}", to_string(cfg.algo), trial, e.what());
    rec.err_l1 = oracle->direction().lpNorm<1>();
    rec.err_l2 = oracle->direction().norm();
    rec.sup_err = kNaN;
    rec.queries = oracle->queries();
  } catch (const SolverFailure& e) {
    spdlog::warn("{} trial {}: {}", to_string(cfg.algo), trial, e.what());
    rec.err_l1 = rec.err_l2 = rec.sup_err = kNaN;
    rec.queries = oracle ? oracle->queries() : 0;
  }
  if (cfg.record_time) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

std::vector<TrialRecord> run_grid(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::vector<GridPoint> grid = expand_grid(cfg);
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t total = grid.size() * trials;
  std::vector<TrialRecord> out(total);

  unsigned jobs = cfg.jobs != 0 ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(total, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const std::size_t g = k / trials;
      const std::size_t t = k % trials;
      try {
        const std::uint64_t seed = derive_key(cfg.master_seed, {g, t});
        out[k] = run_trial(cfg, grid[g], static_cast<int>(t), seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool same_point(const TrialRecord& a, const TrialRecord& b) {
  return a.algo == b.algo && a.d == b.d && a.m == b.m && a.s == b.s && same_double(a.h, b.h) &&
         same_double(a.sigma, b.sigma);
}

SummaryRow reduce(const TrialRecord* first, const TrialRecord* last, std::string_view profile, double threshold) {
  SummaryRow row;
  row.algo = first->algo;
  row.profile = std::string(profile);
  row.d = first->d;
  row.m = first->m;
  row.s = first->s;
  row.h = first->h;
  row.sigma = first->sigma;
  std::vector<double> l1, l2, sup, queries;
  int successes = 0;
  for (const TrialRecord* r = first; r != last; ++r) {
    ++row.trials;
    if (r->failed()) {
      ++row.failures;
      continue;
    }
    l1.push_back(r->err_l1);
    l2.push_back(r->err_l2);
    if (!std::isnan(r->sup_err)) sup.push_back(r->sup_err);
    queries.push_back(static_cast<double>(r->queries));
    const double primary = uses_l1(r->algo) ? r->err_l1 : r->err_l2;
    if (primary < threshold) ++successes;
  }
  row.mean_err_l1 = mean_of(l1);
  row.median_err_l1 = median_of(l1);
  row.mean_err_l2 = mean_of(l2);
  row.median_err_l2 = median_of(l2);
  row.mean_sup_err = mean_of(sup);
  row.mean_queries = mean_of(queries);
  row.success_rate = static_cast<double>(successes) / static_cast<double>(row.trials);
  return row;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, std::string_view profile,
                                  double threshold) {
  if (records.empty()) throw InputError("summarize: no records");
  std::vector<SummaryRow> rows;
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= records.size(); ++k) {
    if (k == records.size() || !same_point(records[begin], records[k])) {
      rows.push_back(reduce(records.data() + begin, records.data() + k, profile, threshold));
      begin = k;
    }
  }
  return rows;
}

std::vector<ExperimentConfig> repro_configs(int figure, std::uint64_t seed, bool full) {
  std::vector<ExperimentConfig> out;
  ExperimentConfig base;
  base.master_seed = seed;
  base.trials = 120;
  switch (figure) {
    case 1: {
      base.algo = Algo::A;
      base.d_grid = {10, 100, 1000};
      if (full) base.d_grid.push_back(10000);
      base.h_grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
      for (const char* profile : {"tanh", "tanh-shift"}) {
        ExperimentConfig c = base;
        c.profile = profile;
        out.push_back(c);
      }
      break;
    }
    case 2: {
      base.algo = Algo::B;
      base.profile = "tanh-shift";
      base.s = 5;
      base.h_grid = {0.1};
      base.d_grid = full ? int_range(50, 1000, 1) : int_range(50, 1000, 50);
      base.m_grid = full ? int_range(1, 55, 1) : int_range(1, 55, 3);
      out.push_back(base);
      break;
    }
    case 3: {
      base.algo = Algo::C;
      base.profile = "tanh-shift";
      base.s = 5;
      base.d_grid = {1000};
      base.m_grid = {400};
      base.sigma_grid = {0.03, 0.01, 0.003, 0.001};
      base.h_grid = log_grid(1e-3, 10.0, 13);
      base.allow_exterior = true;
      out.push_back(base);
      break;
    }
    case 4: {
      ExperimentConfig left = base;
      left.algo = Algo::D_cs;
      left.profile = "recip";
      left.s = 5;
      left.dm_pairs = {{100, 40}, {1000, 60}};
      if (full) left.dm_pairs.emplace_back(10000, 80);
      left.h_grid = log_grid(5e-3, 0.4, 10);
      out.push_back(left);

      ExperimentConfig right = base;
      right.algo = Algo::D_noisy;
      right.profile = "recip";
      right.s = 5;
      right.d_grid = {500};
      right.m_grid = {100};
      right.sigma_grid = {0.01};
      right.h_grid = log_grid(1e-3, 0.8, 12);
      out.push_back(right);
      break;
    }
    default: throw InputError("repro: figure must be 1, 2, 3 or 4");
  }
  return out;
}

}  // namespace ridgerec
