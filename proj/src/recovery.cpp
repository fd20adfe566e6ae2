#include "ridgerec/recovery.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace ridgerec {

double RecoveryResult::f_hat(const Vector& x) const {
  if (kind == ModelKind::radial_ball) return g_hat((a_hat - x).squaredNorm());
  return g_hat(a_hat.dot(x));
}

namespace {

void require_kind(const FunctionOracle& o, ModelKind kind, const char* algo) {
  if (o.kind() != kind) {
    throw InputError(std::string(algo) + ": needs a " + std::string(to_string(kind)) + " oracle");
  }
}

void require_step(double h, const char* algo) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError(std::string(algo) + ": h must be positive");
}

void require_noiseless(const FunctionOracle& o, const char* algo) {
  if (o.noise().sigma != 0.0) throw InputError(std::string(algo) + ": noiseless scheme, sigma must be 0");
}

void require_grid(const RecoveryOptions& opts) {
  if (opts.grid_size < 2) throw InputError("recovery: grid size must be >= 2");
  if (opts.sign_probes < 1) throw InputError("recovery: need at least one sign probe");
}

void require_m(Eigen::Index m, Eigen::Index d, const char* algo) {
  if (m < 1) throw InputError(std::string(algo) + ": m must be positive");
  if (m > d) throw InputError(std::string(algo) + ": m must not exceed d");
}

Vector normalized(const Vector& v, NormKind norm, const char* algo) {
  if (!v.allFinite()) throw DegenerateRecovery(std::string(algo) + ": non-finite direction estimate");
  const double n = norm == NormKind::l1 ? v.lpNorm<1>() : v.norm();
  if (n == 0.0) throw DegenerateRecovery(std::string(algo) + ": direction estimate vanished");
  return v / n;
}

void fill_errors(RecoveryResult& r, const FunctionOracle& o) {
  const Vector diff = r.a_hat - o.direction();
  r.direction_error_l1 = diff.lpNorm<1>();
  r.direction_error_l2 = diff.norm();
}

SolveReport require_converged(SolveReport report, const char* algo) {
  if (!report.converged) {
    throw SolverFailure(std::string(algo) + ": solver stopped at residual " + std::to_string(report.residual) +
                        " after " + std::to_string(report.iterations) + " iterations");
  }
  return report;
}

// g_hat(t) = f(t * along) on a uniform grid over [-1, 1].
LinearTable sample_ridge_profile(FunctionOracle& o, const Vector& along, std::size_t grid_size) {
  std::vector<double> nodes = LinearTable::uniform_nodes(-1.0, 1.0, grid_size);
  std::vector<double> values(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) values[k] = o(nodes[k] * along);
  return LinearTable(std::move(nodes), std::move(values));
}

// Samples of phi(s) = f(s * direction) on a uniform grid over [-1, 1]. Both
// sign candidates read their profile off these samples.
struct LineSamples {
  std::vector<double> s;
  std::vector<double> values;
};

LineSamples sample_line(FunctionOracle& o, const Vector& direction, std::size_t grid_size) {
  LineSamples line;
  line.s = LinearTable::uniform_nodes(-1.0, 1.0, grid_size);
  line.values.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) line.values[k] = o(line.s[k] * direction);
  return line;
}

// Radial profile table for candidate sign: g_hat(t) = phi(sign * (1 - sqrt t))
// on the nodes t_j = (2j / (T-1))^2, which are exactly the images of the
// line grid.
LinearTable radial_table(const LineSamples& line, double sign) {
  const std::size_t n = line.s.size();
  std::vector<double> nodes(n), values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = 2.0 * static_cast<double>(j) / static_cast<double>(n - 1);
    nodes[j] = r * r;
    values[j] = sign > 0.0 ? line.values[n - 1 - j] : line.values[j];
  }
  nodes.back() = 4.0;
  return LinearTable(std::move(nodes), std::move(values));
}

struct SignChoice {
  double sign = 1.0;
};

SignChoice choose_sign(FunctionOracle& o, const Vector& a_hat, const LineSamples& line, int probes,
                       std::uint64_t seed) {
  const LinearTable plus = radial_table(line, 1.0);
  const LinearTable minus = radial_table(line, -1.0);
  double mse_plus = 0.0;
  double mse_minus = 0.0;
  const std::uint64_t probe_key = derive_key(seed, Stream::probes);
  for (int k = 0; k < probes; ++k) {
    const Vector x = random_ball_point(o.dim(), derive_key(probe_key, {static_cast<std::uint64_t>(k)}));
    const double fx = o(x);
    const double ep = fx - plus((a_hat - x).squaredNorm());
    const double em = fx - minus((a_hat + x).squaredNorm());
    mse_plus += ep * ep;
    mse_minus += em * em;
  }
  mse_plus /= probes;
  mse_minus /= probes;
  SignChoice c;
  // NaN mismatches (probe on a singular sample) fall through to the + branch.
  if (mse_minus < mse_plus - 1e-12) c.sign = -1.0;
  return c;
}

// Shared tail of the radial algorithms: normalize, resolve the sign, build
// g_hat from the line through the resolved direction.
RecoveryResult finish_radial(FunctionOracle& o, const Vector& a_tilde, double h, std::uint64_t seed,
                             const RecoveryOptions& opts, const char* algo) {
  RecoveryResult r;
  r.kind = ModelKind::radial_ball;
  r.h = h;
  const Vector unsigned_hat = normalized(a_tilde, NormKind::l2, algo);
  r.direction_error_l2_unsigned =
      std::min((unsigned_hat - o.direction()).norm(), (unsigned_hat + o.direction()).norm());
  const LineSamples line = sample_line(o, unsigned_hat, opts.grid_size);
  const SignChoice choice = choose_sign(o, unsigned_hat, line, opts.sign_probes, seed);
  r.a_hat = choice.sign * unsigned_hat;
  r.g_hat = radial_table(line, choice.sign);
  return r;
}

Vector central_differences_coordinates(FunctionOracle& o, double h) {
  const auto d = o.dim();
  Vector a_tilde(d);
  Vector x = Vector::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    x[i] = h / 2.0;
    const double fp = o(x);
    x[i] = -h / 2.0;
    const double fm = o(x);
    x[i] = 0.0;
    a_tilde[i] = (fp - fm) / h;
  }
  return a_tilde;
}

Vector central_differences_rows(FunctionOracle& o, const Matrix& phi, double h) {
  const auto m = phi.rows();
  Vector b(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Vector x = (h / 2.0) * phi.row(j).transpose();
    const double fp = o(x);
    const double fm = o(-x);
    b[j] = (fp - fm) / h;
  }
  return b;
}

void check_radial_cs_step(const FunctionOracle& o, Eigen::Index m, double h, const char* algo) {
  const double d = static_cast<double>(o.dim());
  const double limit = o.options().allow_exterior ? 2.0 * std::sqrt(static_cast<double>(m))
                                                  : 2.0 * std::sqrt(static_cast<double>(m) / d);
  if (h > limit * (1.0 + kDomainTolerance)) {
    throw InputError(std::string(algo) + ": h must not exceed " + std::to_string(limit) +
                     " so that the query points stay in the domain");
  }
}

}  // namespace

RecoveryResult algo_a(FunctionOracle& o, double h, const RecoveryOptions& opts) {
  constexpr const char* kName = "algo_a";
  require_kind(o, ModelKind::ridge_cube, kName);
  require_step(h, kName);
  require_noiseless(o, kName);
  require_grid(opts);
  if (h > 1.0) throw InputError("algo_a: h must not exceed 1 so that h e_i stays in the cube");

  const std::uint64_t q0 = o.queries();
  const auto d = o.dim();
  const double f0 = o.origin_value();
  Vector a_tilde(d);
  Vector x = Vector::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    x[i] = h;
    a_tilde[i] = (o(x) - f0) / h;
    x[i] = 0.0;
  }

  RecoveryResult r;
  r.kind = ModelKind::ridge_cube;
  r.h = h;
  r.a_hat = normalized(a_tilde, NormKind::l1, kName);
  r.g_hat = sample_ridge_profile(o, sign_vec(r.a_hat), opts.grid_size);
  r.queries_used = o.queries() - q0;
  fill_errors(r, o);
  return r;
}

RecoveryResult algo_b(FunctionOracle& o, Eigen::Index m, double h, std::uint64_t seed,
                      const RecoveryOptions& opts) {
  constexpr const char* kName = "algo_b";
  require_kind(o, ModelKind::ridge_cube, kName);
  require_step(h, kName);
  require_noiseless(o, kName);
  require_grid(opts);
  const auto d = o.dim();
  require_m(m, d, kName);
  if (h > std::sqrt(static_cast<double>(m)) * (1.0 + kDomainTolerance)) {
    throw InputError("algo_b: h must not exceed sqrt(m) so that h phi_j stays in the cube");
  }

  const std::uint64_t q0 = o.queries();
  const SensingMatrix phi = SensingMatrix::bernoulli(m, d, seed);
  const double f0 = o.origin_value();
  Vector b(m);
  for (Eigen::Index j = 0; j < m; ++j) b[j] = (o(h * phi.row(j)) - f0) / h;

  RecoveryResult r;
  r.kind = ModelKind::ridge_cube;
  r.h = h;
  r.solve = require_converged(solve_l1_eq(phi.matrix(), b, opts.solver), kName);
  r.a_hat = normalized(r.solve->solution, NormKind::l1, kName);
  r.g_hat = sample_ridge_profile(o, sign_vec(r.a_hat), opts.grid_size);
  r.queries_used = o.queries() - q0;
  fill_errors(r, o);
  return r;
}

RecoveryResult algo_c(FunctionOracle& o, Eigen::Index m, double h, std::uint64_t seed,
                      const RecoveryOptions& opts) {
  constexpr const char* kName = "algo_c";
  require_kind(o, ModelKind::ridge_ball, kName);
  require_step(h, kName);
  require_grid(opts);
  const auto d = o.dim();
  require_m(m, d, kName);
  const double limit = o.options().allow_exterior ? std::sqrt(static_cast<double>(m))
                                                  : std::sqrt(static_cast<double>(m) / static_cast<double>(d));
  if (h > limit * (1.0 + kDomainTolerance)) {
    throw InputError("algo_c: h must not exceed " + std::to_string(limit) +
                     " so that h phi_j stays in the domain");
  }

  const std::uint64_t q0 = o.queries();
  const SensingMatrix phi = SensingMatrix::bernoulli(m, d, seed);
  const double f0 = o.origin_value();
  Vector b(m);
  for (Eigen::Index j = 0; j < m; ++j) b[j] = (o(h * phi.row(j)) - f0) / h;

  const double lambda_d = std::sqrt(2.0 * std::log(static_cast<double>(d)));
  const double thresh = lambda_d * o.noise().sigma / h;
  RecoveryResult r;
  r.kind = ModelKind::ridge_ball;
  r.h = h;
  r.solve = require_converged(solve_dantzig(phi.matrix(), b, thresh, opts.solver), kName);
  r.a_hat = normalized(r.solve->solution, NormKind::l2, kName);
  r.g_hat = sample_ridge_profile(o, r.a_hat, opts.grid_size);
  r.queries_used = o.queries() - q0;
  fill_errors(r, o);
  return r;
}

RecoveryResult algo_d(FunctionOracle& o, double h, std::uint64_t seed, const RecoveryOptions& opts) {
  constexpr const char* kName = "algo_d";
  require_kind(o, ModelKind::radial_ball, kName);
  require_step(h, kName);
  require_noiseless(o, kName);
  require_grid(opts);
  if (h / 2.0 > 1.0) throw InputError("algo_d: h/2 must not exceed 1");

  const std::uint64_t q0 = o.queries();
  const Vector a_tilde = central_differences_coordinates(o, h);
  RecoveryResult r = finish_radial(o, a_tilde, h, seed, opts, kName);
  r.queries_used = o.queries() - q0;
  fill_errors(r, o);
  return r;
}

double radial_cs_eta(double c1, double radius, double h, Eigen::Index d, Eigen::Index m) {
  const double ht = 0.5 * h * std::sqrt(static_cast<double>(d) / static_cast<double>(m));
  return 2.0 * c1 * radius * (2.0 * radius * ht / std::sqrt(static_cast<double>(d)) + ht * ht);
}

double radial_cs_local_radius(double radius, double h, Eigen::Index d, Eigen::Index m) {
  const double ht = 0.5 * h * std::sqrt(static_cast<double>(d) / static_cast<double>(m));
  return 2.0 * radius * ht / std::sqrt(static_cast<double>(d)) + ht * ht;
}

RecoveryResult algo_d_cs(FunctionOracle& o, Eigen::Index m, double h, std::optional<double> radius,
                         Eigen::Index s, std::uint64_t seed, const RecoveryOptions& opts) {
  constexpr const char* kName = "algo_d_cs";
  require_kind(o, ModelKind::radial_ball, kName);
  require_step(h, kName);
  require_grid(opts);
  const auto d = o.dim();
  require_m(m, d, kName);
  check_radial_cs_step(o, m, h, kName);
  if (!radius && (s < 1 || s > d)) throw InputError("algo_d_cs: need 1 <= s <= d when R is not given");
  const double big_r = radius ? *radius : std::sqrt(static_cast<double>(s));
  if (!(big_r > 0.0) || !std::isfinite(big_r)) throw InputError("algo_d_cs: R must be positive");

  const std::uint64_t q0 = o.queries();
  const SensingMatrix phi = SensingMatrix::bernoulli(m, d, seed);
  const Vector b = central_differences_rows(o, phi.matrix(), h);
  const double eta = radial_cs_eta(o.profile().c1, big_r, h, d, m);
  spdlog::debug("algo_d_cs: eta = {} (|b| = {})", eta, b.norm());

  SolveReport rep = require_converged(solve_l1_qc(phi.matrix(), b, eta, opts.solver), kName);
  RecoveryResult r = finish_radial(o, rep.solution, h, seed, opts, kName);
  r.solve = std::move(rep);
  r.queries_used = o.queries() - q0;
  fill_errors(r, o);
  return r;
}

RecoveryResult algo_d_noisy(FunctionOracle& o, Eigen::Index m, double h, std::uint64_t seed,
                            const RecoveryOptions& opts) {
  constexpr const char* kName = "algo_d_noisy";
  require_kind(o, ModelKind::radial_ball, kName);
  require_step(h, kName);
  require_grid(opts);
  const auto d = o.dim();
  require_m(m, d, kName);
  check_radial_cs_step(o, m, h, kName);

  const std::uint64_t q0 = o.queries();
  const SensingMatrix phi = SensingMatrix::bernoulli(m, d, seed);
  const Vector b = central_differences_rows(o, phi.matrix(), h);
  const double lambda_d = std::sqrt(2.0 * std::log(static_cast<double>(d)));
  const double thresh = lambda_d * o.noise().sigma / h;

  SolveReport rep = require_converged(solve_dantzig(phi.matrix(), b, thresh, opts.solver), kName);
  RecoveryResult r = finish_radial(o, rep.solution, h, seed, opts, kName);
  r.solve = std::move(rep);
  r.queries_used = o.queries() - q0;
  fill_errors(r, o);
  return r;
}

Vector disambiguate_sign(FunctionOracle& o, const Vector& a_hat, int probes, std::uint64_t seed,
                         std::size_t grid_size) {
  require_kind(o, ModelKind::radial_ball, "disambiguate_sign");
  if (a_hat.size() != o.dim()) throw InputError("disambiguate_sign: dimension mismatch");
  if (std::abs(a_hat.norm() - 1.0) > 1e-10) throw InputError("disambiguate_sign: a_hat must be l2-normalized");
  if (probes < 1 || grid_size < 2) throw InputError("disambiguate_sign: need probes >= 1 and grid >= 2");
  const LineSamples line = sample_line(o, a_hat, grid_size);
  return choose_sign(o, a_hat, line, probes, seed).sign * a_hat;
}

double estimate_sup_error(const std::function<double(const Vector&)>& f_true, RecoveryResult& result,
                          std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("estimate_sup_error: n must be positive");
  const auto d = result.a_hat.size();
  const bool cube = result.kind == ModelKind::ridge_cube;
  const std::uint64_t key = derive_key(seed, Stream::sup_points);
  double worst = 0.0;
  auto visit = [&](const Vector& x) {
    const double e = std::abs(f_true(x) - result.f_hat(x));
    if (std::isnan(e)) {
      worst = std::numeric_limits<double>::quiet_NaN();
    } else if (!std::isnan(worst)) {
      worst = std::max(worst, e);
    }
  };
  const Vector extreme = cube ? sign_vec(result.a_hat) : result.a_hat;
  visit(extreme);
  visit(-extreme);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t pk = derive_key(key, {static_cast<std::uint64_t>(k)});
    visit(cube ? random_cube_point(d, pk) : random_ball_point(d, pk));
  }
  result.sup_error_estimate = worst;
  return worst;
}

}  // namespace ridgerec
