#pragma once

#include "ridgerec/interpolation.hpp"
#include "ridgerec/linalg.hpp"
#include "ridgerec/oracle.hpp"
#include "ridgerec/solvers.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace ridgerec {

struct RecoveryOptions {
  std::size_t grid_size = 1024;  // T, nodes of the profile table
  int sign_probes = 10;          // K, probe points for sign disambiguation
  SolveOptions solver;
};

/// Output of one recovery run. f_hat composes g_hat with the recovered
/// direction: g_hat(<a_hat, x>) for ridge models, g_hat(|a_hat - x|^2) for
/// translated radial ones.
struct RecoveryResult {
  ModelKind kind = ModelKind::ridge_cube;
  Vector a_hat;
  LinearTable g_hat;
  double h = 0.0;
  std::uint64_t queries_used = 0;

  // Diagnostics against the oracle's hidden direction.
  double direction_error_l1 = 0.0;
  double direction_error_l2 = 0.0;
  /// min(|a_hat - a|_2, |a_hat + a|_2) before the sign was resolved
  /// (radial algorithms only).
  std::optional<double> direction_error_l2_unsigned;
  std::optional<double> sup_error_estimate;
  std::optional<SolveReport> solve;

  double f_hat(const Vector& x) const;
};

/// Coordinate finite differences f(h e_i) - f(0) on the cube; l1 normalization.
RecoveryResult algo_a(FunctionOracle& oracle, double h, const RecoveryOptions& options = {});

/// Finite differences along Bernoulli rows, then basis pursuit.
RecoveryResult algo_b(FunctionOracle& oracle, Eigen::Index m, double h, std::uint64_t seed,
                      const RecoveryOptions& options = {});

/// Noisy differences on the ball, Dantzig selector with threshold
/// sqrt(2 log d) * sigma / h, l2 normalization.
RecoveryResult algo_c(FunctionOracle& oracle, Eigen::Index m, double h, std::uint64_t seed,
                      const RecoveryOptions& options = {});

/// Central differences f(h e_i / 2) - f(-h e_i / 2) for a translated radial
/// function; sign resolved by probing.
RecoveryResult algo_d(FunctionOracle& oracle, double h, std::uint64_t seed,
                      const RecoveryOptions& options = {});

/// Compressed variant: central differences along Bernoulli rows and the
/// (P1, eta) program with eta = 2 c1 R (2 R ht / sqrt(d) + ht^2),
/// ht = (h/2) sqrt(d/m). When radius is empty, R = sqrt(s).
RecoveryResult algo_d_cs(FunctionOracle& oracle, Eigen::Index m, double h, std::optional<double> radius,
                         Eigen::Index s, std::uint64_t seed, const RecoveryOptions& options = {});

/// Noise-aware compressed variant solved with the Dantzig selector.
RecoveryResult algo_d_noisy(FunctionOracle& oracle, Eigen::Index m, double h, std::uint64_t seed,
                            const RecoveryOptions& options = {});

/// eta of the compressed radial variant.
double radial_cs_eta(double c1, double radius, double h, Eigen::Index d, Eigen::Index m);

/// Half-width of the interval around 1 that |a -+ (h/2) phi_j|^2 can reach
/// when |a|_1 <= radius; recip constants must be local to it.
double radial_cs_local_radius(double radius, double h, Eigen::Index d, Eigen::Index m);

/// Returns +a_hat or -a_hat, whichever explains K random ball samples of f
/// better when the profile is read off along the candidate. Samples the line
/// through a_hat itself (grid_size + K queries). Ties within 1e-12 keep +a_hat.
Vector disambiguate_sign(FunctionOracle& oracle, const Vector& a_hat, int probes, std::uint64_t seed,
                         std::size_t grid_size = 1024);

/// max |f(x) - f_hat(x)| over n seeded random domain points plus the
/// extreme points +-sign(a_hat) (cube) or +-a_hat (ball). Stores the value
/// into result.sup_error_estimate.
double estimate_sup_error(const std::function<double(const Vector&)>& f_true, RecoveryResult& result,
                          std::size_t n, std::uint64_t seed);

}  // namespace ridgerec
