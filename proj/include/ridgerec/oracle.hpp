#pragma once

#include "ridgerec/linalg.hpp"
#include "ridgerec/profile.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace ridgerec {

enum class ModelKind { ridge_cube, ridge_ball, radial_ball };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct NoiseSpec {
  double sigma = 0.0;  // std of the additive Gaussian term on each query
  bool noiseless_origin = true;
  int origin_resamples = 1;
};

struct OracleOptions {
  /// Ball models accept any point of the circumscribing cube [-1, 1]^d.
  bool allow_exterior = false;
  /// Reject directions not normalized for the model (l1 for the cube, l2
  /// for the ball). Disabled only for representation-invariance studies.
  bool enforce_normalization = true;
};

inline constexpr double kDomainTolerance = 1e-9;

/// Black-box f(x) = g(<a, x>) or g(|a - x|^2) with additive query noise and a
/// query counter. Single-owner: one oracle per concurrent task.
class FunctionOracle {
 public:
  FunctionOracle(ModelKind kind, Vector direction, Profile profile, NoiseSpec noise,
                 std::uint64_t seed, OracleOptions options = {});

  /// Counted (and possibly noisy) evaluation. The noise on query q is a pure
  /// function of (seed, q); at x == 0 with noiseless_origin it is omitted.
  double operator()(const Vector& x);

  /// f(0) as the algorithms consume it: one exact read, or the mean of
  /// origin_resamples noisy reads when noiseless_origin is false.
  double origin_value();

  /// Noise-free, uncounted evaluation (ground truth for error estimates).
  double exact(const Vector& x) const;

  /// Throws DomainError when x lies outside the declared domain.
  void check_domain(const Vector& x) const;
  bool in_domain(const Vector& x) const;

  ModelKind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return direction_.size(); }
  const Vector& direction() const noexcept { return direction_; }
  const Profile& profile() const noexcept { return profile_; }
  const NoiseSpec& noise() const noexcept { return noise_; }
  const OracleOptions& options() const noexcept { return options_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t queries() const noexcept { return queries_; }

 private:
  ModelKind kind_;
  Vector direction_;
  Profile profile_;
  NoiseSpec noise_;
  std::uint64_t seed_;
  OracleOptions options_;
  std::uint64_t queries_ = 0;
};

enum class DirectionMode { dense_gaussian, sparse };
enum class NormKind { l1, l2 };

/// Random ridge direction: i.i.d. N(0,1) entries on all d coordinates
/// (dense) or on s uniformly chosen ones (sparse), then normalized.
Vector make_direction(Eigen::Index d, DirectionMode mode, Eigen::Index s, NormKind norm,
                      std::uint64_t seed);

/// Uniform point in the unit ball or the cube [-1, 1]^d.
Vector random_ball_point(Eigen::Index d, std::uint64_t key);
Vector random_cube_point(Eigen::Index d, std::uint64_t key);

}  // namespace ridgerec
