#include "ridgerec/oracle.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/rng.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace ridgerec {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ridge_cube: return "ridge-cube";
    case ModelKind::ridge_ball: return "ridge-ball";
    case ModelKind::radial_ball: return "radial-ball";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "ridge-cube") return ModelKind::ridge_cube;
  if (name == "ridge-ball") return ModelKind::ridge_ball;
  if (name == "radial-ball") return ModelKind::radial_ball;
  throw InputError("unknown model kind '" + std::string(name) + "'");
}

FunctionOracle::FunctionOracle(ModelKind kind, Vector direction, Profile profile, NoiseSpec noise,
                               std::uint64_t seed, OracleOptions options)
    : kind_(kind),
      direction_(std::move(direction)),
      profile_(std::move(profile)),
      noise_(noise),
      seed_(seed),
      options_(options) {
  require_valid(direction_, "direction");
  if (!profile_.eval) throw InputError("oracle: profile has no evaluator");
  if (!(noise_.sigma >= 0.0) || !std::isfinite(noise_.sigma)) throw InputError("oracle: sigma must be >= 0");
  if (noise_.origin_resamples < 1) throw InputError("oracle: origin_resamples must be >= 1");
  if (options_.enforce_normalization) {
    const double n = kind_ == ModelKind::ridge_cube ? direction_.lpNorm<1>() : direction_.norm();
    if (std::abs(n - 1.0) > 1e-10) {
      throw InputError(std::string("oracle: direction must be ") +
                       (kind_ == ModelKind::ridge_cube ? "l1" : "l2") + "-normalized");
    }
  }
}

bool FunctionOracle::in_domain(const Vector& x) const {
  if (x.size() != direction_.size() || !x.allFinite()) return false;
  const bool cube = kind_ == ModelKind::ridge_cube || options_.allow_exterior;
  const double n = cube ? x.cwiseAbs().maxCoeff() : x.norm();
  return n <= 1.0 + kDomainTolerance;
}

void FunctionOracle::check_domain(const Vector& x) const {
  if (x.size() != direction_.size()) throw InputError("oracle: dimension mismatch");
  if (!in_domain(x)) {
    throw DomainError(std::string("oracle: query outside the ") +
                      (kind_ == ModelKind::ridge_cube || options_.allow_exterior ? "cube" : "unit ball"));
  }
}

double FunctionOracle::exact(const Vector& x) const {
  check_domain(x);
  if (kind_ == ModelKind::radial_ball) return profile_.eval((direction_ - x).squaredNorm());
  return profile_.eval(direction_.dot(x));
}

double FunctionOracle::operator()(const Vector& x) {
  const double value = exact(x);
  const std::uint64_t index = queries_++;
  if (noise_.sigma == 0.0) return value;
  if (noise_.noiseless_origin && x.isZero(0.0)) return value;
  CounterRng rng(derive_key(seed_, {static_cast<std::uint64_t>(Stream::noise), index}));
  return value + noise_.sigma * rng.normal();
}

double FunctionOracle::origin_value() {
  const Vector zero = Vector::Zero(direction_.size());
  if (noise_.noiseless_origin || noise_.sigma == 0.0) return (*this)(zero);
  double sum = 0.0;
  for (int k = 0; k < noise_.origin_resamples; ++k) sum += (*this)(zero);
  return sum / noise_.origin_resamples;
}

Vector make_direction(Eigen::Index d, DirectionMode mode, Eigen::Index s, NormKind norm, std::uint64_t seed) {
  if (d < 1) throw InputError("make_direction: d must be positive");
  if (mode == DirectionMode::sparse && (s < 1 || s > d)) throw InputError("make_direction: need 1 <= s <= d");
  CounterRng rng(derive_key(seed, Stream::direction));
  Vector a = Vector::Zero(d);
  while (a.isZero(0.0)) {
    if (mode == DirectionMode::dense_gaussian) {
      for (Eigen::Index i = 0; i < d; ++i) a[i] = rng.normal();
    } else {
      // Partial Fisher-Yates picks the support.
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      for (Eigen::Index k = 0; k < s; ++k) {
        const auto j = k + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(d - k)));
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
        a[idx[static_cast<std::size_t>(k)]] = rng.normal();
      }
    }
  }
  const double n = norm == NormKind::l1 ? a.lpNorm<1>() : a.norm();
  return a / n;
}

Vector random_ball_point(Eigen::Index d, std::uint64_t key) {
  CounterRng rng(key);
  Vector x(d);
  do {
    for (Eigen::Index i = 0; i < d; ++i) x[i] = rng.normal();
  } while (x.isZero(0.0));
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return x * (radius / x.norm());
}

Vector random_cube_point(Eigen::Index d, std::uint64_t key) {
  CounterRng rng(key);
  Vector x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = 2.0 * rng.uniform() - 1.0;
  return x;
}

}  // namespace ridgerec
