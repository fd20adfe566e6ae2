#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

namespace ridgerec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Throws InputError when x is empty or has a non-finite entry.
void require_valid(const Vector& x, const char* what = "vector");

/// l_p (quasi-)norm for p in (0, inf), the support size for p == 0 and the
/// max-abs norm for p == inf.
double norm_lp(const Vector& x, double p);

/// Weak l_p quasi-norm: max_k k^{1/p} x_(k) over the non-increasing
/// rearrangement of |x|.
double norm_weak_lp(const Vector& x, double p);

/// sigma_s(x)_1: l1 distance from x to the nearest s-sparse vector.
double best_s_term_error(const Vector& x, Eigen::Index s);

/// Entrywise sign with sign(0) = 0.
Vector sign_vec(const Vector& x);

/// max{ sqrt(m) |y|_inf, sqrt(m / log(d/m)) |y|_2 } with m = y.size().
double norm_J(const Vector& y, Eigen::Index d);

/// Normalized Bernoulli matrix: every entry is +-1/sqrt(m), drawn from a
/// counter-based stream keyed by the seed.
class SensingMatrix {
 public:
  static SensingMatrix bernoulli(Eigen::Index m, Eigen::Index d, std::uint64_t seed);

  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const Matrix& matrix() const noexcept { return entries_; }
  Vector row(Eigen::Index j) const { return entries_.row(j).transpose(); }

 private:
  SensingMatrix(Matrix entries, std::uint64_t seed) : entries_(std::move(entries)), seed_(seed) {}

  Matrix entries_;
  std::uint64_t seed_;
};

struct RipEstimate {
  Eigen::Index order = 0;
  double delta = 0.0;
  bool exact = false;
};

inline constexpr std::uint64_t kRipWorkLimit = 1'000'000;

/// Restricted isometry constant of order s by enumerating every support of
/// size at most s. Throws InputError when the number of supports exceeds
/// work_limit.
RipEstimate rip_constant_exhaustive(const Matrix& phi, Eigen::Index s,
                                    std::uint64_t work_limit = kRipWorkLimit);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

}  // namespace ridgerec
