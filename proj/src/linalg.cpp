#include "ridgerec/linalg.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace ridgerec {

void require_valid(const Vector& x, const char* what) {
  if (x.size() == 0) throw InputError(std::string(what) + " must be non-empty");
  if (!x.allFinite()) throw InputError(std::string(what) + " has a non-finite entry");
}

double norm_lp(const Vector& x, double p) {
  require_valid(x);
  if (std::isnan(p) || p < 0.0) throw InputError("norm_lp: p must lie in [0, inf]");
  if (p == 0.0) return static_cast<double>((x.array() != 0.0).count());
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.lpNorm<1>();
  if (p == 2.0) return x.norm();
  double sum = 0.0;
  for (double v : x) sum += std::pow(std::abs(v), p);
  return std::pow(sum, 1.0 / p);
}

double norm_weak_lp(const Vector& x, double p) {
  require_valid(x);
  if (!(p > 0.0) || std::isinf(p)) throw InputError("norm_weak_lp: p must lie in (0, inf)");
  std::vector<double> mags(x.size());
  std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    best = std::max(best, std::pow(static_cast<double>(k + 1), 1.0 / p) * mags[k]);
  }
  return best;
}

double best_s_term_error(const Vector& x, Eigen::Index s) {
  require_valid(x);
  if (s < 0 || s > x.size()) throw InputError("best_s_term_error: need 0 <= s <= d");
  std::vector<double> mags(x.size());
  std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::abs(v); });
  const auto drop = static_cast<std::ptrdiff_t>(x.size() - s);
  std::nth_element(mags.begin(), mags.begin() + drop, mags.end());
  // Smallest-first summation of the discarded tail.
  std::sort(mags.begin(), mags.begin() + drop);
  return std::accumulate(mags.begin(), mags.begin() + drop, 0.0);
}

Vector sign_vec(const Vector& x) {
  return x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

double norm_J(const Vector& y, Eigen::Index d) {
  require_valid(y, "y");
  const auto m = y.size();
  if (d <= m) throw InputError("norm_J: requires d > m");
  const double md = static_cast<double>(m);
  const double log_ratio = std::log(static_cast<double>(d) / md);
  return std::max(std::sqrt(md) * y.cwiseAbs().maxCoeff(), std::sqrt(md / log_ratio) * y.norm());
}

SensingMatrix SensingMatrix::bernoulli(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw InputError("bernoulli_matrix: m and d must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix entries(m, d);
  CounterRng rng(derive_key(seed, Stream::matrix));
  std::uint64_t bits = 0;
  int remaining = 0;
  double* data = entries.data();
  for (Eigen::Index k = 0; k < m * d; ++k) {
    if (remaining == 0) {
      bits = rng.next_u64();
      remaining = 64;
    }
    data[k] = (bits & 1U) ? scale : -scale;
    bits >>= 1;
    --remaining;
  }
  return SensingMatrix(std::move(entries), seed);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

RipEstimate rip_constant_exhaustive(const Matrix& phi, Eigen::Index s, std::uint64_t work_limit) {
  const auto d = phi.cols();
  if (phi.size() == 0 || !phi.allFinite()) throw InputError("rip: matrix must be finite and non-empty");
  if (s < 1 || s > d) throw InputError("rip: need 1 <= s <= d");
  std::uint64_t subsets = 0;
  for (Eigen::Index k = 1; k <= s; ++k) {
    const std::uint64_t c = binomial(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(k));
    subsets = c > UINT64_MAX - subsets ? UINT64_MAX : subsets + c;
  }
  if (subsets > work_limit) {
    throw InputError("rip: " + std::to_string(subsets) + " supports of size <= " + std::to_string(s) +
                     " exceed the work limit");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  double delta = 0.0;
  for (Eigen::Index k = 1; k <= s; ++k) {
    std::vector<Eigen::Index> support(static_cast<std::size_t>(k));
    std::iota(support.begin(), support.end(), Eigen::Index{0});
    Matrix cols(phi.rows(), k);
    while (true) {
      for (Eigen::Index j = 0; j < k; ++j) cols.col(j) = phi.col(support[static_cast<std::size_t>(j)]);
      eig.compute(cols.transpose() * cols, Eigen::EigenvaluesOnly);
      const auto& ev = eig.eigenvalues();
      delta = std::max({delta, ev.maxCoeff() - 1.0, 1.0 - ev.minCoeff()});

      // Advance to the next combination in lexicographic order.
      Eigen::Index i = k - 1;
      while (i >= 0 && support[static_cast<std::size_t>(i)] == d - k + i) --i;
      if (i < 0) break;
      ++support[static_cast<std::size_t>(i)];
      for (Eigen::Index j = i + 1; j < k; ++j) {
        support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return RipEstimate{s, delta, true};
}

}  // namespace ridgerec
