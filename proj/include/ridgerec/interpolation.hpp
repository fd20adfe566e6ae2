#pragma once

#include <cstddef>
#include <vector>

namespace ridgerec {

/// Piecewise-linear interpolant through sorted nodes. Outside the node range
/// the end values are held constant.
class LinearTable {
 public:
  LinearTable() = default;
  LinearTable(std::vector<double> nodes, std::vector<double> values);

  /// n >= 2 uniform nodes on [lo, hi].
  static std::vector<double> uniform_nodes(double lo, double hi, std::size_t n);

  double operator()(double t) const;

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  bool uniform_ = false;
};

}  // namespace ridgerec
