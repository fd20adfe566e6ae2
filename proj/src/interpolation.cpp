#include "ridgerec/interpolation.hpp"

#include "ridgerec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ridgerec {

LinearTable::LinearTable(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size()) {
    throw InputError("LinearTable: need >= 2 nodes with one value each");
  }
  if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
      std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw InputError("LinearTable: nodes must be strictly increasing");
  }
  const double step = (nodes_.back() - nodes_.front()) / static_cast<double>(nodes_.size() - 1);
  uniform_ = true;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (std::abs(nodes_[k] - (nodes_.front() + step * static_cast<double>(k))) > 1e-12 * (1.0 + std::abs(nodes_[k]))) {
      uniform_ = false;
      break;
    }
  }
}

std::vector<double> LinearTable::uniform_nodes(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw InputError("uniform_nodes: need n >= 2 and hi > lo");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + step * static_cast<double>(k);
  out.back() = hi;
  return out;
}

double LinearTable::operator()(double t) const {
  if (t <= nodes_.front()) return values_.front();
  if (t >= nodes_.back()) return values_.back();
  std::size_t k;
  if (uniform_) {
    const double step = (nodes_.back() - nodes_.front()) / static_cast<double>(nodes_.size() - 1);
    k = std::min(static_cast<std::size_t>((t - nodes_.front()) / step), nodes_.size() - 2);
    if (t < nodes_[k]) --k;
    else if (t > nodes_[k + 1]) ++k;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(nodes_.begin(), nodes_.end(), t) - nodes_.begin()) - 1;
  }
  const double w = (t - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
  // Zero weights skip their node so a singular end value cannot leak in.
  if (w <= 0.0) return values_[k];
  if (w >= 1.0) return values_[k + 1];
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

}  // namespace ridgerec
