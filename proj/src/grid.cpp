#include "bobylev/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bobylev {

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 4) throw std::invalid_argument("grid needs >= 4 nodes");
  if (nodes_.front() <= 0.0) throw std::invalid_argument("grid needs r_min > 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i] <= nodes_[i - 1])
      throw std::invalid_argument("grid nodes must be strictly increasing");
  }
  log_nodes_.reserve(nodes_.size());
  for (double r : nodes_) log_nodes_.push_back(std::log(r));
}

std::shared_ptr<const RadialGrid> RadialGrid::make_log(double r_min, double r_max,
                                                       int n_log, int n_linear) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("bad range");
  if (n_log < 2) throw std::invalid_argument("n_log < 2");
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(n_log + std::max(0, n_linear)));
  const double la = std::log(r_min), lb = std::log(r_max);
  for (int i = 0; i < n_log; ++i)
    nodes.push_back(std::exp(la + (lb - la) * i / (n_log - 1)));
  if (n_linear > 0) {
    const double hi = std::min(10.0 * r_min, r_max);
    for (int i = 1; i <= n_linear; ++i)
      nodes.push_back(r_min + (hi - r_min) * i / (n_linear + 1.0));
  }
  std::sort(nodes.begin(), nodes.end());
  // Drop near-duplicates produced by the merge.
  std::vector<double> unique;
  unique.reserve(nodes.size());
  for (double r : nodes) {
    if (unique.empty() || r > unique.back() * (1.0 + 1e-12)) unique.push_back(r);
  }
  return std::make_shared<const RadialGrid>(std::move(unique));
}

std::shared_ptr<const RadialGrid> RadialGrid::solver_default() {
  return make_log(1e-4, 1e2, 256, 32);
}

std::size_t RadialGrid::locate(double r) const {
  if (r <= nodes_.front()) return 0;
  if (r >= nodes_.back()) return nodes_.size() - 2;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

bool RadialGrid::same_nodes(const RadialGrid& other) const {
  return this == &other || nodes_ == other.nodes_;
}

}  // namespace bobylev
