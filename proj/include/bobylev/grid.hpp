#pragma once

#include <memory>
#include <vector>

namespace bobylev {

/**
 * Strictly increasing radial grid with r_min > 0.  Characteristic functions
 * live on a shared grid so that distances and collision sweeps can compare
 * values node by node; the region below r_min is covered by the analytic
 * near-origin anchor of RadialCharFn, not by nodes.
 */
class RadialGrid {
 public:
  explicit RadialGrid(std::vector<double> nodes);

  // n_log log-spaced nodes on [r_min, r_max] merged with n_linear uniform
  // nodes on [r_min, 10*r_min] (refinement where the anchor hands over).
  static std::shared_ptr<const RadialGrid> make_log(double r_min, double r_max,
                                                    int n_log, int n_linear = 0);

  // Solver default: 256 log-spaced nodes on [1e-4, 1e2] plus 32 linear
  // nodes near r_min.
  static std::shared_ptr<const RadialGrid> solver_default();

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& log_nodes() const { return log_nodes_; }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }
  std::size_t size() const { return nodes_.size(); }

  // Index of the interval [r_k, r_{k+1}] containing r (clamped to the ends).
  std::size_t locate(double r) const;

  bool same_nodes(const RadialGrid& other) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> log_nodes_;
};

}  // namespace bobylev
