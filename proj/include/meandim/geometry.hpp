#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "meandim/common.hpp"

namespace meandim {

// Metric on [0,1]^n.  Three families are supported:
//   LInfinity            max_i |x_i - y_i|
//   LpNormalized(p)      ((1/n) sum_i |x_i - y_i|^p)^(1/p), p >= 1
//   TauTruncated(r)      sum_{|i| <= r} 2^{-|i|} |x_{j+i} - y_{j+i}| read on the
//                        window with both tails clipped to the available
//                        coordinates, centered at coordinate 0
struct Metric {
  enum class Kind { LInfinity, LpNormalized, TauTruncated };

  Kind kind = Kind::LInfinity;
  double p = 1.0;  // LpNormalized only
  int radius = 0;  // TauTruncated only

  static Metric linf() { return Metric{Kind::LInfinity, 1.0, 0}; }
  static Metric lp(double p_value);
  static Metric tau_truncated(int radius_value);
};

// Distance between two points of equal dimension.  Throws config_error on a
// dimension mismatch or an invalid metric parameter.
double distance(const Point& x, const Point& y, const Metric& m);

// A finite list of points of equal dimension with the metric used to compare
// them.
struct PointCloud {
  std::vector<Point> points;
  Metric metric;

  PointCloud(std::vector<Point> pts, Metric m);
  std::size_t size() const { return points.size(); }
  std::size_t dimension() const { return points.front().size(); }
};

// Minimum number of clusters of pairwise distance < eps needed to cover the
// cloud, by branch-and-bound over maximal clusters.  Throws cap_exceeded when
// the cloud is larger than `cap` points.
std::size_t covering_number_exact(const PointCloud& cloud, double eps,
                                  std::size_t cap = kExactCoverCap);

// Upper bound on covering_number_exact: grows one cluster at a time from the
// first uncovered point, adding nearest compatible points first.  Always
// defined; deterministic.
std::size_t covering_number_greedy(const PointCloud& cloud, double eps);

// Size of the eps-separated subset produced by a greedy sweep in point order
// (pairwise distances >= eps, up to the strict-comparison slack).
std::size_t packing_number(const PointCloud& cloud, double eps);

// Number of occupied cells when the cloud is binned into axis-aligned boxes
// of side eps (cells_per_axis = ceil(1/eps) per axis).
std::size_t grid_box_count(const PointCloud& cloud, double eps);

// Regular partition of [0,1]^k into ceil(1/eps)^k congruent cells with the
// map taking a point to its cell center.  Cells are half-open per axis with
// the last cell closed, so every point belongs to exactly one cell.
struct Quantizer {
  std::size_t k = 1;
  double eps = 1.0;
  std::uint64_t cells_per_axis = 1;

  // Per-axis cell index of x, in [0, cells_per_axis).
  std::vector<std::uint64_t> cell_index(const Point& x) const;
  // Center of the cell containing x; satisfies ||x - center(x)||_inf <= eps/2.
  Point center(const Point& x) const;
  // Center of the cell with the given per-axis indices.
  Point center_of_cell(const std::vector<std::uint64_t>& idx) const;
};

Quantizer grid_center_quantizer(std::size_t k, double eps);

}  // namespace meandim
