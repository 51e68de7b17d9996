#include "meandim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace meandim {

Metric Metric::lp(double p_value) {
  if (!(p_value >= 1.0)) {
    throw config_error("Lp metric requires p >= 1, got " + std::to_string(p_value));
  }
  return Metric{Kind::LpNormalized, p_value, 0};
}

Metric Metric::tau_truncated(int radius_value) {
  if (radius_value < 0) {
    throw config_error("tau metric requires radius >= 0, got " +
                       std::to_string(radius_value));
  }
  return Metric{Kind::TauTruncated, 1.0, radius_value};
}

double distance(const Point& x, const Point& y, const Metric& m) {
  if (x.size() != y.size()) {
    throw config_error("distance: dimension mismatch (" + std::to_string(x.size()) +
                       " vs " + std::to_string(y.size()) + ")");
  }
  if (x.empty()) {
    throw config_error("distance: empty points");
  }
  const std::size_t n = x.size();
  switch (m.kind) {
    case Metric::Kind::LInfinity: {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - y[i]));
      return d;
    }
    case Metric::Kind::LpNormalized: {
      if (!(m.p >= 1.0)) throw config_error("Lp metric requires p >= 1");
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(x[i] - y[i]), m.p);
      return std::pow(s / static_cast<double>(n), 1.0 / m.p);
    }
    case Metric::Kind::TauTruncated: {
      if (m.radius < 0) throw config_error("tau metric requires radius >= 0");
      double s = 0.0;
      std::size_t top = std::min<std::size_t>(n - 1, static_cast<std::size_t>(m.radius));
      for (std::size_t i = 0; i <= top; ++i) {
        s += std::ldexp(std::abs(x[i] - y[i]), -static_cast<int>(i));
      }
      return s;
    }
  }
  throw config_error("distance: unknown metric kind");
}

PointCloud::PointCloud(std::vector<Point> pts, Metric m)
    : points(std::move(pts)), metric(m) {
  if (points.empty()) {
    throw config_error("PointCloud: empty point list");
  }
  const std::size_t dim = points.front().size();
  if (dim == 0) {
    throw config_error("PointCloud: zero-dimensional points");
  }
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw config_error("PointCloud: mixed dimensions");
    }
    for (double c : p) {
      if (!(c >= -1e-9 && c <= 1.0 + 1e-9)) {
        throw config_error("PointCloud: coordinate outside [0,1]: " +
                           std::to_string(c));
      }
    }
  }
}

namespace {

// Pairwise compatibility bitmasks: bit j of adj[i] is set when points i and j
// may share a cluster (distance strictly below eps).
std::vector<std::uint32_t> compatibility(const PointCloud& cloud, double eps) {
  const std::size_t n = cloud.size();
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = distance(cloud.points[i], cloud.points[j], cloud.metric);
      if (d < eps - kStrictSlack) {
        adj[i] |= (1u << j);
        adj[j] |= (1u << i);
      }
    }
  }
  return adj;
}

// Greedy independent-set size within `mask`: a lower bound on the number of
// clusters needed to cover the masked points.
std::size_t separated_lower_bound(std::uint32_t mask,
                                  const std::vector<std::uint32_t>& adj) {
  std::size_t count = 0;
  std::uint32_t remaining = mask;
  while (remaining) {
    int v = __builtin_ctz(remaining);
    ++count;
    remaining &= ~(1u << v);
    remaining &= ~adj[v];
  }
  return count;
}

void maximal_clusters_containing(int v, std::uint32_t r, std::uint32_t p,
                                 std::uint32_t x,
                                 const std::vector<std::uint32_t>& adj,
                                 std::vector<std::uint32_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  std::uint32_t px = p | x;
  int pivot = __builtin_ctz(px);
  std::uint32_t best_cover = p & adj[pivot];
  for (std::uint32_t scan = px; scan;) {
    int u = __builtin_ctz(scan);
    scan &= scan - 1;
    std::uint32_t cov = p & adj[u];
    if (__builtin_popcount(cov) > __builtin_popcount(best_cover)) {
      pivot = u;
      best_cover = cov;
    }
  }
  (void)v;
  std::uint32_t candidates = p & ~adj[pivot];
  while (candidates) {
    int u = __builtin_ctz(candidates);
    candidates &= candidates - 1;
    std::uint32_t bit = 1u << u;
    maximal_clusters_containing(v, r | bit, p & adj[u], x & adj[u], adj, out);
    p &= ~bit;
    x |= bit;
  }
}

struct CoverSearch {
  const std::vector<std::uint32_t>& adj;
  std::size_t best;

  void run(std::uint32_t uncovered, std::size_t used) {
    if (uncovered == 0) {
      best = std::min(best, used);
      return;
    }
    if (used + separated_lower_bound(uncovered, adj) >= best) {
      return;
    }
    int v = __builtin_ctz(uncovered);
    std::vector<std::uint32_t> clusters;
    maximal_clusters_containing(v, 1u << v, adj[v] & uncovered, 0, adj, clusters);
    for (std::uint32_t c : clusters) {
      run(uncovered & ~c, used + 1);
    }
  }
};

}  // namespace

std::size_t covering_number_exact(const PointCloud& cloud, double eps,
                                  std::size_t cap) {
  if (!(eps > 0.0)) {
    throw config_error("covering_number_exact: eps must be positive");
  }
  const std::size_t n = cloud.size();
  if (n > cap || n > 32) {
    throw cap_exceeded("covering_number_exact: cloud too large for exact search",
                       n, std::min<std::size_t>(cap, 32));
  }
  auto adj = compatibility(cloud, eps);
  std::uint32_t all = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
  CoverSearch search{adj, covering_number_greedy(cloud, eps)};
  search.run(all, 0);
  return search.best;
}

std::size_t covering_number_greedy(const PointCloud& cloud, double eps) {
  if (!(eps > 0.0)) {
    throw config_error("covering_number_greedy: eps must be positive");
  }
  const std::size_t n = cloud.size();
  std::vector<bool> covered(n, false);
  std::size_t clusters = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (covered[seed]) continue;
    ++clusters;
    std::vector<std::size_t> cluster{seed};
    covered[seed] = true;
    // Candidates join in order of distance from the seed (ties by index) and
    // are accepted only while the cluster stays pairwise below eps.
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (covered[j]) continue;
      double d = distance(cloud.points[seed], cloud.points[j], cloud.metric);
      if (d < eps - kStrictSlack) order.emplace_back(d, j);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [d_seed, j] : order) {
      (void)d_seed;
      bool fits = true;
      for (std::size_t member : cluster) {
        double d = distance(cloud.points[member], cloud.points[j], cloud.metric);
        if (!(d < eps - kStrictSlack)) {
          fits = false;
          break;
        }
      }
      if (fits) {
        cluster.push_back(j);
        covered[j] = true;
      }
    }
  }
  return clusters;
}

std::size_t packing_number(const PointCloud& cloud, double eps) {
  if (!(eps > 0.0)) {
    throw config_error("packing_number: eps must be positive");
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool separated = true;
    for (std::size_t k : kept) {
      double d = distance(cloud.points[i], cloud.points[k], cloud.metric);
      if (d < eps - kStrictSlack) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(i);
  }
  return kept.size();
}

std::size_t grid_box_count(const PointCloud& cloud, double eps) {
  Quantizer q = grid_center_quantizer(cloud.dimension(), eps);
  std::set<std::vector<std::uint64_t>> cells;
  for (const auto& p : cloud.points) {
    cells.insert(q.cell_index(p));
  }
  return cells.size();
}

std::vector<std::uint64_t> Quantizer::cell_index(const Point& x) const {
  if (x.size() != k) {
    throw config_error("Quantizer: dimension mismatch");
  }
  std::vector<std::uint64_t> idx(k);
  const double m = static_cast<double>(cells_per_axis);
  for (std::size_t j = 0; j < k; ++j) {
    double v = std::min(1.0, std::max(0.0, x[j]));
    auto cell = static_cast<std::uint64_t>(std::floor(v * m));
    if (cell >= cells_per_axis) cell = cells_per_axis - 1;
    idx[j] = cell;
  }
  return idx;
}

Point Quantizer::center_of_cell(const std::vector<std::uint64_t>& idx) const {
  if (idx.size() != k) {
    throw config_error("Quantizer: dimension mismatch");
  }
  Point c(k);
  const double m = static_cast<double>(cells_per_axis);
  for (std::size_t j = 0; j < k; ++j) {
    c[j] = (static_cast<double>(idx[j]) + 0.5) / m;
  }
  return c;
}

Point Quantizer::center(const Point& x) const { return center_of_cell(cell_index(x)); }

Quantizer grid_center_quantizer(std::size_t k, double eps) {
  if (k == 0) {
    throw config_error("grid_center_quantizer: dimension must be >= 1");
  }
  Quantizer q;
  q.k = k;
  q.eps = eps;
  q.cells_per_axis = ceil_inv(eps);
  return q;
}

}  // namespace meandim
