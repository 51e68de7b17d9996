#include "meandim/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace meandim {

namespace {

FitDiagnostics fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) {
    throw config_error("box fit: degenerate scale grid (all scales equal)");
  }
  FitDiagnostics d;
  d.slope = sxy / sxx;
  d.intercept = my - d.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (d.intercept + d.slope * x[i]);
    ss += r * r;
  }
  d.residual = std::sqrt(ss / static_cast<double>(n));
  return d;
}

DimensionEstimate fit_from_log_counts(
    const std::vector<std::pair<double, double>>& log_counts) {
  if (log_counts.size() < 3) {
    throw config_error("box fit: need at least 3 scales, got " +
                       std::to_string(log_counts.size()));
  }
  std::vector<double> x, y;
  for (const auto& [eps, log_n] : log_counts) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw config_error("box fit: scales must lie in (0,1), got " +
                         std::to_string(eps));
    }
    if (log_n < -1e-9) {
      throw config_error("box fit: counts must be >= 1");
    }
    x.push_back(std::log(1.0 / eps));
    y.push_back(log_n);
  }
  DimensionEstimate est;
  est.method = DimensionEstimate::Method::BoxFit;
  est.fit = fit_line(x, y);
  est.value = std::max(0.0, est.fit.slope);
  for (const auto& [eps, log_n] : log_counts) {
    CountRow row;
    row.n = 1;
    row.eps = eps;
    row.log_count = log_n;
    row.ratio = log_n / std::log(1.0 / eps);
    est.table.push_back(row);
    est.eps_grid.push_back(eps);
  }
  return est;
}

}  // namespace

DimensionEstimate box_dimension_fit(
    const std::vector<std::pair<double, double>>& counts) {
  std::vector<std::pair<double, double>> log_counts;
  log_counts.reserve(counts.size());
  for (const auto& [eps, count] : counts) {
    if (!(count >= 1.0)) {
      throw config_error("box fit: counts must be >= 1, got " +
                         std::to_string(count));
    }
    log_counts.emplace_back(eps, std::log(count));
  }
  return fit_from_log_counts(log_counts);
}

DimensionEstimate box_dimension_fit_log(
    const std::vector<std::pair<double, double>>& log_counts) {
  return fit_from_log_counts(log_counts);
}

CountResult window_covering_count(const SubshiftModel& model, std::size_t n,
                                  double eps, int depth) {
  if (!(eps > 0.0)) {
    throw config_error("window_covering_count: eps must be positive");
  }
  Alphabet a = model.alphabet_at(depth);
  double gap = a.min_gap();

  // Distinct windows differ by at least the letter gap in the max metric, so
  // below that scale no two windows share a cluster and the covering count is
  // the window count itself.
  if (eps <= gap + kStrictSlack) {
    return CountResult{window_count_log(model, n, depth), true};
  }

  // Full shifts factor across coordinates: clusters of letter clusters cover,
  // and per-letter separated picks stay separated.  The bound pair collapses
  // to an exact value when the letter-level cover and packing agree.
  if (model.kind == SubshiftModel::Kind::FullShift) {
    std::vector<Point> letter_points;
    letter_points.reserve(a.size());
    for (double v : a.letters) letter_points.push_back(Point{v});
    PointCloud letters(std::move(letter_points), Metric::linf());
    std::size_t cover = letters.size() <= kExactCoverCap
                            ? covering_number_exact(letters, eps)
                            : covering_number_greedy(letters, eps);
    std::size_t pack = packing_number(letters, eps);
    return CountResult{static_cast<double>(n) *
                           std::log(static_cast<double>(cover)),
                       cover == pack};
  }

  PointCloud windows = window_set(model, n, depth, kGreedyCoverCap);
  if (windows.size() <= kExactCoverCap) {
    return CountResult{
        std::log(static_cast<double>(covering_number_exact(windows, eps))),
        true};
  }
  return CountResult{
      std::log(static_cast<double>(covering_number_greedy(windows, eps))),
      false};
}

DimensionEstimate mdim_profile(const SubshiftModel& model,
                               const std::vector<double>& eps_grid,
                               const std::vector<std::size_t>& n_grid,
                               const std::vector<int>& depth_schedule) {
  if (eps_grid.empty() || n_grid.empty()) {
    throw config_error("mdim_profile: empty grid");
  }
  if (!depth_schedule.empty() && depth_schedule.size() != eps_grid.size()) {
    throw config_error("mdim_profile: depth schedule length mismatch");
  }
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw config_error("mdim_profile: scales must lie in (0,1)");
    }
  }
  DimensionEstimate est;
  est.method = DimensionEstimate::Method::MdimProfile;
  est.eps_grid = eps_grid;
  est.n_grid = n_grid;

  std::vector<std::size_t> order(eps_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return eps_grid[i] > eps_grid[j];
  });

  std::size_t n_max = *std::max_element(n_grid.begin(), n_grid.end());
  std::vector<double> largest_n_ratio(eps_grid.size(), 0.0);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    std::size_t ei = order[oi];
    double eps = eps_grid[ei];
    int depth = depth_schedule.empty() ? model.refinement_depth
                                       : depth_schedule[ei];
    for (std::size_t n : n_grid) {
      CountResult c = window_covering_count(model, n, eps, depth);
      CountRow row;
      row.n = n;
      row.eps = eps;
      row.depth = depth;
      row.log_count = c.log_count;
      row.ratio = c.log_count / (static_cast<double>(n) * std::log(1.0 / eps));
      row.exact = c.exact;
      est.table.push_back(row);
      if (n == n_max) largest_n_ratio[ei] = row.ratio;
    }
  }

  // Headline: best ratio at the deepest window length over the two smallest
  // scales.
  std::size_t tail = std::min<std::size_t>(2, order.size());
  double value = 0.0;
  for (std::size_t t = 0; t < tail; ++t) {
    value = std::max(value, largest_n_ratio[order[order.size() - 1 - t]]);
  }
  est.value = value;
  return est;
}

SpanRate span_rate(const SubshiftModel& model, double eps,
                   const std::vector<std::size_t>& n_grid, int depth) {
  if (n_grid.empty()) {
    throw config_error("span_rate: empty n grid");
  }
  SpanRate rate;
  std::vector<std::size_t> sorted_n = n_grid;
  std::sort(sorted_n.begin(), sorted_n.end());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t n : sorted_n) {
    CountResult c = window_covering_count(model, n, eps, depth);
    double per = c.log_count / static_cast<double>(n);
    running = std::min(running, per);
    rate.per_n.push_back(per);
    rate.upper_seq.push_back(running);
  }
  rate.n_grid = sorted_n;
  rate.value = rate.per_n.back();
  return rate;
}

DimensionEstimate mbdim_estimate(const SubshiftModel& model,
                                 const std::vector<std::size_t>& n_grid,
                                 const std::vector<double>& eps_grid,
                                 const std::vector<int>& depth_schedule) {
  if (eps_grid.size() < 3) {
    throw config_error("mbdim_estimate: need at least 3 scales");
  }
  if (n_grid.empty()) {
    throw config_error("mbdim_estimate: empty n grid");
  }
  if (!depth_schedule.empty() && depth_schedule.size() != eps_grid.size()) {
    throw config_error("mbdim_estimate: depth schedule length mismatch");
  }
  DimensionEstimate est;
  est.method = DimensionEstimate::Method::MbdimLimit;
  est.eps_grid = eps_grid;
  std::vector<std::size_t> sorted_n = n_grid;
  std::sort(sorted_n.begin(), sorted_n.end());
  est.n_grid = sorted_n;

  double running = std::numeric_limits<double>::infinity();
  for (std::size_t n : sorted_n) {
    std::vector<std::pair<double, double>> log_counts;
    for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
      int depth = depth_schedule.empty() ? model.refinement_depth
                                         : depth_schedule[ei];
      CountResult c = window_covering_count(model, n, eps_grid[ei], depth);
      log_counts.emplace_back(eps_grid[ei], c.log_count);
      CountRow row;
      row.n = n;
      row.eps = eps_grid[ei];
      row.depth = depth;
      row.log_count = c.log_count;
      row.exact = c.exact;
      row.ratio = c.log_count /
                  (static_cast<double>(n) * std::log(1.0 / eps_grid[ei]));
      est.table.push_back(row);
    }
    DimensionEstimate per_n = box_dimension_fit_log(log_counts);
    double scaled = per_n.value / static_cast<double>(n);
    running = std::min(running, scaled);
    est.upper_sequence.push_back(running);
    if (n == sorted_n.back()) {
      est.value = scaled;
      est.fit = per_n.fit;
    }
  }
  return est;
}

std::vector<double> rb_upper_bounds(const MeasureModel& measure,
                                    const std::vector<double>& deltas,
                                    std::size_t n,
                                    const std::vector<double>& eps_grid) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0 && deltas[i] < 1.0)) {
      throw config_error("rb_upper_bounds: delta must lie in [0,1)");
    }
    if (i > 0 && deltas[i] < deltas[i - 1]) {
      throw config_error("rb_upper_bounds: deltas must be ascending");
    }
  }
  WindowLaw law = window_law(measure, n);

  // Atoms leave in increasing probability order (ties by atom order) until
  // removing one more would drop the kept mass below 1-delta.
  std::vector<std::size_t> drop_order(law.atoms.size());
  std::iota(drop_order.begin(), drop_order.end(), 0);
  std::stable_sort(drop_order.begin(), drop_order.end(),
                   [&](std::size_t i, std::size_t j) {
                     return law.probs[i] < law.probs[j];
                   });

  std::vector<double> out;
  double best = std::numeric_limits<double>::infinity();
  for (double delta : deltas) {
    double raw;
    if (delta == 0.0) {
      raw = 0.0;
    } else {
      double kept_mass = 1.0;
      std::vector<bool> dropped(law.atoms.size(), false);
      for (std::size_t idx : drop_order) {
        if (kept_mass - law.probs[idx] >= 1.0 - delta - 1e-15) {
          dropped[idx] = true;
          kept_mass -= law.probs[idx];
        }
      }
      std::vector<Point> kept;
      for (std::size_t i = 0; i < law.atoms.size(); ++i) {
        if (!dropped[i]) kept.push_back(law.atoms[i]);
      }
      if (kept.empty()) {
        raw = 0.0;
      } else {
        PointCloud cloud(std::move(kept), Metric::linf());
        std::vector<std::pair<double, double>> counts;
        for (double eps : eps_grid) {
          counts.emplace_back(
              eps, std::log(static_cast<double>(grid_box_count(cloud, eps))));
        }
        DimensionEstimate fit = box_dimension_fit_log(counts);
        raw = fit.value / static_cast<double>(n);
      }
    }
    best = std::min(best, raw);
    out.push_back(best);
  }
  return out;
}

double rb_upper_bound(const MeasureModel& measure, double delta, std::size_t n,
                      const std::vector<double>& eps_grid) {
  return rb_upper_bounds(measure, {delta}, n, eps_grid).front();
}

}  // namespace meandim
