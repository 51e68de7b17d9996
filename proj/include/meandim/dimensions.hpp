#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "meandim/common.hpp"
#include "meandim/geometry.hpp"
#include "meandim/subshifts.hpp"

namespace meandim {

struct FitDiagnostics {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual of the log-log fit
};

// One table cell of a dimension estimate: the covering count of the length-n
// window set at scale eps (log_count in nats), the normalized ratio derived
// from it, and whether the count is exact or a greedy upper bound.
struct CountRow {
  std::size_t n = 0;
  double eps = 0.0;
  int depth = 0;
  double log_count = 0.0;
  double ratio = 0.0;
  bool exact = true;
};

struct DimensionEstimate {
  enum class Method { BoxFit, MdimProfile, MbdimLimit, RbUpper };

  double value = 0.0;
  Method method = Method::BoxFit;
  std::vector<double> eps_grid;
  std::vector<std::size_t> n_grid;
  std::vector<CountRow> table;
  FitDiagnostics fit;
  // Monotone upper-bound sequence where the estimator provides one
  // (span-rate style running minima), aligned with n_grid.
  std::vector<double> upper_sequence;
};

// Least-squares slope of log N against log(1/eps) over at least three scales.
// Clamps the reported dimension at 0 and records fit diagnostics.
DimensionEstimate box_dimension_fit(
    const std::vector<std::pair<double, double>>& counts);

// Same fit from (eps, log N) pairs, for counts too large to exponentiate.
DimensionEstimate box_dimension_fit_log(
    const std::vector<std::pair<double, double>>& log_counts);

struct CountResult {
  double log_count = 0.0;
  bool exact = true;
};

// Covering count of the length-n window set at scale eps, in nats.  Uses the
// closed-form window count when distinct windows can never share a cluster,
// a per-letter product bound for full shifts, and explicit enumeration plus
// exact or greedy covering otherwise.
CountResult window_covering_count(const SubshiftModel& model, std::size_t n,
                                  double eps, int depth = 0);

// Normalized covering-growth profile: for every (eps, n) grid cell the ratio
// log_count / (n log(1/eps)), with the headline value taken as the larger of
// the largest-n ratios at the two smallest scales.
DimensionEstimate mdim_profile(const SubshiftModel& model,
                               const std::vector<double>& eps_grid,
                               const std::vector<std::size_t>& n_grid,
                               const std::vector<int>& depth_schedule = {});

struct SpanRate {
  double value = 0.0;             // log_count / n at the largest n
  std::vector<std::size_t> n_grid;
  std::vector<double> per_n;      // log_count / n per grid entry
  std::vector<double> upper_seq;  // running minimum of per_n (nonincreasing)
};

// Exponential growth rate of the covering count at fixed scale eps.
SpanRate span_rate(const SubshiftModel& model, double eps,
                   const std::vector<std::size_t>& n_grid, int depth = 0);

// Per-window box-dimension estimate: fits dim of the window set for each n,
// divides by n, and reports the value at the largest n together with the
// running-minimum sequence.
DimensionEstimate mbdim_estimate(const SubshiftModel& model,
                                 const std::vector<std::size_t>& n_grid,
                                 const std::vector<double>& eps_grid,
                                 const std::vector<int>& depth_schedule = {});

// Upper bound on the smallest box-counting dimension per coordinate of a set
// of windows carrying at least 1-delta of the measure: atoms are dropped in
// increasing probability order until just above the mass floor, and the box
// dimension of the survivors is fitted over eps_grid and divided by n.
// delta = 0 keeps every atom, whose finite set has dimension exactly 0.
// Returned values follow the deltas (ascending) and are nonincreasing: each
// entry is the best bound seen at its delta or any smaller one.
std::vector<double> rb_upper_bounds(const MeasureModel& measure,
                                    const std::vector<double>& deltas,
                                    std::size_t n,
                                    const std::vector<double>& eps_grid);

double rb_upper_bound(const MeasureModel& measure, double delta, std::size_t n,
                      const std::vector<double>& eps_grid);

}  // namespace meandim
