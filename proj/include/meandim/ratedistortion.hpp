#pragma once

#include <string>
#include <vector>

#include "meandim/common.hpp"
#include "meandim/subshifts.hpp"

namespace meandim {

// Explicit finite joint distribution over row atoms X and column atoms Y.
struct JointDistribution {
  std::vector<std::vector<double>> p;  // p[i][j] = P(X = i, Y = j)

  explicit JointDistribution(std::vector<std::vector<double>> joint);
  std::vector<double> x_marginal() const;
  std::vector<double> y_marginal() const;
};

// I(X;Y) in nats; 0 log 0 terms contribute nothing.
double mutual_information(const JointDistribution& joint);

// Distortion between equal-length windows: the mean absolute coordinate
// difference (1/n) sum_i |x_i - y_i|.
struct DistortionSpec {
  double operator()(const Point& x, const Point& y) const;
};

// One solved point of a rate-distortion trade-off.  Rates are per letter.
struct RdPoint {
  double rate_nats = 0.0;
  double rate_bits = 0.0;
  double distortion = 0.0;
  // Multiplier that produced the point: s <= 0, with -infinity marking the
  // lossless endpoint and 0 the zero-rate endpoint.
  double s = 0.0;
  int iterations = 0;
  bool converged = true;
  // Whether the alternating objective decreased monotonically (checked on
  // every run).
  bool objective_monotone = true;
};

// Alternating minimization of mutual information subject to a distortion
// penalty at fixed multiplier s, over the given finite reproduction atoms.
// Rates here are raw (not divided by window length); rd_block normalizes.
RdPoint ba_solve(const WindowLaw& source, const std::vector<Point>& reproduction,
                 const DistortionSpec& spec, double s, double tol = kBaTol,
                 int max_iter = kBaMaxIter);

// Smallest achievable per-letter rate at block length n with mean distortion
// at most eps, reproduction running over the source window atoms plus
// `extra_reproduction`.  Bisects the multiplier until the achieved distortion
// falls in [eps - tol, eps] (or an endpoint applies).
RdPoint rd_block(const MeasureModel& measure, std::size_t n, double eps,
                 double tol = 1e-6,
                 const std::vector<Point>& extra_reproduction = {});

struct RdLimitEstimate {
  double value = 0.0;  // min of per_n
  std::vector<std::size_t> n_grid;
  std::vector<RdPoint> per_n;
};

// Block-length sweep of rd_block at fixed eps; the sequence has a decreasing
// infimum, estimated by the minimum over the grid.
RdLimitEstimate rd_limit_estimate(const MeasureModel& measure, double eps,
                                  const std::vector<std::size_t>& n_grid,
                                  double tol = 1e-6);

struct VariationalRow {
  double eps = 0.0;
  std::string measure_id;
  double rate_per_letter = 0.0;  // nats
  double ratio = 0.0;            // rate / log(1/eps)
};

struct VariationalSweep {
  std::vector<VariationalRow> rows;
  // For each eps (input order): the largest ratio over the measure grid.
  std::vector<std::pair<double, double>> sup_ratio_per_eps;
};

// For every eps in the grid, the best normalized rate over a finite family
// of measures: a lower bound on the supremum over all invariant measures.
VariationalSweep variational_sweep(const std::vector<MeasureModel>& measures,
                                   const std::vector<double>& eps_grid,
                                   const std::vector<std::size_t>& n_grid,
                                   double tol = 1e-6, int jobs = 1);

}  // namespace meandim
