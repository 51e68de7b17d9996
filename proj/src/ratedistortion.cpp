#include "meandim/ratedistortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace meandim {

JointDistribution::JointDistribution(std::vector<std::vector<double>> joint)
    : p(std::move(joint)) {
  if (p.empty() || p.front().empty()) {
    throw config_error("JointDistribution: empty matrix");
  }
  const std::size_t cols = p.front().size();
  double total = 0.0;
  for (const auto& row : p) {
    if (row.size() != cols) {
      throw config_error("JointDistribution: ragged matrix");
    }
    for (double v : row) {
      if (v < 0.0) {
        throw config_error("JointDistribution: negative mass");
      }
      total += v;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw config_error("JointDistribution: mass sums to " + std::to_string(total));
  }
}

std::vector<double> JointDistribution::x_marginal() const {
  std::vector<double> m(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (double v : p[i]) m[i] += v;
  }
  return m;
}

std::vector<double> JointDistribution::y_marginal() const {
  std::vector<double> m(p.front().size(), 0.0);
  for (const auto& row : p) {
    for (std::size_t j = 0; j < row.size(); ++j) m[j] += row[j];
  }
  return m;
}

double mutual_information(const JointDistribution& joint) {
  auto px = joint.x_marginal();
  auto py = joint.y_marginal();
  double info = 0.0;
  for (std::size_t i = 0; i < joint.p.size(); ++i) {
    for (std::size_t j = 0; j < joint.p[i].size(); ++j) {
      double v = joint.p[i][j];
      if (v > 0.0) {
        info += v * (std::log(v) - std::log(px[i]) - std::log(py[j]));
      }
    }
  }
  return std::max(0.0, info);
}

double DistortionSpec::operator()(const Point& x, const Point& y) const {
  if (x.size() != y.size() || x.empty()) {
    throw config_error("DistortionSpec: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

namespace {

// Internal alternating-minimization state, kept across multiplier updates so
// a bisection can warm-start from the previous output marginal.
struct BaWorkspace {
  std::vector<double> log_q;               // output marginal, log domain
  std::vector<std::vector<double>> dist;   // d[i][j]
  std::vector<double> log_p;               // source log-probabilities
  std::vector<double> p;
  double max_dist = 0.0;

  void reset_uniform() {
    double u = -std::log(static_cast<double>(log_q.size()));
    std::fill(log_q.begin(), log_q.end(), u);
  }
};

struct BaOutcome {
  double rate_nats = 0.0;  // raw mutual information, nats
  double distortion = 0.0;
  int iterations = 0;
  bool converged = false;
  bool objective_monotone = true;
};

// Linear-domain pass.  With s <= 0 every kernel entry exp(s d_ij) lies in
// (0, 1], and after each renormalization some q_j >= 1/J, so no Z_i can flush
// to zero while |s| max_dist stays inside exp range; the caller gates on that
// and the zero checks below are a defensive fallback trigger.
bool ba_iterate_linear(BaWorkspace& ws, double s, double tol, int max_iter,
                       BaOutcome& out) {
  const std::size_t ni = ws.p.size();
  const std::size_t nj = ws.log_q.size();
  std::vector<double> kernel(ni * nj), kernel_t(ni * nj);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const double e = std::exp(s * ws.dist[i][j]);
      kernel[i * nj + j] = e;
      kernel_t[j * ni + i] = e;
    }
  }
  std::vector<double> q(nj), z(ni), ratio(ni), c(nj);
  for (std::size_t j = 0; j < nj; ++j) q[j] = std::exp(ws.log_q[j]);
  double prev_objective = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t j = 0; j < nj; ++j) {
      const double qj = q[j];
      if (qj == 0.0) continue;
      const double* col = &kernel_t[j * ni];
      for (std::size_t i = 0; i < ni; ++i) z[i] += qj * col[i];
    }
    for (std::size_t i = 0; i < ni; ++i) {
      if (!(z[i] > 0.0)) return false;
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < ni; ++i) objective -= ws.p[i] * std::log(z[i]);
    if (objective > prev_objective + 1e-9) out.objective_monotone = false;
    prev_objective = objective;

    for (std::size_t i = 0; i < ni; ++i) ratio[i] = ws.p[i] / z[i];
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < ni; ++i) {
      const double* row = &kernel[i * nj];
      const double r = ratio[i];
      if (r == 0.0) continue;
      for (std::size_t j = 0; j < nj; ++j) c[j] += r * row[j];
    }
    double max_c = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
      max_c = std::max(max_c, c[j]);
      q[j] *= c[j];
      norm += q[j];
    }
    if (!(norm > 0.0)) return false;
    for (std::size_t j = 0; j < nj; ++j) q[j] /= norm;
    if (std::log(max_c) < tol) {
      out.converged = true;
      ++iter;
      break;
    }
  }
  out.iterations = iter;
  for (std::size_t j = 0; j < nj; ++j) {
    ws.log_q[j] = q[j] > 0.0 ? std::log(q[j])
                             : -std::numeric_limits<double>::infinity();
  }
  return true;
}

BaOutcome ba_iterate(BaWorkspace& ws, double s, double tol, int max_iter) {
  const std::size_t ni = ws.p.size();
  const std::size_t nj = ws.log_q.size();
  std::vector<double> log_z(ni), log_c(nj), buf(nj), terms(ni);
  double prev_objective = std::numeric_limits<double>::infinity();
  BaOutcome out;
  bool iterated = false;

  if (s * ws.max_dist >= -600.0 && ni * nj <= (std::size_t{16} << 20)) {
    std::vector<double> entry_log_q = ws.log_q;
    iterated = ba_iterate_linear(ws, s, tol, max_iter, out);
    if (!iterated) {
      ws.log_q = std::move(entry_log_q);
      out = BaOutcome{};
    }
  }

  int iter = 0;
  for (; !iterated && iter < max_iter; ++iter) {
    // log Z_i = logsumexp_j (log q_j + s d_ij)
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < nj; ++j) buf[j] = ws.log_q[j] + s * ws.dist[i][j];
      log_z[i] = logsumexp(buf);
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < ni; ++i) objective -= ws.p[i] * log_z[i];
    if (objective > prev_objective + 1e-9) out.objective_monotone = false;
    prev_objective = objective;

    // log c_j = logsumexp_i (log p_i + s d_ij - log Z_i)
    double max_log_c = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t i = 0; i < ni; ++i) {
        terms[i] = ws.log_p[i] + s * ws.dist[i][j] - log_z[i];
      }
      log_c[j] = logsumexp(terms);
      max_log_c = std::max(max_log_c, log_c[j]);
    }
    for (std::size_t j = 0; j < nj; ++j) ws.log_q[j] += log_c[j];
    // Renormalize to absorb floating-point drift.
    double norm = logsumexp(ws.log_q);
    for (auto& v : ws.log_q) v -= norm;

    if (max_log_c < tol) {
      out.converged = true;
      ++iter;
      break;
    }
  }
  if (!iterated) out.iterations = iter;

  // Achieved joint: W_ij = q_j exp(s d_ij) / Z_i.
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) buf[j] = ws.log_q[j] + s * ws.dist[i][j];
    log_z[i] = logsumexp(buf);
  }
  std::vector<double> log_py(nj);
  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<double> terms(ni);
    for (std::size_t i = 0; i < ni; ++i) {
      terms[i] = ws.log_p[i] + ws.log_q[j] + s * ws.dist[i][j] - log_z[i];
    }
    log_py[j] = logsumexp(terms);
  }
  double info = 0.0, dist = 0.0;
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      double log_w = ws.log_q[j] + s * ws.dist[i][j] - log_z[i];
      double w = std::exp(log_w);
      if (w > 0.0) {
        info += ws.p[i] * w * (log_w - log_py[j]);
        dist += ws.p[i] * w * ws.dist[i][j];
      }
    }
  }
  out.rate_nats = std::max(0.0, info);
  out.distortion = dist;
  return out;
}

BaWorkspace make_workspace(const WindowLaw& source,
                           const std::vector<Point>& reproduction,
                           const DistortionSpec& spec) {
  if (source.atoms.empty() || reproduction.empty()) {
    throw config_error("ba_solve: empty source or reproduction set");
  }
  BaWorkspace ws;
  ws.p = source.probs;
  ws.log_p.resize(ws.p.size());
  for (std::size_t i = 0; i < ws.p.size(); ++i) {
    ws.log_p[i] = ws.p[i] > 0.0 ? std::log(ws.p[i])
                                : -std::numeric_limits<double>::infinity();
  }
  ws.dist.assign(source.atoms.size(), std::vector<double>(reproduction.size()));
  for (std::size_t i = 0; i < source.atoms.size(); ++i) {
    for (std::size_t j = 0; j < reproduction.size(); ++j) {
      ws.dist[i][j] = spec(source.atoms[i], reproduction[j]);
      ws.max_dist = std::max(ws.max_dist, ws.dist[i][j]);
    }
  }
  ws.log_q.assign(reproduction.size(), 0.0);
  ws.reset_uniform();
  return ws;
}

// Distortion of the best single reproduction atom (the zero-rate endpoint).
double zero_rate_distortion(const BaWorkspace& ws) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ws.log_q.size(); ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i < ws.p.size(); ++i) d += ws.p[i] * ws.dist[i][j];
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

RdPoint ba_solve(const WindowLaw& source, const std::vector<Point>& reproduction,
                 const DistortionSpec& spec, double s, double tol, int max_iter) {
  if (!(s <= 0.0) || std::isinf(s)) {
    throw config_error("ba_solve: multiplier must be finite and <= 0");
  }
  if (!(tol > 0.0)) {
    throw config_error("ba_solve: tol must be positive");
  }
  BaWorkspace ws = make_workspace(source, reproduction, spec);
  RdPoint point;
  point.s = s;
  if (s == 0.0) {
    point.rate_nats = 0.0;
    point.rate_bits = 0.0;
    point.distortion = zero_rate_distortion(ws);
    point.iterations = 0;
    point.converged = true;
    return point;
  }
  BaOutcome out = ba_iterate(ws, s, tol, max_iter);
  double h = entropy_nats(source.probs);
  point.rate_nats = std::min(out.rate_nats, h);
  point.rate_bits = nats_to_bits(point.rate_nats);
  point.distortion = out.distortion;
  point.iterations = out.iterations;
  point.converged = out.converged;
  point.objective_monotone = out.objective_monotone;
  return point;
}

RdPoint rd_block(const MeasureModel& measure, std::size_t n, double eps,
                 double tol, const std::vector<Point>& extra_reproduction) {
  if (!(eps >= 0.0)) {
    throw config_error("rd_block: eps must be >= 0");
  }
  if (!(tol > 0.0)) {
    throw config_error("rd_block: tol must be positive");
  }
  WindowLaw law = window_law(measure, n);

  std::set<Point> atom_set(law.atoms.begin(), law.atoms.end());
  for (const auto& extra : extra_reproduction) {
    if (extra.size() != n) {
      throw config_error("rd_block: reproduction atom dimension mismatch");
    }
    atom_set.insert(extra);
  }
  std::vector<Point> reproduction(atom_set.begin(), atom_set.end());

  DistortionSpec spec;
  BaWorkspace ws = make_workspace(law, reproduction, spec);
  const double h_per_letter = entropy_nats(law.probs) / static_cast<double>(n);

  auto finish = [&](double rate_raw, double distortion, double s, int iters,
                    bool converged, bool monotone) {
    RdPoint point;
    point.rate_nats =
        std::min(rate_raw / static_cast<double>(n), h_per_letter);
    point.rate_nats = std::max(0.0, point.rate_nats);
    point.rate_bits = nats_to_bits(point.rate_nats);
    point.distortion = distortion;
    point.s = s;
    point.iterations = iters;
    point.converged = converged;
    point.objective_monotone = monotone;
    return point;
  };

  double d_zero_rate = zero_rate_distortion(ws);
  if (eps >= d_zero_rate) {
    return finish(0.0, d_zero_rate, 0.0, 0, true, true);
  }
  if (eps == 0.0) {
    // Reproduction contains every source atom, so zero distortion costs
    // exactly the source entropy.
    return finish(entropy_nats(law.probs), 0.0,
                  -std::numeric_limits<double>::infinity(), 0, true, true);
  }

  // Distortion grows with s: expand the lower bracket until the achieved
  // distortion falls below eps, then bisect into [eps - tol, eps].
  double s_hi = 0.0;  // distortion d_zero_rate > eps
  double s_lo = -1.0;
  BaOutcome at_lo;
  int total_iters = 0;
  bool monotone = true;
  bool all_converged = true;
  for (int expand = 0; expand < 60; ++expand) {
    ws.reset_uniform();
    at_lo = ba_iterate(ws, s_lo, kBaTol, kBaMaxIter);
    total_iters += at_lo.iterations;
    monotone = monotone && at_lo.objective_monotone;
    all_converged = all_converged && at_lo.converged;
    if (at_lo.distortion <= eps) break;
    s_lo *= 2.0;
  }
  if (at_lo.distortion > eps) {
    throw config_error("rd_block: could not reach target distortion " +
                       std::to_string(eps));
  }

  double best_rate = at_lo.rate_nats;
  double best_distortion = at_lo.distortion;
  double best_s = s_lo;
  double hi_rate = 0.0, hi_distortion = d_zero_rate;

  for (int step = 0; step < 200; ++step) {
    if (best_distortion >= eps - tol) break;
    double s_mid = 0.5 * (s_lo + s_hi);
    if (s_mid == s_lo || s_mid == s_hi) break;
    BaOutcome mid = ba_iterate(ws, s_mid, kBaTol, kBaMaxIter);
    total_iters += mid.iterations;
    monotone = monotone && mid.objective_monotone;
    all_converged = all_converged && mid.converged;
    if (mid.distortion <= eps) {
      s_lo = s_mid;
      best_rate = mid.rate_nats;
      best_distortion = mid.distortion;
      best_s = s_mid;
    } else {
      s_hi = s_mid;
      hi_rate = mid.rate_nats;
      hi_distortion = mid.distortion;
    }
  }

  if (best_distortion < eps - tol && hi_distortion > best_distortion) {
    // The curve jumped over the bracket: report the timesharing point at
    // distortion exactly eps, which is achievable and convex-dominates it.
    double lambda = (hi_distortion - eps) / (hi_distortion - best_distortion);
    double rate = lambda * best_rate + (1.0 - lambda) * hi_rate;
    return finish(rate, eps, best_s, total_iters, all_converged, monotone);
  }
  return finish(best_rate, best_distortion, best_s, total_iters, all_converged,
                monotone);
}

RdLimitEstimate rd_limit_estimate(const MeasureModel& measure, double eps,
                                  const std::vector<std::size_t>& n_grid,
                                  double tol) {
  if (n_grid.empty()) {
    throw config_error("rd_limit_estimate: empty n grid");
  }
  RdLimitEstimate est;
  est.n_grid = n_grid;
  est.per_n.resize(n_grid.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    est.per_n[i] = rd_block(measure, n_grid[i], eps, tol);
    best = std::min(best, est.per_n[i].rate_nats);
  }
  est.value = best;
  return est;
}

VariationalSweep variational_sweep(const std::vector<MeasureModel>& measures,
                                   const std::vector<double>& eps_grid,
                                   const std::vector<std::size_t>& n_grid,
                                   double tol, int jobs) {
  if (measures.empty() || eps_grid.empty()) {
    throw config_error("variational_sweep: empty measure or eps grid");
  }
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw config_error("variational_sweep: scales must lie in (0,1)");
    }
  }
  VariationalSweep sweep;
  const std::size_t cells = measures.size() * eps_grid.size();
  sweep.rows.resize(cells);
  parallel_for(jobs, cells, [&](std::size_t cell) {
    std::size_t ei = cell / measures.size();
    std::size_t mi = cell % measures.size();
    RdLimitEstimate est = rd_limit_estimate(measures[mi], eps_grid[ei], n_grid, tol);
    VariationalRow row;
    row.eps = eps_grid[ei];
    row.measure_id = measures[mi].id;
    row.rate_per_letter = est.value;
    row.ratio = est.value / std::log(1.0 / eps_grid[ei]);
    sweep.rows[cell] = row;
  });
  for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
    double sup = 0.0;
    for (std::size_t mi = 0; mi < measures.size(); ++mi) {
      sup = std::max(sup, sweep.rows[ei * measures.size() + mi].ratio);
    }
    sweep.sup_ratio_per_eps.emplace_back(eps_grid[ei], sup);
  }
  return sweep;
}

}  // namespace meandim
