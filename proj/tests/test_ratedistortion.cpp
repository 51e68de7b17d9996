#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "meandim/common.hpp"
#include "meandim/ratedistortion.hpp"
#include "meandim/subshifts.hpp"

using namespace meandim;

namespace {

MeasureModel binary_bernoulli(double p_one, std::string id) {
  return MeasureModel::bernoulli(SubshiftModel::full_shift_binary(),
                                 {1.0 - p_one, p_one}, std::move(id));
}

MeasureModel sticky_markov() {
  return MeasureModel::markov(SubshiftModel::full_shift_binary(), {0.5, 0.5},
                              {{0.9, 0.1}, {0.1, 0.9}}, "sticky");
}

// Direct-summation reference for I(X;Y), independent of the library path.
double mi_oracle(const std::vector<std::vector<double>>& joint) {
  std::vector<double> px(joint.size(), 0.0);
  std::vector<double> py(joint[0].size(), 0.0);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    for (std::size_t j = 0; j < joint[i].size(); ++j) {
      px[i] += joint[i][j];
      py[j] += joint[i][j];
    }
  }
  double info = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    for (std::size_t j = 0; j < joint[i].size(); ++j) {
      if (joint[i][j] > 0.0) {
        info += joint[i][j] * std::log(joint[i][j] / (px[i] * py[j]));
      }
    }
  }
  return info;
}

}  // namespace

TEST_CASE("mutual information on explicit joints") {
  JointDistribution independent({{0.35 * 0.4, 0.35 * 0.6},
                                 {0.65 * 0.4, 0.65 * 0.6}});
  CHECK(mutual_information(independent) == doctest::Approx(0.0).epsilon(1e-12));

  JointDistribution diagonal(
      {{0.25, 0.0, 0.0, 0.0},
       {0.0, 0.25, 0.0, 0.0},
       {0.0, 0.0, 0.25, 0.0},
       {0.0, 0.0, 0.0, 0.25}});
  CHECK(mutual_information(diagonal) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  std::vector<std::vector<double>> noisy = {{0.4, 0.1}, {0.1, 0.4}};
  double info = mutual_information(JointDistribution(noisy));
  CHECK(info == doctest::Approx(mi_oracle(noisy)).epsilon(1e-12));
  CHECK(nats_to_bits(info) == doctest::Approx(0.278).epsilon(2e-3));

  JointDistribution j(noisy);
  std::vector<double> px = j.x_marginal();
  std::vector<double> py = j.y_marginal();
  CHECK(px[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(py[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("mutual information rejects malformed joints") {
  CHECK_THROWS_AS(JointDistribution({}), config_error);
  CHECK_THROWS_AS(JointDistribution({{0.5, 0.2}}), config_error);
  CHECK_THROWS_AS(JointDistribution({{0.5}, {0.3, 0.2}}), config_error);
  CHECK_THROWS_AS(JointDistribution({{1.2, -0.2}}), config_error);
}

TEST_CASE("mutual information stays between zero and the smaller entropy") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t rows = 2 + rng.next_below(3);
    std::size_t cols = 2 + rng.next_below(3);
    std::vector<std::vector<double>> joint(rows, std::vector<double>(cols));
    double total = 0.0;
    for (auto& row : joint) {
      for (auto& v : row) {
        v = rng.next_uniform();
        total += v;
      }
    }
    for (auto& row : joint) {
      for (auto& v : row) v /= total;
    }
    JointDistribution j(joint);
    double info = mutual_information(j);
    CHECK(info >= 0.0);
    CHECK(info <= entropy_nats(j.x_marginal()) + 1e-12);
    CHECK(info <= entropy_nats(j.y_marginal()) + 1e-12);
  }
}

TEST_CASE("alternating minimization endpoints") {
  MeasureModel skew = binary_bernoulli(0.3, "skew");
  WindowLaw law = window_law(skew, 1);
  std::vector<Point> repro = law.atoms;
  DistortionSpec spec;

  RdPoint zero = ba_solve(law, repro, spec, 0.0);
  CHECK(zero.rate_nats == 0.0);
  CHECK(zero.distortion == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(zero.converged);

  RdPoint tight = ba_solve(law, repro, spec, -1000.0);
  CHECK(tight.rate_nats >=
        binary_entropy_nats(0.3) - 1e-3);
  CHECK(tight.distortion <= 1e-3);

  CHECK_THROWS_AS(ba_solve(law, repro, spec, 1.0), config_error);
  CHECK_THROWS_AS(
      ba_solve(law, repro, spec, -std::numeric_limits<double>::infinity()),
      config_error);
  CHECK_THROWS_AS(ba_solve(law, repro, spec, -1.0, 0.0), config_error);
  CHECK_THROWS_AS(ba_solve(law, {}, spec, -1.0), config_error);
}

TEST_CASE("fixed-multiplier solve hits the symmetric crossover point") {
  MeasureModel fair = binary_bernoulli(0.5, "fair");
  WindowLaw law = window_law(fair, 1);
  // For the symmetric binary source the optimizer at multiplier s flips each
  // letter with probability e^s / (1 + e^s); s = log(1/9) puts that at 0.1.
  RdPoint pt = ba_solve(law, law.atoms, DistortionSpec{}, std::log(1.0 / 9.0));
  CHECK(pt.distortion == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(pt.rate_nats ==
        doctest::Approx(std::log(2.0) - binary_entropy_nats(0.1))
            .epsilon(1e-6));
  CHECK(pt.converged);
  CHECK(pt.objective_monotone);
}

TEST_CASE("block rate-distortion endpoints") {
  MeasureModel fair = binary_bernoulli(0.5, "fair");

  RdPoint free = rd_block(fair, 1, 0.5);
  CHECK(free.rate_nats == 0.0);
  CHECK(free.distortion == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(free.s == 0.0);

  RdPoint lossless = rd_block(fair, 1, 0.0);
  CHECK(lossless.rate_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lossless.distortion == 0.0);
  CHECK(std::isinf(lossless.s));

  CHECK_THROWS_AS(rd_block(fair, 1, -0.1), config_error);
  CHECK_THROWS_AS(rd_block(fair, 1, 0.1, 0.0), config_error);
}

TEST_CASE("block rate-distortion matches the binary closed form") {
  MeasureModel skew = binary_bernoulli(0.3, "skew");
  for (double d : {0.05, 0.1, 0.2}) {
    RdPoint pt = rd_block(skew, 1, d);
    double expected_bits =
        nats_to_bits(binary_entropy_nats(0.3) - binary_entropy_nats(d));
    CHECK(pt.rate_bits == doctest::Approx(expected_bits).epsilon(1e-4));
    CHECK(pt.distortion <= d + 1e-15);
    CHECK(pt.objective_monotone);
  }

  // Independent letters add nothing: the two-letter block solves to the
  // same per-letter rate.
  MeasureModel fair = binary_bernoulli(0.5, "fair");
  RdPoint one = rd_block(fair, 1, 0.1);
  RdPoint two = rd_block(fair, 2, 0.1);
  CHECK(two.rate_bits == doctest::Approx(one.rate_bits).epsilon(1e-3));
}

TEST_CASE("the rate-distortion curve is nonincreasing and convex") {
  MeasureModel skew = binary_bernoulli(0.3, "skew");
  std::vector<RdPoint> curve;
  for (double eps : {0.05, 0.1, 0.15, 0.2, 0.25}) {
    curve.push_back(rd_block(skew, 1, eps));
  }
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].rate_nats <= curve[i - 1].rate_nats + 1e-9);
  }
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const RdPoint& a = curve[i - 1];
    const RdPoint& b = curve[i];
    const RdPoint& c = curve[i + 1];
    double span = c.distortion - a.distortion;
    REQUIRE(span > 0.0);
    double t = (b.distortion - a.distortion) / span;
    double chord = (1.0 - t) * a.rate_nats + t * c.rate_nats;
    CHECK(b.rate_nats <= chord + 1e-6);
  }
}

TEST_CASE("block-length sweeps flatten for independent sources") {
  MeasureModel iid = binary_bernoulli(0.4, "iid");
  RdLimitEstimate est = rd_limit_estimate(iid, 0.1, {1, 2, 3});
  REQUIRE(est.per_n.size() == 3);
  for (const RdPoint& pt : est.per_n) {
    CHECK(pt.rate_nats ==
          doctest::Approx(est.per_n[0].rate_nats).epsilon(1e-3));
  }
  double lowest = est.per_n[0].rate_nats;
  for (const RdPoint& pt : est.per_n) lowest = std::min(lowest, pt.rate_nats);
  CHECK(est.value == doctest::Approx(lowest).epsilon(1e-12));
}

TEST_CASE("memory lowers the achievable rate") {
  MeasureModel chain = sticky_markov();
  MeasureModel iid = binary_bernoulli(0.5, "fair");
  double with_memory = rd_limit_estimate(chain, 0.05, {1, 2, 3, 4}).value;
  double without = rd_limit_estimate(iid, 0.05, {1, 2, 3, 4}).value;
  CHECK(with_memory < without - 0.01);
}

TEST_CASE("near-lossless block rates follow the chain block entropy") {
  MeasureModel chain = sticky_markov();
  const double h_step = binary_entropy_nats(0.1);
  RdLimitEstimate est = rd_limit_estimate(chain, 1e-6, {1, 2, 3, 4, 5});
  REQUIRE(est.per_n.size() == 5);
  for (std::size_t i = 0; i < est.per_n.size(); ++i) {
    double n = static_cast<double>(est.n_grid[i]);
    double block_entropy_per_letter =
        (std::log(2.0) + (n - 1.0) * h_step) / n;
    CHECK(est.per_n[i].rate_nats ==
          doctest::Approx(block_entropy_per_letter).epsilon(1e-3));
  }
}

TEST_CASE("scaled block rates are subadditive") {
  MeasureModel chain = sticky_markov();
  const double eps = 0.05;
  std::vector<double> scaled(7, 0.0);  // scaled[j] = j * rate(j)
  for (std::size_t j = 1; j <= 6; ++j) {
    scaled[j] = static_cast<double>(j) * rd_block(chain, j, eps).rate_nats;
  }
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t m = 1; n + m <= 6; ++m) {
      CHECK(scaled[n] + scaled[m] >= scaled[n + m] - kSubaddSlack);
    }
  }
}

TEST_CASE("variational sweeps bound the normalized rate by the alphabet size") {
  std::vector<MeasureModel> measures = {binary_bernoulli(0.3, "b03"),
                                        binary_bernoulli(0.5, "b05")};
  std::vector<double> eps_grid = {0.5, 0.1};
  VariationalSweep sweep = variational_sweep(measures, eps_grid, {1});
  CHECK(sweep.rows.size() == 4);
  REQUIRE(sweep.sup_ratio_per_eps.size() == 2);
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    CHECK(sweep.sup_ratio_per_eps[e].first == eps_grid[e]);
    double cap = std::log(2.0) / std::log(1.0 / eps_grid[e]);
    CHECK(sweep.sup_ratio_per_eps[e].second <= cap + 1e-9);
    double best = 0.0;
    for (const auto& row : sweep.rows) {
      if (row.eps == eps_grid[e]) best = std::max(best, row.ratio);
    }
    CHECK(sweep.sup_ratio_per_eps[e].second ==
          doctest::Approx(best).epsilon(1e-15));
  }

  // A worker pool must not change any reported value.
  VariationalSweep parallel = variational_sweep(measures, eps_grid, {1}, 1e-6, 4);
  REQUIRE(parallel.rows.size() == sweep.rows.size());
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    CHECK(parallel.rows[i].rate_per_letter == sweep.rows[i].rate_per_letter);
    CHECK(parallel.rows[i].ratio == sweep.rows[i].ratio);
  }
}

TEST_CASE("a single-point subshift compresses to rate zero") {
  SubshiftModel fixed =
      SubshiftModel::full_shift(Alphabet::from_letters({0.25}), "fixed");
  MeasureModel point_mass = MeasureModel::bernoulli(fixed, {1.0}, "point");
  VariationalSweep sweep = variational_sweep({point_mass}, {0.5, 0.1}, {1, 2});
  for (const auto& row : sweep.rows) {
    CHECK(row.rate_per_letter == 0.0);
    CHECK(row.ratio == 0.0);
  }
}
