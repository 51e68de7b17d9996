#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "meandim/common.hpp"
#include "meandim/subshifts.hpp"

using namespace meandim;

namespace {

std::set<Point> point_set(const std::vector<Point>& pts) {
  return std::set<Point>(pts.begin(), pts.end());
}

// Fibonacci with F(1) = F(2) = 1.
double fib(int n) {
  double a = 1.0, b = 1.0;
  for (int i = 2; i < n; ++i) {
    double c = a + b;
    a = b;
    b = c;
  }
  return n <= 2 ? 1.0 : b;
}

}  // namespace

TEST_CASE("alphabets validate and refine") {
  Alphabet bin = Alphabet::binary();
  CHECK(bin.size() == 2);
  CHECK(bin.letters[0] == 0.0);
  CHECK(bin.letters[1] == 1.0);
  CHECK(bin.min_gap() == doctest::Approx(1.0));
  CHECK(bin.index_of(1.0) == 1);
  CHECK_THROWS_AS(bin.index_of(0.5), config_error);

  Alphabet c1 = Alphabet::cantor(1);
  REQUIRE(c1.size() == 2);
  CHECK(c1.letters[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  Alphabet c2 = Alphabet::cantor(2);
  REQUIRE(c2.size() == 4);
  CHECK(c2.letters[1] == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(c2.letters[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c2.letters[3] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(c2.min_gap() == doctest::Approx(2.0 / 9.0).epsilon(1e-12));

  // Each depth keeps every letter of the previous one.
  for (int t = 1; t <= 5; ++t) {
    Alphabet coarse = Alphabet::cantor(t);
    Alphabet fine = Alphabet::cantor(t + 1);
    CHECK(fine.size() == 2 * coarse.size());
    for (double letter : coarse.letters) {
      CHECK_NOTHROW(fine.index_of(letter));
    }
  }

  CHECK_THROWS_AS(Alphabet::from_letters({}), config_error);
  CHECK_THROWS_AS(Alphabet::from_letters({0.5, 0.2}), config_error);
  CHECK_THROWS_AS(Alphabet::from_letters({0.0, 1.5}), config_error);
  CHECK_THROWS_AS(Alphabet::cantor(0), config_error);
}

TEST_CASE("window sets enumerate admissible windows in order") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  PointCloud w2 = window_set(bin, 2);
  REQUIRE(w2.size() == 4);
  CHECK(w2.points[0] == Point{0.0, 0.0});
  CHECK(w2.points[1] == Point{0.0, 1.0});
  CHECK(w2.points[2] == Point{1.0, 0.0});
  CHECK(w2.points[3] == Point{1.0, 1.0});

  SubshiftModel gm = SubshiftModel::golden_mean_sft();
  PointCloud g3 = window_set(gm, 3);
  REQUIRE(g3.size() == 5);
  // No window may contain adjacent ones.
  for (const auto& w : g3.points) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      CHECK(!(w[i] == 1.0 && w[i + 1] == 1.0));
    }
  }

  SubshiftModel sparse = SubshiftModel::sparse_shift_default();
  PointCloud s2 = window_set(sparse, 2);
  REQUIRE(s2.size() == 3);
  CHECK(point_set(s2.points) ==
        point_set({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}));

  CHECK_THROWS_AS(window_set(bin, 3, 0, 4), cap_exceeded);
}

TEST_CASE("dropping the last coordinate projects onto the shorter window set") {
  for (const SubshiftModel& model :
       {SubshiftModel::full_shift_binary(), SubshiftModel::golden_mean_sft(),
        SubshiftModel::sparse_shift_default()}) {
    for (std::size_t n : {std::size_t{1}, std::size_t{3}}) {
      PointCloud longer = window_set(model, n + 1);
      std::set<Point> truncated;
      for (const auto& w : longer.points) {
        truncated.insert(Point(w.begin(), w.end() - 1));
      }
      CHECK(truncated == point_set(window_set(model, n).points));
    }
  }
}

TEST_CASE("window counts follow the model recurrences") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  for (std::size_t n = 1; n <= 40; ++n) {
    CHECK(window_count_log(bin, n) ==
          doctest::Approx(static_cast<double>(n) * std::log(2.0))
              .epsilon(1e-12));
  }

  SubshiftModel gm = SubshiftModel::golden_mean_sft();
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(std::exp(window_count_log(gm, n)) ==
          doctest::Approx(fib(static_cast<int>(n) + 2)).epsilon(1e-9));
  }

  SubshiftModel sparse = SubshiftModel::sparse_shift_default();
  std::vector<double> expected = {2, 3, 4, 6, 9, 13, 19};
  for (std::size_t n = 1; n <= expected.size(); ++n) {
    CHECK(std::exp(window_count_log(sparse, n)) ==
          doctest::Approx(expected[n - 1]).epsilon(1e-9));
    CHECK(window_set(sparse, n).size() ==
          static_cast<std::size_t>(expected[n - 1]));
  }

  SubshiftModel cantor = SubshiftModel::cantor_full_shift(4);
  CHECK(window_count_log(cantor, 3) ==
        doctest::Approx(12.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(window_count_log(cantor, 3, 2) ==
        doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-12));

  // The closed forms agree with enumeration wherever both are feasible.
  for (const SubshiftModel& model : {bin, gm, sparse}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      CHECK(std::exp(window_count_log(model, n)) ==
            doctest::Approx(static_cast<double>(window_set(model, n).size()))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("window laws carry exact probabilities") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  MeasureModel fair = MeasureModel::bernoulli(bin, {0.5, 0.5}, "fair");
  WindowLaw law2 = window_law(fair, 2);
  REQUIRE(law2.atoms.size() == 4);
  for (double p : law2.probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));

  MeasureModel skew = MeasureModel::bernoulli(bin, {0.7, 0.3}, "skew");
  WindowLaw law1 = window_law(skew, 1);
  REQUIRE(law1.atoms.size() == 2);
  CHECK(law1.probs[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(law1.probs[1] == doctest::Approx(0.3).epsilon(1e-15));

  MeasureModel chain = MeasureModel::markov(
      bin, {0.5, 0.5}, {{0.9, 0.1}, {0.1, 0.9}}, "sticky");
  WindowLaw mlaw = window_law(chain, 2);
  REQUIRE(mlaw.atoms.size() == 4);
  CHECK(mlaw.probs[0] == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(mlaw.probs[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(mlaw.probs[2] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(mlaw.probs[3] == doctest::Approx(0.45).epsilon(1e-12));

  MeasureModel digits = MeasureModel::cantor_digit_bernoulli(2, 0.4, "d2");
  WindowLaw dlaw = window_law(digits, 1);
  REQUIRE(dlaw.atoms.size() == 4);
  CHECK(dlaw.probs[0] == doctest::Approx(0.36).epsilon(1e-12));  // digits 00
  CHECK(dlaw.probs[1] == doctest::Approx(0.24).epsilon(1e-12));  // digits 02
  CHECK(dlaw.probs[2] == doctest::Approx(0.24).epsilon(1e-12));  // digits 20
  CHECK(dlaw.probs[3] == doctest::Approx(0.16).epsilon(1e-12));  // digits 22

  for (const WindowLaw* law : {&law2, &law1, &mlaw, &dlaw}) {
    double total = 0.0;
    for (double p : law->probs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("window-law support stays inside the window set") {
  SubshiftModel gm = SubshiftModel::golden_mean_sft();
  MeasureModel chain = MeasureModel::markov(
      gm, {2.0 / 3.0, 1.0 / 3.0}, {{0.5, 0.5}, {1.0, 0.0}}, "gm");
  for (std::size_t n : {std::size_t{2}, std::size_t{4}}) {
    WindowLaw law = window_law(chain, n);
    std::set<Point> admissible = point_set(window_set(gm, n).points);
    for (const auto& atom : law.atoms) {
      CHECK(admissible.count(atom) == 1);
    }
  }
}

TEST_CASE("measure construction rejects unsupported inputs") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  SubshiftModel gm = SubshiftModel::golden_mean_sft();
  SubshiftModel sparse = SubshiftModel::sparse_shift_default();

  CHECK_THROWS_AS(MeasureModel::bernoulli(bin, {0.6, 0.6}, "bad"),
                  config_error);
  CHECK_THROWS_AS(MeasureModel::bernoulli(bin, {0.5}, "bad"), config_error);
  CHECK_THROWS_AS(MeasureModel::bernoulli(bin, {1.2, -0.2}, "bad"),
                  config_error);
  // Independent letters cannot respect a forbidden transition.
  CHECK_THROWS_AS(MeasureModel::bernoulli(gm, {0.5, 0.5}, "bad"),
                  config_error);
  CHECK_THROWS_AS(MeasureModel::bernoulli(sparse, {0.5, 0.5}, "bad"),
                  config_error);

  CHECK_THROWS_AS(
      MeasureModel::markov(bin, {0.2, 0.8}, {{0.9, 0.1}, {0.1, 0.9}}, "bad"),
      config_error);
  CHECK_THROWS_AS(
      MeasureModel::markov(gm, {0.5, 0.5}, {{0.5, 0.5}, {0.5, 0.5}}, "bad"),
      config_error);

  CHECK_THROWS_AS(MeasureModel::cantor_digit_bernoulli(2, 1.5, "bad"),
                  config_error);
}

TEST_CASE("entropy rates match the closed forms") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  MeasureModel skew = MeasureModel::bernoulli(bin, {0.7, 0.3}, "skew");
  CHECK(skew.entropy_rate() ==
        doctest::Approx(binary_entropy_nats(0.3)).epsilon(1e-12));

  MeasureModel chain = MeasureModel::markov(
      bin, {0.5, 0.5}, {{0.9, 0.1}, {0.1, 0.9}}, "sticky");
  CHECK(chain.entropy_rate() ==
        doctest::Approx(binary_entropy_nats(0.1)).epsilon(1e-12));

  MeasureModel digits = MeasureModel::cantor_digit_bernoulli(3, 0.5, "d3");
  CHECK(digits.entropy_rate() ==
        doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("trajectory sampling is deterministic and law-consistent") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  MeasureModel skew = MeasureModel::bernoulli(bin, {0.7, 0.3}, "skew");

  Rng a(123), b(123);
  CHECK(sample_trajectory(skew, 0, a).empty());
  Point first = sample_trajectory(skew, 32, a);
  (void)sample_trajectory(skew, 0, b);
  Point second = sample_trajectory(skew, 32, b);
  CHECK(first == second);

  Rng freq_rng(2024);
  const std::size_t len = 100000;
  Point long_run = sample_trajectory(skew, len, freq_rng);
  double ones = 0.0;
  for (double v : long_run) {
    CHECK((v == 0.0 || v == 1.0));
    ones += v;
  }
  CHECK(ones / static_cast<double>(len) == doctest::Approx(0.3).epsilon(0.04));

  SubshiftModel gm = SubshiftModel::golden_mean_sft();
  MeasureModel gchain = MeasureModel::markov(
      gm, {2.0 / 3.0, 1.0 / 3.0}, {{0.5, 0.5}, {1.0, 0.0}}, "gm");
  Rng gm_rng(5);
  Point path = sample_trajectory(gchain, 10000, gm_rng);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    CHECK(!(path[i] == 1.0 && path[i + 1] == 1.0));
  }
}

TEST_CASE("stationary measures look the same from both window ends") {
  SubshiftModel bin = SubshiftModel::full_shift_binary();
  MeasureModel skew = MeasureModel::bernoulli(bin, {0.7, 0.3}, "skew");
  CHECK(shift_invariance_check(skew, 3) <= 1e-14);

  MeasureModel chain = MeasureModel::markov(
      bin, {0.5, 0.5}, {{0.9, 0.1}, {0.1, 0.9}}, "sticky");
  CHECK(shift_invariance_check(chain, 2) <= 1e-12);
  CHECK(shift_invariance_check(chain, 4) <= 1e-12);

  SubshiftModel gm = SubshiftModel::golden_mean_sft();
  MeasureModel gchain = MeasureModel::markov(
      gm, {2.0 / 3.0, 1.0 / 3.0}, {{0.5, 0.5}, {1.0, 0.0}}, "gm");
  CHECK(shift_invariance_check(gchain, 3) <= 1e-12);

  MeasureModel digits = MeasureModel::cantor_digit_bernoulli(2, 0.4, "d2");
  CHECK(shift_invariance_check(digits, 3) <= 1e-12);

  CHECK_THROWS_AS(shift_invariance_check(skew, 1), config_error);
}
