#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meandim/common.hpp"
#include "meandim/geometry.hpp"

namespace meandim {

// Finite, strictly increasing letter set inside [0,1].
struct Alphabet {
  std::vector<double> letters;

  static Alphabet from_letters(std::vector<double> letters);
  static Alphabet binary() { return from_letters({0.0, 1.0}); }
  // Left endpoints of the level-`depth` intervals of the middle-thirds Cantor
  // construction: all sums of a_i * 3^{-i} with a_i in {0,2}, i = 1..depth.
  // Nested across depths: every depth-t letter is also a depth-(t+1) letter.
  static Alphabet cantor(int depth);

  std::size_t size() const { return letters.size(); }
  // Smallest gap between adjacent letters (infinity for a single letter).
  double min_gap() const;
  // Index of the letter equal to v within tol; throws config_error if absent.
  std::size_t index_of(double v, double tol = 1e-9) const;
};

// Finitely described shift space over a finite alphabet.  Three families:
//   FullShift    every letter sequence
//   Sft          sequences whose adjacent pairs lie in an allowed relation
//   SparseShift  alphabet contains 0; every length-w subwindow holds at most
//                s nonzero letters (windows clipped at the sequence start)
struct SubshiftModel {
  enum class Kind { FullShift, Sft, SparseShift };

  Kind kind = Kind::FullShift;
  Alphabet alphabet;
  std::vector<std::vector<bool>> allowed;  // Sft only
  std::size_t sparse_max_nonzero = 0;      // SparseShift only
  std::size_t sparse_window = 0;           // SparseShift only
  // When positive, the alphabet refines with depth (Cantor-type); the stored
  // alphabet is the one at `refinement_depth`.
  int refinement_depth = 0;
  std::string id;

  static SubshiftModel full_shift(Alphabet a, std::string id);
  static SubshiftModel sft(Alphabet a, std::vector<std::vector<bool>> allowed,
                           std::string id);
  static SubshiftModel sparse_shift(Alphabet a, std::size_t max_nonzero,
                                    std::size_t window, std::string id);

  // Bundled models.
  static SubshiftModel full_shift_binary();
  static SubshiftModel golden_mean_sft();
  static SubshiftModel cantor_full_shift(int depth);
  static SubshiftModel sparse_shift_default();

  // Alphabet at the requested refinement depth (Cantor-type models only;
  // other kinds return the stored alphabet and require depth <= 0).
  Alphabet alphabet_at(int depth) const;
};

// Natural logarithm of |window_set(model, n, depth)| computed in closed form
// (product count, transfer-matrix count, or sliding-window DP) without
// enumerating windows.
double window_count_log(const SubshiftModel& model, std::size_t n, int depth = 0);

// Exact enumeration of the length-n windows, lexicographically ordered, as a
// cloud under the max metric.  Throws cap_exceeded when the window count
// exceeds `cap`.
PointCloud window_set(const SubshiftModel& model, std::size_t n, int depth = 0,
                      std::size_t cap = kWindowCap);

// Stationary measure on a subshift.  Bernoulli draws letters independently;
// Markov draws a stationary chain.  Support is validated against the model at
// construction.
struct MeasureModel {
  enum class Kind { Bernoulli, Markov };

  Kind kind = Kind::Bernoulli;
  SubshiftModel model;
  std::vector<double> probs;                    // Bernoulli, aligned with letters
  std::vector<double> initial;                  // Markov stationary distribution
  std::vector<std::vector<double>> transition;  // Markov rows
  std::string id;

  static MeasureModel bernoulli(SubshiftModel model, std::vector<double> probs,
                                std::string id);
  static MeasureModel markov(SubshiftModel model, std::vector<double> initial,
                             std::vector<std::vector<double>> transition,
                             std::string id);
  // Product measure on the depth-t Cantor full shift whose base-3 digits are
  // independently 2 with probability `bias` (and 0 otherwise).
  static MeasureModel cantor_digit_bernoulli(int depth, double bias,
                                             std::string id);

  // Per-letter entropy rate in nats.
  double entropy_rate() const;
};

// Law of the first n coordinates.  Atoms are lexicographically sorted windows
// with positive probability.
struct WindowLaw {
  std::size_t n = 0;
  std::vector<Point> atoms;
  std::vector<double> probs;
};

WindowLaw window_law(const MeasureModel& measure, std::size_t n,
                     std::size_t cap = kWindowCap);

// One sampled window of length n; deterministic given the generator state.
Point sample_trajectory(const MeasureModel& measure, std::size_t n, Rng& rng);

// Total-variation distance between the (n-1)-coordinate law obtained by
// dropping the last coordinate of the n-window law and the one obtained by
// dropping the first.  Zero for stationary measures up to rounding.
double shift_invariance_check(const MeasureModel& measure, std::size_t n);

}  // namespace meandim
