#include "meandim/subshifts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace meandim {

Alphabet Alphabet::from_letters(std::vector<double> letters) {
  if (letters.empty()) {
    throw config_error("Alphabet: empty letter set");
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (!(letters[i] >= 0.0 && letters[i] <= 1.0)) {
      throw config_error("Alphabet: letter outside [0,1]: " +
                         std::to_string(letters[i]));
    }
    if (i > 0 && !(letters[i] > letters[i - 1])) {
      throw config_error("Alphabet: letters must be strictly increasing");
    }
  }
  return Alphabet{std::move(letters)};
}

Alphabet Alphabet::cantor(int depth) {
  if (depth < 1 || depth > 20) {
    throw config_error("Alphabet::cantor: depth must be in [1,20], got " +
                       std::to_string(depth));
  }
  std::vector<double> letters;
  letters.reserve(std::size_t{1} << depth);
  for (std::uint64_t word = 0; word < (std::uint64_t{1} << depth); ++word) {
    double v = 0.0;
    double scale = 1.0;
    for (int i = 0; i < depth; ++i) {
      scale /= 3.0;
      if ((word >> (depth - 1 - i)) & 1u) v += 2.0 * scale;
    }
    letters.push_back(v);
  }
  std::sort(letters.begin(), letters.end());
  return from_letters(std::move(letters));
}

double Alphabet::min_gap() const {
  if (letters.size() < 2) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < letters.size(); ++i) {
    gap = std::min(gap, letters[i] - letters[i - 1]);
  }
  return gap;
}

std::size_t Alphabet::index_of(double v, double tol) const {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (std::abs(letters[i] - v) <= tol) return i;
  }
  throw config_error("Alphabet: no letter equals " + std::to_string(v));
}

SubshiftModel SubshiftModel::full_shift(Alphabet a, std::string id) {
  SubshiftModel m;
  m.kind = Kind::FullShift;
  m.alphabet = std::move(a);
  m.id = std::move(id);
  return m;
}

SubshiftModel SubshiftModel::sft(Alphabet a,
                                 std::vector<std::vector<bool>> allowed,
                                 std::string id) {
  const std::size_t k = a.size();
  if (allowed.size() != k) {
    throw config_error("SubshiftModel::sft: transition relation size mismatch");
  }
  for (const auto& row : allowed) {
    if (row.size() != k) {
      throw config_error("SubshiftModel::sft: transition relation not square");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < k; ++j) any = any || allowed[i][j];
    if (!any) {
      throw config_error("SubshiftModel::sft: letter " + std::to_string(i) +
                         " has no allowed successor");
    }
  }
  SubshiftModel m;
  m.kind = Kind::Sft;
  m.alphabet = std::move(a);
  m.allowed = std::move(allowed);
  m.id = std::move(id);
  return m;
}

SubshiftModel SubshiftModel::sparse_shift(Alphabet a, std::size_t max_nonzero,
                                          std::size_t window, std::string id) {
  if (a.letters.empty() || a.letters.front() != 0.0) {
    throw config_error("SubshiftModel::sparse_shift: alphabet must contain 0");
  }
  if (window < 1 || window > 20) {
    throw config_error("SubshiftModel::sparse_shift: window must be in [1,20]");
  }
  if (max_nonzero > window) {
    throw config_error(
        "SubshiftModel::sparse_shift: max_nonzero exceeds window length");
  }
  SubshiftModel m;
  m.kind = Kind::SparseShift;
  m.alphabet = std::move(a);
  m.sparse_max_nonzero = max_nonzero;
  m.sparse_window = window;
  m.id = std::move(id);
  return m;
}

SubshiftModel SubshiftModel::full_shift_binary() {
  return full_shift(Alphabet::binary(), "full-shift-binary");
}

SubshiftModel SubshiftModel::golden_mean_sft() {
  std::vector<std::vector<bool>> allowed = {{true, true}, {true, false}};
  return sft(Alphabet::binary(), std::move(allowed), "golden-mean-sft");
}

SubshiftModel SubshiftModel::cantor_full_shift(int depth) {
  SubshiftModel m = full_shift(Alphabet::cantor(depth), "cantor-full-shift");
  m.refinement_depth = depth;
  return m;
}

SubshiftModel SubshiftModel::sparse_shift_default() {
  return sparse_shift(Alphabet::binary(), 1, 3, "sparse-shift");
}

Alphabet SubshiftModel::alphabet_at(int depth) const {
  if (depth <= 0 || depth == refinement_depth) return alphabet;
  if (refinement_depth <= 0) {
    throw config_error("SubshiftModel: model '" + id +
                       "' has no refinement family (depth requested: " +
                       std::to_string(depth) + ")");
  }
  return Alphabet::cantor(depth);
}

namespace {

// log of 1^T A^(n-1) 1 for the 0/1 transition matrix, by repeated
// vector-matrix products with rescaling.
double sft_count_log(const std::vector<std::vector<bool>>& allowed,
                     std::size_t n) {
  const std::size_t k = allowed.size();
  std::vector<double> v(k, 1.0);
  double log_scale = 0.0;
  for (std::size_t step = 1; step < n; ++step) {
    std::vector<double> w(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (allowed[i][j]) w[i] += v[j];
      }
    }
    double m = *std::max_element(w.begin(), w.end());
    if (m <= 0.0) return -std::numeric_limits<double>::infinity();
    for (auto& x : w) x /= m;
    log_scale += std::log(m);
    v = std::move(w);
  }
  double total = 0.0;
  for (double x : v) total += x;
  return log_scale + std::log(total);
}

// Counts sequences whose every length-w subwindow (clipped at the start) has
// at most s nonzero letters.  State: nonzero pattern of the last w-1 letters,
// with positions before the start acting as zeros.
double sparse_count_log(std::size_t letter_count, std::size_t s, std::size_t w,
                        std::size_t n) {
  const double nonzero_choices = static_cast<double>(letter_count - 1);
  const std::size_t state_bits = w - 1;
  const std::size_t state_count = std::size_t{1} << state_bits;
  const std::uint64_t state_mask = state_count - 1;
  std::vector<double> count(state_count, 0.0);
  count[0] = 1.0;
  double log_scale = 0.0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::vector<double> next(state_count, 0.0);
    for (std::size_t st = 0; st < state_count; ++st) {
      if (count[st] == 0.0) continue;
      for (int bit = 0; bit <= 1; ++bit) {
        std::uint64_t window_pattern = (static_cast<std::uint64_t>(st) << 1) | bit;
        if (static_cast<std::size_t>(__builtin_popcountll(window_pattern)) > s) {
          continue;
        }
        std::uint64_t next_state = window_pattern & state_mask;
        double ways = bit ? nonzero_choices : 1.0;
        if (ways == 0.0) continue;
        next[next_state] += count[st] * ways;
      }
    }
    double m = *std::max_element(next.begin(), next.end());
    if (m <= 0.0) return -std::numeric_limits<double>::infinity();
    if (m > 1e250) {
      for (auto& x : next) x /= m;
      log_scale += std::log(m);
    }
    count = std::move(next);
  }
  double total = 0.0;
  for (double x : count) total += x;
  return log_scale + std::log(total);
}

}  // namespace

double window_count_log(const SubshiftModel& model, std::size_t n, int depth) {
  if (n == 0) {
    throw config_error("window_count_log: n must be >= 1");
  }
  Alphabet a = model.alphabet_at(depth);
  switch (model.kind) {
    case SubshiftModel::Kind::FullShift:
      return static_cast<double>(n) * std::log(static_cast<double>(a.size()));
    case SubshiftModel::Kind::Sft:
      return sft_count_log(model.allowed, n);
    case SubshiftModel::Kind::SparseShift:
      if (model.sparse_window == 1) {
        // Every letter is its own window; s = 0 forces all zeros, s = 1 is
        // the full shift.
        return model.sparse_max_nonzero == 0
                   ? 0.0
                   : static_cast<double>(n) *
                         std::log(static_cast<double>(a.size()));
      }
      return sparse_count_log(a.size(), model.sparse_max_nonzero,
                              model.sparse_window, n);
  }
  throw config_error("window_count_log: unknown model kind");
}

PointCloud window_set(const SubshiftModel& model, std::size_t n, int depth,
                      std::size_t cap) {
  if (n == 0) {
    throw config_error("window_set: n must be >= 1");
  }
  double log_count = window_count_log(model, n, depth);
  if (log_count > std::log(static_cast<double>(cap)) + 1e-9) {
    double approx = std::exp(std::min(log_count, 42.0));
    throw cap_exceeded("window_set: too many windows at n=" + std::to_string(n) +
                           ", depth=" + std::to_string(depth),
                       static_cast<std::size_t>(approx), cap);
  }
  Alphabet a = model.alphabet_at(depth);
  const std::size_t m = a.size();
  std::vector<Point> points;
  std::vector<std::size_t> idx;
  idx.reserve(n);

  // DFS in lexicographic letter order; validity of a partial word depends
  // only on its tail, checked incrementally.
  std::function<void()> extend = [&]() {
    if (idx.size() == n) {
      Point p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = a.letters[idx[i]];
      points.push_back(std::move(p));
      return;
    }
    for (std::size_t next = 0; next < m; ++next) {
      bool ok = true;
      if (model.kind == SubshiftModel::Kind::Sft && !idx.empty()) {
        ok = model.allowed[idx.back()][next];
      } else if (model.kind == SubshiftModel::Kind::SparseShift) {
        std::size_t nz = (a.letters[next] != 0.0) ? 1 : 0;
        std::size_t start =
            idx.size() + 1 > model.sparse_window ? idx.size() + 1 - model.sparse_window : 0;
        for (std::size_t i = start; i < idx.size(); ++i) {
          if (a.letters[idx[i]] != 0.0) ++nz;
        }
        ok = nz <= model.sparse_max_nonzero;
      }
      if (ok) {
        idx.push_back(next);
        extend();
        idx.pop_back();
      }
    }
  };
  extend();
  return PointCloud(std::move(points), Metric::linf());
}

MeasureModel MeasureModel::bernoulli(SubshiftModel model,
                                     std::vector<double> probs, std::string id) {
  const std::size_t k = model.alphabet.size();
  if (probs.size() != k) {
    throw config_error("MeasureModel::bernoulli: probability count mismatch");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw config_error("MeasureModel::bernoulli: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw config_error("MeasureModel::bernoulli: probabilities sum to " +
                       std::to_string(sum));
  }
  if (model.kind == SubshiftModel::Kind::Sft) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (probs[i] > 0.0 && probs[j] > 0.0 && !model.allowed[i][j]) {
          throw config_error(
              "MeasureModel::bernoulli: independent letters violate the "
              "transition relation");
        }
      }
    }
  }
  if (model.kind == SubshiftModel::Kind::SparseShift &&
      model.sparse_max_nonzero < model.sparse_window) {
    double nonzero_mass = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (model.alphabet.letters[i] != 0.0) nonzero_mass += probs[i];
    }
    if (nonzero_mass > 0.0) {
      throw config_error(
          "MeasureModel::bernoulli: independent nonzero letters violate the "
          "sparsity constraint");
    }
  }
  MeasureModel mm;
  mm.kind = Kind::Bernoulli;
  mm.model = std::move(model);
  mm.probs = std::move(probs);
  mm.id = std::move(id);
  return mm;
}

MeasureModel MeasureModel::markov(SubshiftModel model,
                                  std::vector<double> initial,
                                  std::vector<std::vector<double>> transition,
                                  std::string id) {
  const std::size_t k = model.alphabet.size();
  if (initial.size() != k || transition.size() != k) {
    throw config_error("MeasureModel::markov: size mismatch");
  }
  double isum = 0.0;
  for (double p : initial) {
    if (p < 0.0) throw config_error("MeasureModel::markov: negative probability");
    isum += p;
  }
  if (std::abs(isum - 1.0) > 1e-12) {
    throw config_error("MeasureModel::markov: initial distribution sums to " +
                       std::to_string(isum));
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (transition[i].size() != k) {
      throw config_error("MeasureModel::markov: transition matrix not square");
    }
    double rsum = 0.0;
    for (double p : transition[i]) {
      if (p < 0.0) throw config_error("MeasureModel::markov: negative probability");
      rsum += p;
    }
    if (std::abs(rsum - 1.0) > 1e-12) {
      throw config_error("MeasureModel::markov: row " + std::to_string(i) +
                         " sums to " + std::to_string(rsum));
    }
  }
  double drift = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double pj = 0.0;
    for (std::size_t i = 0; i < k; ++i) pj += initial[i] * transition[i][j];
    drift += std::abs(pj - initial[j]);
  }
  if (drift > kMarkovStationaryTol) {
    throw config_error(
        "MeasureModel::markov: initial distribution is not stationary "
        "(L1 drift " +
        std::to_string(drift) + ")");
  }
  if (model.kind == SubshiftModel::Kind::Sft) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (transition[i][j] > 0.0 && !model.allowed[i][j]) {
          throw config_error(
              "MeasureModel::markov: transition mass outside the allowed "
              "relation");
        }
      }
    }
  }
  if (model.kind == SubshiftModel::Kind::SparseShift) {
    throw config_error(
        "MeasureModel::markov: first-order chains cannot respect sparse "
        "window constraints in general; not supported");
  }
  MeasureModel mm;
  mm.kind = Kind::Markov;
  mm.model = std::move(model);
  mm.initial = std::move(initial);
  mm.transition = std::move(transition);
  mm.id = std::move(id);
  return mm;
}

MeasureModel MeasureModel::cantor_digit_bernoulli(int depth, double bias,
                                                  std::string id) {
  if (!(bias >= 0.0 && bias <= 1.0)) {
    throw config_error("cantor_digit_bernoulli: bias must lie in [0,1]");
  }
  SubshiftModel model = SubshiftModel::cantor_full_shift(depth);
  const auto& letters = model.alphabet.letters;
  std::vector<double> probs(letters.size(), 0.0);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    // Recover the digit word of the letter and give each digit-2 a factor
    // `bias`, each digit-0 a factor 1-bias.
    double v = letters[i];
    double prob = 1.0;
    for (int d = 0; d < depth; ++d) {
      v *= 3.0;
      if (v >= 1.5) {
        prob *= bias;
        v -= 2.0;
      } else {
        prob *= 1.0 - bias;
      }
    }
    probs[i] = prob;
  }
  double total = 0.0;
  for (double p : probs) total += p;
  for (auto& p : probs) p /= total;
  return bernoulli(std::move(model), std::move(probs), std::move(id));
}

double MeasureModel::entropy_rate() const {
  if (kind == Kind::Bernoulli) {
    return entropy_nats(probs);
  }
  double h = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    h += initial[i] * entropy_nats(transition[i]);
  }
  return h;
}

WindowLaw window_law(const MeasureModel& measure, std::size_t n,
                     std::size_t cap) {
  if (n == 0) {
    throw config_error("window_law: n must be >= 1");
  }
  const auto& letters = measure.model.alphabet.letters;
  const std::size_t k = letters.size();
  WindowLaw law;
  law.n = n;

  std::vector<std::size_t> idx;
  std::function<void(double)> extend = [&](double prob) {
    if (idx.size() == n) {
      Point p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = letters[idx[i]];
      law.atoms.push_back(std::move(p));
      law.probs.push_back(prob);
      if (law.atoms.size() > cap) {
        throw cap_exceeded("window_law: too many atoms at n=" + std::to_string(n),
                           law.atoms.size(), cap);
      }
      return;
    }
    for (std::size_t next = 0; next < k; ++next) {
      double step;
      if (measure.kind == MeasureModel::Kind::Bernoulli) {
        step = measure.probs[next];
      } else {
        step = idx.empty() ? measure.initial[next]
                           : measure.transition[idx.back()][next];
      }
      if (step <= 0.0) continue;
      idx.push_back(next);
      extend(prob * step);
      idx.pop_back();
    }
  };
  extend(1.0);
  return law;
}

Point sample_trajectory(const MeasureModel& measure, std::size_t n, Rng& rng) {
  const auto& letters = measure.model.alphabet.letters;
  const std::size_t k = letters.size();
  Point out;
  out.reserve(n);
  std::size_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double>& dist =
        measure.kind == MeasureModel::Kind::Bernoulli
            ? measure.probs
            : (i == 0 ? measure.initial : measure.transition[prev]);
    double u = rng.next_uniform();
    double acc = 0.0;
    std::size_t choice = k - 1;
    for (std::size_t j = 0; j < k; ++j) {
      acc += dist[j];
      if (u < acc) {
        choice = j;
        break;
      }
    }
    out.push_back(letters[choice]);
    prev = choice;
  }
  return out;
}

double shift_invariance_check(const MeasureModel& measure, std::size_t n) {
  if (n < 2) {
    throw config_error("shift_invariance_check: n must be >= 2");
  }
  WindowLaw law = window_law(measure, n);
  std::map<Point, double> drop_last, drop_first;
  for (std::size_t i = 0; i < law.atoms.size(); ++i) {
    Point head(law.atoms[i].begin(), law.atoms[i].end() - 1);
    Point tail(law.atoms[i].begin() + 1, law.atoms[i].end());
    drop_last[head] += law.probs[i];
    drop_first[tail] += law.probs[i];
  }
  double l1 = 0.0;
  for (const auto& [atom, p] : drop_last) {
    auto it = drop_first.find(atom);
    double q = it == drop_first.end() ? 0.0 : it->second;
    l1 += std::abs(p - q);
  }
  for (const auto& [atom, q] : drop_first) {
    if (drop_last.find(atom) == drop_last.end()) l1 += q;
  }
  return 0.5 * l1;
}

}  // namespace meandim
