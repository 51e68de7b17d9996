#include "meandim/codec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

namespace meandim {

namespace {

double linf_diff(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Point clamp_cube(Point p) {
  for (auto& v : p) v = std::min(1.0, std::max(0.0, v));
  return p;
}

std::size_t nearest_letter(const std::vector<double>& letters, double v) {
  auto it = std::lower_bound(letters.begin(), letters.end(), v);
  if (it == letters.end()) return letters.size() - 1;
  if (it == letters.begin()) return 0;
  std::size_t hi = static_cast<std::size_t>(it - letters.begin());
  std::size_t lo = hi - 1;
  return (v - letters[lo] <= letters[hi] - v) ? lo : hi;
}

}  // namespace

HolderCheckResult holder_check(const std::function<Point(const Point&)>& g,
                               std::size_t domain_dim,
                               const HolderCertificate& cert,
                               const std::vector<std::pair<Point, Point>>&
                                   registered_pairs,
                               std::size_t random_pairs, std::uint64_t seed) {
  if (domain_dim == 0) {
    throw config_error("holder_check: domain dimension must be >= 1");
  }
  if (!(cert.L > 0.0) || !(cert.alpha > 0.0 && cert.alpha <= 1.0)) {
    throw config_error("holder_check: certificate requires L > 0, alpha in (0,1]");
  }
  HolderCheckResult result;
  result.worst_excess = -std::numeric_limits<double>::infinity();

  auto check_pair = [&](const Point& x, const Point& y) {
    double d = linf_diff(x, y);
    double lhs = linf_diff(g(x), g(y));
    double rhs = d > 0.0 ? cert.L * std::pow(d, cert.alpha) : 0.0;
    double excess = lhs - rhs;
    if (excess > kHolderSlack) result.pass = false;
    if (excess > result.worst_excess) result.worst_excess = excess;
    if (d > 0.0) {
      double ratio = lhs / std::pow(d, cert.alpha);
      if (ratio > result.worst_ratio) {
        result.worst_ratio = ratio;
        result.witness_x = x;
        result.witness_y = y;
      }
    }
    ++result.pairs_checked;
  };

  Rng rng(seed);
  for (std::size_t t = 0; t < random_pairs; ++t) {
    Point x(domain_dim), y(domain_dim);
    for (auto& v : x) v = rng.next_uniform();
    for (auto& v : y) v = rng.next_uniform();
    check_pair(x, y);
  }
  for (const auto& [x, y] : registered_pairs) {
    if (x.size() != domain_dim || y.size() != domain_dim) {
      throw config_error("holder_check: registered pair dimension mismatch");
    }
    check_pair(x, y);
  }
  if (result.pairs_checked == 0) {
    throw config_error("holder_check: empty pair set");
  }
  return result;
}

HolderCheckResult holder_check(const CodecPair& codec, std::size_t random_pairs,
                               std::uint64_t seed) {
  if (!codec.certificate.has_value()) {
    throw config_error("holder_check: codec '" + codec.id +
                       "' carries no certificate");
  }
  return holder_check(codec.decompressor, codec.k, *codec.certificate,
                      codec.registered_pairs, random_pairs, seed);
}

CodecReport apply_codec(const CodecPair& codec, const WindowLaw& law,
                        double eps_threshold, double p_norm) {
  if (codec.n != law.n) {
    throw config_error("apply_codec: codec block length " +
                       std::to_string(codec.n) + " vs law window " +
                       std::to_string(law.n));
  }
  CodecReport report;
  report.n = codec.n;
  report.k = codec.k;
  report.rate = static_cast<double>(codec.k) / static_cast<double>(codec.n);
  report.eps_threshold = eps_threshold;
  report.p_norm = p_norm;
  Metric lp = Metric::lp(p_norm);
  DistortionSpec block_mean;
  for (std::size_t i = 0; i < law.atoms.size(); ++i) {
    Point y = codec.decompressor(codec.compressor(law.atoms[i]));
    double prob = law.probs[i];
    if (linf_diff(law.atoms[i], y) > kLosslessTol) {
      report.error_lossless += prob;
    }
    if (distance(law.atoms[i], y, lp) >= eps_threshold - kStrictSlack) {
      report.error_threshold += prob;
    }
    report.mean_distortion += prob * block_mean(law.atoms[i], y);
  }
  return report;
}

CodecReport apply_codec_samples(const CodecPair& codec,
                                const std::vector<Point>& samples,
                                double eps_threshold, double p_norm) {
  if (samples.empty()) {
    throw config_error("apply_codec_samples: empty sample set");
  }
  CodecReport report;
  report.n = codec.n;
  report.k = codec.k;
  report.rate = static_cast<double>(codec.k) / static_cast<double>(codec.n);
  report.eps_threshold = eps_threshold;
  report.p_norm = p_norm;
  report.monte_carlo = true;
  report.sample_count = samples.size();
  Metric lp = Metric::lp(p_norm);
  DistortionSpec block_mean;
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  double sum_d = 0.0, sum_d2 = 0.0;
  for (const auto& x : samples) {
    if (x.size() != codec.n) {
      throw config_error("apply_codec_samples: sample dimension mismatch");
    }
    Point y = codec.decompressor(codec.compressor(x));
    if (linf_diff(x, y) > kLosslessTol) report.error_lossless += inv_n;
    if (distance(x, y, lp) >= eps_threshold - kStrictSlack) {
      report.error_threshold += inv_n;
    }
    double d = block_mean(x, y);
    sum_d += d;
    sum_d2 += d * d;
  }
  report.mean_distortion = sum_d * inv_n;
  const double n_s = static_cast<double>(samples.size());
  auto bernoulli_se = [&](double p) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / n_s);
  };
  report.se_lossless = bernoulli_se(report.error_lossless);
  report.se_threshold = bernoulli_se(report.error_threshold);
  if (samples.size() > 1) {
    double var = (sum_d2 - sum_d * sum_d * inv_n) / (n_s - 1.0);
    report.se_distortion = std::sqrt(std::max(0.0, var) / n_s);
  }
  return report;
}

CodecPair identity_codec(std::size_t n) {
  if (n == 0) {
    throw config_error("identity_codec: n must be >= 1");
  }
  CodecPair codec;
  codec.n = n;
  codec.k = n;
  codec.compressor = [](const Point& x) { return clamp_cube(x); };
  codec.decompressor = [](const Point& y) { return clamp_cube(y); };
  codec.compressor_class = CodecPair::MapClass::Linear;
  codec.decompressor_class = CodecPair::MapClass::Holder;
  codec.certificate = HolderCertificate{1.0, 1.0};
  codec.provenance = CodecPair::Provenance::Identity;
  codec.id = "identity-n" + std::to_string(n);
  codec.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) codec.matrix[i][i] = 1.0;
  codec.norm_lo.assign(n, 0.0);
  codec.norm_hi.assign(n, 1.0);
  return codec;
}

CodecPair digit_pack_codec(const Alphabet& alphabet, std::size_t n,
                           std::size_t k, std::uint64_t capacity_floor) {
  if (n == 0 || k == 0 || k > n) {
    throw config_error("digit_pack_codec: need 1 <= k <= n");
  }
  const std::size_t m = alphabet.size();
  const std::uint64_t base = m + 1;
  const std::size_t q_max = (n + k - 1) / k;

  // Capacity: each output coordinate carries q digits in base (m+1); the
  // number of distinct code values must stay within the configured floor so
  // adjacent codes keep a representable gap.
  double capacity = std::pow(static_cast<double>(base),
                             static_cast<double>(q_max));
  if (capacity > static_cast<double>(capacity_floor)) {
    std::size_t safe_q = 0;
    double acc = 1.0;
    while (acc * static_cast<double>(base) <=
           static_cast<double>(capacity_floor)) {
      acc *= static_cast<double>(base);
      ++safe_q;
    }
    throw digit_capacity_error(
        "digit_pack_codec: base " + std::to_string(base) + " with " +
        std::to_string(q_max) + " digits per coordinate exceeds capacity " +
        std::to_string(capacity_floor) + " (max safe digits per coordinate: " +
        std::to_string(safe_q) + ", i.e. n/k <= " + std::to_string(safe_q) + ")");
  }

  struct Coordinate {
    std::size_t q = 0;
    std::vector<double> code_values;                 // ascending
    std::vector<std::vector<std::size_t>> code_digits;
  };
  auto coords = std::make_shared<std::vector<Coordinate>>(k);
  const auto letters = std::make_shared<std::vector<double>>(alphabet.letters);
  const double inv_base = 1.0 / static_cast<double>(base);

  for (std::size_t j = 0; j < k; ++j) {
    Coordinate& c = (*coords)[j];
    c.q = (n - j + k - 1) / k;  // number of input positions i = j + r k < n
    std::vector<std::size_t> digits(c.q, 0);
    for (;;) {
      double value = 0.0;
      double scale = 1.0;
      for (std::size_t r = 0; r < c.q; ++r) {
        scale *= inv_base;
        value += static_cast<double>(digits[r]) * scale;
      }
      c.code_values.push_back(value);
      c.code_digits.push_back(digits);
      std::size_t pos = c.q;
      while (pos > 0 && digits[pos - 1] + 1 == m) digits[--pos] = 0;
      if (pos == 0) break;
      ++digits[pos - 1];
    }
  }

  const double alpha = 1.0 / static_cast<double>(q_max);

  // Smallest constant that keeps the code-to-letter map Holder of exponent
  // alpha across every coordinate, inflated by a hair so the extension's
  // minimum always lands back on the code's own letters.
  double worst = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const Coordinate& c = (*coords)[j];
    for (std::size_t a = 0; a < c.code_values.size(); ++a) {
      for (std::size_t b2 = a + 1; b2 < c.code_values.size(); ++b2) {
        double gap = std::pow(c.code_values[b2] - c.code_values[a], alpha);
        for (std::size_t r = 0; r < c.q; ++r) {
          double num = std::abs((*letters)[c.code_digits[a][r]] -
                                (*letters)[c.code_digits[b2][r]]);
          if (num > 0.0) worst = std::max(worst, num / gap);
        }
      }
    }
  }
  const double L = worst > 0.0 ? worst * (1.0 + 1e-9) : 1.0;

  CodecPair codec;
  codec.n = n;
  codec.k = k;
  codec.compressor = [coords, letters, n, k, inv_base](const Point& x) {
    if (x.size() != n) {
      throw config_error("digit-pack compressor: dimension mismatch");
    }
    Point out(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const Coordinate& c = (*coords)[j];
      double value = 0.0;
      double scale = 1.0;
      for (std::size_t r = 0; r < c.q; ++r) {
        scale *= inv_base;
        std::size_t digit = nearest_letter(*letters, x[j + r * k]);
        value += static_cast<double>(digit) * scale;
      }
      out[j] = value;
    }
    return out;
  };
  codec.decompressor = [coords, letters, n, k, L, alpha](const Point& y) {
    if (y.size() != k) {
      throw config_error("digit-pack decompressor: dimension mismatch");
    }
    Point out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i % k;
      const std::size_t r = i / k;
      const Coordinate& c = (*coords)[j];
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < c.code_values.size(); ++e) {
        double v = (*letters)[c.code_digits[e][r]] +
                   L * std::pow(std::abs(y[j] - c.code_values[e]), alpha);
        best = std::min(best, v);
      }
      out[i] = std::min(1.0, std::max(0.0, best));
    }
    return out;
  };
  codec.compressor_class = CodecPair::MapClass::Borel;
  codec.decompressor_class = CodecPair::MapClass::Holder;
  codec.certificate = HolderCertificate{L, alpha};
  codec.provenance = CodecPair::Provenance::DigitPack;
  codec.id = "digit-pack-m" + std::to_string(m) + "-n" + std::to_string(n) +
             "-k" + std::to_string(k);

  // Adversarial pairs: straddle every digit boundary (a / base^depth) and
  // every midpoint between adjacent code values, one coordinate at a time.
  const double nudge = 1e-9;
  for (std::size_t j = 0; j < k; ++j) {
    const Coordinate& c = (*coords)[j];
    auto add_pair = [&](double t) {
      Point a(k, 0.5), b2(k, 0.5);
      a[j] = std::min(1.0, std::max(0.0, t - nudge));
      b2[j] = std::min(1.0, std::max(0.0, t + nudge));
      codec.registered_pairs.emplace_back(std::move(a), std::move(b2));
    };
    double step = 1.0;
    for (std::size_t depth = 1; depth <= c.q; ++depth) {
      step *= inv_base;
      std::uint64_t cells = 1;
      for (std::size_t d = 0; d < depth; ++d) cells *= base;
      std::uint64_t limit = std::min<std::uint64_t>(cells - 1, 32);
      for (std::uint64_t a = 1; a <= limit; ++a) {
        add_pair(static_cast<double>(a) * step);
      }
    }
    std::size_t gaps = c.code_values.size() - 1;
    std::size_t stride = gaps > 64 ? (gaps + 63) / 64 : 1;
    for (std::size_t t = 0; t + 1 < c.code_values.size(); t += stride) {
      add_pair(0.5 * (c.code_values[t] + c.code_values[t + 1]));
    }
  }

  HolderCheckResult check = holder_check(codec);
  if (!check.pass) {
    throw std::runtime_error(
        "digit_pack_codec: certificate failed its own construction check "
        "(worst ratio " +
        std::to_string(check.worst_ratio) + " vs L " + std::to_string(L) + ")");
  }
  return codec;
}

namespace {

CodecPair linear_codec_from_matrix(std::size_t n, std::size_t k,
                                   std::vector<std::vector<double>> matrix,
                                   std::uint64_t seed, const WindowLaw& law,
                                   std::string id) {
  if (law.n != n) {
    throw config_error("random_linear_codec: law window length mismatch");
  }
  CodecPair codec;
  codec.n = n;
  codec.k = k;
  codec.seed = seed;
  codec.matrix = std::move(matrix);
  codec.norm_lo.resize(k);
  codec.norm_hi.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = codec.matrix[j][i];
      lo += std::min(a, 0.0);
      hi += std::max(a, 0.0);
    }
    codec.norm_lo[j] = lo;
    codec.norm_hi[j] = hi;
  }
  auto mat = std::make_shared<std::vector<std::vector<double>>>(codec.matrix);
  auto lo = std::make_shared<std::vector<double>>(codec.norm_lo);
  auto hi = std::make_shared<std::vector<double>>(codec.norm_hi);
  codec.compressor = [mat, lo, hi, n, k](const Point& x) {
    if (x.size() != n) {
      throw config_error("linear compressor: dimension mismatch");
    }
    Point out(k);
    for (std::size_t j = 0; j < k; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += (*mat)[j][i] * x[i];
      double den = (*hi)[j] - (*lo)[j];
      out[j] = den > 1e-12 ? (v - (*lo)[j]) / den : 0.5;
      out[j] = std::min(1.0, std::max(0.0, out[j]));
    }
    return out;
  };

  auto atoms = std::make_shared<std::vector<Point>>(law.atoms);
  auto images = std::make_shared<std::vector<Point>>();
  images->reserve(atoms->size());
  for (const auto& atom : *atoms) images->push_back(codec.compressor(atom));
  codec.decompressor = [atoms, images, k](const Point& y) {
    if (y.size() != k) {
      throw config_error("nearest-neighbor decompressor: dimension mismatch");
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < images->size(); ++t) {
      double d = linf_diff(y, (*images)[t]);
      if (d < best_d) {
        best_d = d;
        best = t;
      }
    }
    return (*atoms)[best];
  };
  codec.compressor_class = CodecPair::MapClass::Linear;
  codec.decompressor_class = CodecPair::MapClass::Borel;
  codec.provenance = CodecPair::Provenance::RandomLinear;
  codec.id = std::move(id);
  return codec;
}

}  // namespace

CodecPair random_linear_codec(std::size_t n, std::size_t k, std::uint64_t seed,
                              const WindowLaw& decoder_law) {
  if (n == 0 || k == 0 || k > n) {
    throw config_error("random_linear_codec: need 1 <= k <= n");
  }
  Rng rng(seed, 0xA11CE);
  std::vector<std::vector<double>> matrix(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) matrix[j][i] = rng.next_normal();
  }
  return linear_codec_from_matrix(
      n, k, std::move(matrix), seed, decoder_law,
      "random-linear-n" + std::to_string(n) + "-k" + std::to_string(k) +
          "-seed" + std::to_string(seed));
}

CodecPair random_linear_identity(std::size_t n, const WindowLaw& decoder_law) {
  std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) matrix[i][i] = 1.0;
  return linear_codec_from_matrix(n, n, std::move(matrix), 0, decoder_law,
                                  "random-linear-identity-n" + std::to_string(n));
}

QuantizedBoundRecord quantized_codec_bound(const CodecPair& codec, double eps,
                                           const MeasureModel& measure,
                                           std::size_t n) {
  QuantizedBoundRecord rec;
  rec.eps = eps;
  rec.n = n;
  rec.k = codec.k;
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw config_error("quantized_codec_bound: eps must lie in (0,1]");
  }
  if (codec.n != n) {
    rec.reason = "codec block length does not match n";
    return rec;
  }
  if (!codec.certificate.has_value()) {
    rec.reason = "decompressor carries no regularity certificate";
    return rec;
  }
  rec.L = codec.certificate->L;
  rec.alpha = codec.certificate->alpha;

  HolderCheckResult cert_check = holder_check(codec);
  if (!cert_check.pass) {
    rec.reason = "certificate failed its check (worst ratio " +
                 std::to_string(cert_check.worst_ratio) + ")";
    return rec;
  }

  WindowLaw law = window_law(measure, n);
  CodecReport base = apply_codec(codec, law);
  rec.error_lossless = base.error_lossless;
  if (base.error_lossless > eps) {
    rec.reason = "lossless error " + std::to_string(base.error_lossless) +
                 " exceeds eps " + std::to_string(eps);
    return rec;
  }
  rec.applicable = true;

  // Composite reproduction map: compress, snap to the cell center, decompress.
  Quantizer quant = grid_center_quantizer(codec.k, eps);
  CodecPair composite;
  composite.n = n;
  composite.k = codec.k;
  composite.compressor = codec.compressor;
  auto inner = codec.decompressor;
  composite.decompressor = [inner, quant](const Point& z) {
    return inner(quant.center(z));
  };
  composite.compressor_class = codec.compressor_class;
  composite.decompressor_class = CodecPair::MapClass::Borel;
  composite.provenance = CodecPair::Provenance::QuantizedComposite;
  composite.id = codec.id + "-quantized";

  const double L = rec.L;
  const double alpha = rec.alpha;
  rec.distortion_bound = eps + L * std::pow(eps / 2.0, alpha);

  // Deduplicate reproduced values by quantizer cell so the joint is finite.
  std::map<std::vector<std::uint64_t>, std::size_t> cell_ids;
  std::vector<Point> y_points;
  std::vector<std::size_t> atom_cell(law.atoms.size());
  DistortionSpec block_mean;
  double mean_distortion = 0.0;
  for (std::size_t i = 0; i < law.atoms.size(); ++i) {
    Point z = codec.compressor(law.atoms[i]);
    auto cell = quant.cell_index(z);
    auto [it, inserted] = cell_ids.try_emplace(cell, y_points.size());
    if (inserted) {
      y_points.push_back(inner(quant.center_of_cell(cell)));
    }
    atom_cell[i] = it->second;
    mean_distortion += law.probs[i] * block_mean(law.atoms[i], y_points[it->second]);
  }
  rec.mean_distortion = mean_distortion;
  rec.distortion_ok = mean_distortion <= rec.distortion_bound + 1e-12;

  // The reproduction is a deterministic function of the source, so the
  // mutual information equals H(Y); the explicit joint is materialized when
  // small enough to cross-check through the generic path.
  std::vector<double> py(y_points.size(), 0.0);
  for (std::size_t i = 0; i < law.atoms.size(); ++i) {
    py[atom_cell[i]] += law.probs[i];
  }
  rec.hy_nats = entropy_nats(py);
  if (law.atoms.size() * y_points.size() <= 4000000) {
    std::vector<std::vector<double>> joint(
        law.atoms.size(), std::vector<double>(y_points.size(), 0.0));
    for (std::size_t i = 0; i < law.atoms.size(); ++i) {
      joint[i][atom_cell[i]] = law.probs[i];
    }
    rec.mi_nats = mutual_information(JointDistribution(std::move(joint)));
  } else {
    rec.mi_nats = rec.hy_nats;
  }
  rec.hy_bound = static_cast<double>(codec.k) *
                 std::log(static_cast<double>(ceil_inv(eps)));
  rec.mi_ok = rec.mi_nats <= rec.hy_nats + 1e-9 &&
              rec.hy_nats <= rec.hy_bound + 1e-9;

  rec.rd_eps = (L / std::pow(2.0, alpha) + std::pow(eps, 1.0 - alpha)) *
               std::pow(eps, alpha);
  RdPoint rd = rd_block(measure, n, rec.rd_eps, 1e-6, y_points);
  rec.rd_ratio =
      rd.rate_nats / std::log(static_cast<double>(ceil_inv(eps)));
  rec.rate_bound =
      static_cast<double>(codec.k) / static_cast<double>(n) + kRateSlack;
  rec.rd_ok = rec.rd_ratio <= rec.rate_bound;

  rec.all_ok = rec.distortion_ok && rec.mi_ok && rec.rd_ok;
  return rec;
}

RateSearchResult rate_search(const MeasureModel& measure, CodecFamily family,
                             RateCriterion criterion, double eps, std::size_t n,
                             double p_norm, std::uint64_t seed) {
  if (n == 0) {
    throw config_error("rate_search: n must be >= 1");
  }
  if (!(eps >= 0.0)) {
    throw config_error("rate_search: eps must be >= 0");
  }
  WindowLaw law = window_law(measure, n);
  RateSearchResult result;
  result.achieved = false;
  for (std::size_t k = 1; k <= n; ++k) {
    CodecPair codec;
    try {
      if (family == CodecFamily::DigitPack) {
        codec = digit_pack_codec(measure.model.alphabet, n, k);
      } else {
        codec = random_linear_codec(n, k, seed, law);
      }
    } catch (const digit_capacity_error&) {
      continue;
    }
    CodecReport report = apply_codec(codec, law, eps, p_norm);
    double err = criterion == RateCriterion::Lossless ? report.error_lossless
                                                      : report.error_threshold;
    result.rate = report.rate;
    result.k = k;
    result.report = report;
    result.codec_id = codec.id;
    if (codec.certificate.has_value()) {
      result.L = codec.certificate->L;
      result.alpha = codec.certificate->alpha;
    }
    if (err <= eps) {
      result.achieved = true;
      return result;
    }
  }
  result.rate = 1.0;
  result.k = n;
  return result;
}

}  // namespace meandim
