#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meandim/common.hpp"
#include "meandim/geometry.hpp"
#include "meandim/ratedistortion.hpp"
#include "meandim/subshifts.hpp"

namespace meandim {

// Claimed regularity of a decompressor: ||g(x)-g(y)||_inf <= L ||x-y||_inf^alpha.
struct HolderCertificate {
  double L = 1.0;
  double alpha = 1.0;
};

// Compressor/decompressor pair between [0,1]^n and [0,1]^k with class tags
// and construction provenance.
struct CodecPair {
  enum class Provenance { Identity, DigitPack, RandomLinear, QuantizedComposite };
  enum class MapClass { Borel, Linear, Holder };

  std::size_t n = 0;
  std::size_t k = 0;
  std::function<Point(const Point&)> compressor;
  std::function<Point(const Point&)> decompressor;
  MapClass compressor_class = MapClass::Borel;
  MapClass decompressor_class = MapClass::Borel;
  std::optional<HolderCertificate> certificate;  // present iff Holder class
  Provenance provenance = Provenance::Identity;
  std::string id;
  std::uint64_t seed = 0;
  // Adversarial pair set in [0,1]^k x [0,1]^k registered by the construction
  // (cell-boundary straddlers and the like); holder_check always includes it.
  std::vector<std::pair<Point, Point>> registered_pairs;
  // Linear compressors record their matrix and the affine normalization
  // u = (Ax - lo) / (hi - lo) that lands the image inside the cube.
  std::vector<std::vector<double>> matrix;
  std::vector<double> norm_lo;
  std::vector<double> norm_hi;
};

struct HolderCheckResult {
  bool pass = true;
  double worst_ratio = 0.0;  // max ||g(x)-g(y)||_inf / ||x-y||_inf^alpha
  double worst_excess = 0.0; // max lhs - (L d^alpha + slack)
  Point witness_x;
  Point witness_y;
  std::size_t pairs_checked = 0;
};

// Verifies the certificate on seeded random pairs plus every registered
// adversarial pair.  Pass means every pair satisfied the bound within
// kHolderSlack; the worst ratio witness is returned either way.
HolderCheckResult holder_check(const std::function<Point(const Point&)>& g,
                               std::size_t domain_dim,
                               const HolderCertificate& cert,
                               const std::vector<std::pair<Point, Point>>&
                                   registered_pairs,
                               std::size_t random_pairs = 10000,
                               std::uint64_t seed = 0x5eedf00d);

HolderCheckResult holder_check(const CodecPair& codec,
                               std::size_t random_pairs = 10000,
                               std::uint64_t seed = 0x5eedf00d);

// Round-trip quality of a codec under a window law (exact expectation) or a
// sample set (Monte-Carlo with standard errors).
struct CodecReport {
  std::size_t n = 0;
  std::size_t k = 0;
  double rate = 0.0;             // k/n
  double error_lossless = 0.0;   // mass of windows not reproduced exactly
  double error_threshold = 0.0;  // mass of windows with ||x-y||_p >= eps
  double mean_distortion = 0.0;  // E (1/n) sum |x_i - y_i|
  double eps_threshold = 0.0;
  double p_norm = 2.0;
  bool monte_carlo = false;
  std::size_t sample_count = 0;
  double se_lossless = 0.0;
  double se_threshold = 0.0;
  double se_distortion = 0.0;
};

CodecReport apply_codec(const CodecPair& codec, const WindowLaw& law,
                        double eps_threshold = 0.0, double p_norm = 2.0);

CodecReport apply_codec_samples(const CodecPair& codec,
                                const std::vector<Point>& samples,
                                double eps_threshold = 0.0, double p_norm = 2.0);

// Identity pair (k = n) in both the Linear and Holder classes.
CodecPair identity_codec(std::size_t n);

// Packs base-(m+1) digit streams of the alphabet indices into k coordinates,
// interleaving input position i into output coordinate i mod k.  The top
// digit m stays unused so distinct streams never collide by carries.  The
// decompressor extends off the code set with the smallest constant that keeps
// it Holder of exponent 1/ceil(n/k); the certificate is verified at
// construction against random and registered boundary pairs.  Exactly
// lossless on the model's windows.  Throws digit_capacity_error when a
// coordinate would carry more than `capacity_floor` code values.
CodecPair digit_pack_codec(const Alphabet& alphabet, std::size_t n,
                           std::size_t k,
                           std::uint64_t capacity_floor = kDigitCapacityFloor);

// Seeded Gaussian linear compressor with recorded affine normalization into
// the cube, decoded by nearest neighbor over the compressed atom images.
CodecPair random_linear_codec(std::size_t n, std::size_t k, std::uint64_t seed,
                              const WindowLaw& decoder_law);

// Same decoder, but the compressor is the identity embedding (k = n).
CodecPair random_linear_identity(std::size_t n, const WindowLaw& decoder_law);

// Outcome of the quantized-composite verification chain: quantize the
// compressed value on a grid of pitch eps, decompress the cell center, and
// check (i) the mean distortion bound, (ii) the mutual-information/entropy
// bound, and (iii) that the block rate-distortion value at the induced
// distortion stays below k/n.
struct QuantizedBoundRecord {
  bool applicable = false;
  std::string reason;  // populated when inapplicable
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  double L = 0.0;
  double alpha = 1.0;
  double error_lossless = 0.0;

  double mean_distortion = 0.0;
  double distortion_bound = 0.0;  // eps + L (eps/2)^alpha
  bool distortion_ok = false;

  double mi_nats = 0.0;
  double hy_nats = 0.0;
  double hy_bound = 0.0;  // k log ceil(1/eps)
  bool mi_ok = false;

  double rd_eps = 0.0;    // (L/2^alpha + eps^(1-alpha)) eps^alpha
  double rd_ratio = 0.0;  // rd rate per letter / log ceil(1/eps)
  double rate_bound = 0.0;  // k/n + kRateSlack
  bool rd_ok = false;

  bool all_ok = false;
};

QuantizedBoundRecord quantized_codec_bound(const CodecPair& codec, double eps,
                                           const MeasureModel& measure,
                                           std::size_t n);

// Compression-rate search over a codec family, smallest k first.
struct RateSearchResult {
  double rate = 1.0;
  std::size_t k = 0;
  bool achieved = false;  // false when no k <= n met the criterion
  CodecReport report;
  double L = 0.0;         // certificate of the achieving codec, when present
  double alpha = 1.0;
  std::string codec_id;
};

enum class CodecFamily { DigitPack, RandomLinear };
enum class RateCriterion { Lossless, Threshold };

// Smallest k/n whose codec meets the error criterion at level eps; an upper
// bound on the best achievable rate.  DigitPack uses the measure's alphabet;
// RandomLinear draws one matrix per k from `seed`.  Infeasible k (digit
// capacity) are skipped.
RateSearchResult rate_search(const MeasureModel& measure, CodecFamily family,
                             RateCriterion criterion, double eps, std::size_t n,
                             double p_norm = 2.0, std::uint64_t seed = 0);

}  // namespace meandim
