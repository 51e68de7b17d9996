#include "meandim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "meandim/codec.hpp"
#include "meandim/dimensions.hpp"
#include "meandim/geometry.hpp"
#include "meandim/ratedistortion.hpp"
#include "meandim/subshifts.hpp"

namespace meandim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_index(std::size_t v) { return std::to_string(v); }

std::string fmt_bool(bool v) { return v ? "1" : "0"; }

// CSV cells never carry separators: free-text fields are sanitized instead of
// quoted so downstream split-on-comma stays valid.
std::string csv_text(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("config: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw config_error("config: top level must be an object");
  return j;
}

const json* find(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const char* key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) throw config_error(path + "." + key + ": missing required field");
  return *v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw config_error(path + ": expected a number");
  return j.get<double>();
}

std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw config_error(path + ": expected a nonnegative integer");
  }
  return static_cast<std::size_t>(j.get<long long>());
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw config_error(path + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw config_error(path + ": expected a nonempty array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::size_t> as_index_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw config_error(path + ": expected a nonempty array of integers");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_index(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

double number_or(const json& j, const char* key, const std::string& path,
                 double fallback) {
  const json* v = find(j, key);
  return v ? as_number(*v, path + "." + std::string(key)) : fallback;
}

SubshiftModel build_model(const json& m) {
  std::string kind = as_string(require(m, "kind", "model"), "model.kind");
  if (kind == "full-shift-binary") return SubshiftModel::full_shift_binary();
  if (kind == "golden-mean-sft") return SubshiftModel::golden_mean_sft();
  if (kind == "sparse-shift") return SubshiftModel::sparse_shift_default();
  if (kind == "cantor-full-shift") {
    int depth = static_cast<int>(as_index(require(m, "depth", "model"), "model.depth"));
    return SubshiftModel::cantor_full_shift(depth);
  }
  throw config_error("model.kind: unknown model '" + kind +
                     "'; bundled kinds: full-shift-binary, golden-mean-sft, "
                     "cantor-full-shift, sparse-shift");
}

MeasureModel build_measure(const json& m, const SubshiftModel& model,
                           const std::string& path) {
  std::string id = as_string(require(m, "id", path), path + ".id");
  std::string kind = as_string(require(m, "kind", path), path + ".kind");
  if (kind == "bernoulli") {
    return MeasureModel::bernoulli(
        model, as_number_array(require(m, "probs", path), path + ".probs"), id);
  }
  if (kind == "markov") {
    const json& rows = require(m, "transition", path);
    if (!rows.is_array() || rows.empty()) {
      throw config_error(path + ".transition: expected an array of rows");
    }
    std::vector<std::vector<double>> transition;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      transition.push_back(as_number_array(
          rows[i], path + ".transition[" + std::to_string(i) + "]"));
    }
    return MeasureModel::markov(
        model, as_number_array(require(m, "initial", path), path + ".initial"),
        std::move(transition), id);
  }
  if (kind == "cantor-digit") {
    int depth = static_cast<int>(as_index(require(m, "depth", path), path + ".depth"));
    double bias = as_number(require(m, "bias", path), path + ".bias");
    return MeasureModel::cantor_digit_bernoulli(depth, bias, id);
  }
  throw config_error(path + ".kind: unknown measure kind '" + kind +
                     "'; known kinds: bernoulli, markov, cantor-digit");
}

struct RbRow {
  std::string measure_id;
  std::size_t n = 0;
  double delta = 0.0;
  double value = 0.0;
};

struct RdCell {
  std::string measure_id;
  std::size_t n = 0;
  double eps = 0.0;
  RdPoint point;
};

struct CodecRow {
  std::string codec_id;
  std::string provenance;
  std::string measure_id;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool has_certificate = false;
  double L = 0.0;
  double alpha = 0.0;
  bool holder_pass = true;
  double holder_worst_ratio = 0.0;
  CodecReport report;
};

struct BoundRow {
  std::string codec_id;
  std::string measure_id;
  QuantizedBoundRecord record;
};

struct SearchRow {
  std::string search_id;
  std::string family;
  std::string criterion;
  std::string measure_id;
  std::size_t n = 0;
  double eps = 0.0;
  RateSearchResult result;
};

std::string provenance_name(CodecPair::Provenance p) {
  switch (p) {
    case CodecPair::Provenance::Identity: return "identity";
    case CodecPair::Provenance::DigitPack: return "digit-pack";
    case CodecPair::Provenance::RandomLinear: return "random-linear";
    case CodecPair::Provenance::QuantizedComposite: return "quantized-composite";
  }
  return "unknown";
}

struct Harness {
  RunOptions opt;
  json cfg;
  SubshiftModel model;
  std::vector<std::pair<std::string, MeasureModel>> measures;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int jobs = 1;
  fs::path out;

  bool mdim_ran = false;
  bool mbdim_ran = false;
  bool span_ran = false;
  bool variational_ran = false;
  DimensionEstimate mdim;
  DimensionEstimate mbdim;
  SpanRate span;
  double span_eps = 0.0;
  std::vector<RbRow> rb_rows;
  std::vector<RdCell> rd_cells;
  VariationalSweep vsweep;
  std::vector<CodecRow> codec_rows;
  std::map<std::string, CodecPair> codec_pairs;
  std::vector<BoundRow> bound_rows;
  std::vector<SearchRow> search_rows;
  VerificationReport report;

  const MeasureModel& measure(const std::string& id, const std::string& path) const {
    for (const auto& [mid, m] : measures) {
      if (mid == id) return m;
    }
    throw config_error(path + ": unknown measure id '" + id +
                       "' (declare it in the measures section)");
  }

  void load() {
    cfg = load_json(opt.config_path);
    const json& version = require(cfg, "schema_version", "config");
    if (!version.is_number_integer() || version.get<long long>() != 1) {
      throw config_error("config.schema_version: this build reads version 1");
    }
    if (const json* s = find(cfg, "seed")) {
      if (!s->is_number_integer() || s->get<long long>() < 0) {
        throw config_error("config.seed: expected a nonnegative integer");
      }
      seed = s->get<std::uint64_t>();
      has_seed = true;
    }
    if (opt.seed_override.has_value()) {
      seed = *opt.seed_override;
      has_seed = true;
    }
    jobs = opt.jobs;
    if (jobs <= 0) {
      unsigned hw = std::thread::hardware_concurrency();
      jobs = hw == 0 ? 1 : static_cast<int>(hw);
    }
    std::string dir = opt.out_dir;
    if (dir.empty()) {
      const json* od = find(cfg, "out_dir");
      dir = od ? as_string(*od, "config.out_dir") : std::string("out");
    }
    out = fs::path(dir);
    model = build_model(require(cfg, "model", "config"));
    if (const json* ms = find(cfg, "measures")) {
      if (!ms->is_array()) throw config_error("measures: expected an array");
      for (std::size_t i = 0; i < ms->size(); ++i) {
        std::string path = "measures[" + std::to_string(i) + "]";
        MeasureModel m = build_measure((*ms)[i], model, path);
        for (const auto& [mid, existing] : measures) {
          (void)existing;
          if (mid == m.id) throw config_error(path + ".id: duplicate measure id '" + m.id + "'");
        }
        std::string mid = m.id;
        measures.emplace_back(std::move(mid), std::move(m));
      }
    }
    bool wants_random = false;
    for (const char* key : {"codecs", "rate_search"}) {
      if (const json* arr = find(cfg, key)) {
        if (arr->is_array()) {
          for (const auto& entry : *arr) {
            const json* fam = find(entry, "family");
            if (fam && fam->is_string() && fam->get<std::string>() == "random-linear") {
              wants_random = true;
            }
          }
        }
      }
    }
    if (wants_random && !has_seed) {
      throw config_error("seed: required (config field or --seed) when "
                         "random-linear codecs are configured");
    }
  }

  std::vector<int> depth_schedule_of(const json& section, const std::string& path,
                                     std::size_t eps_count) {
    const json* ds = find(section, "depth_schedule");
    if (!ds) return {};
    std::vector<std::size_t> raw = as_index_array(*ds, path + ".depth_schedule");
    if (raw.size() != eps_count) {
      throw config_error(path + ".depth_schedule: length must match eps_grid");
    }
    return std::vector<int>(raw.begin(), raw.end());
  }

  void run_mdim() {
    const json* section = find(cfg, "mdim");
    if (!section) return;
    std::string path = "mdim";
    std::vector<double> eps = as_number_array(require(*section, "eps_grid", path),
                                              path + ".eps_grid");
    std::vector<std::size_t> n = as_index_array(require(*section, "n_grid", path),
                                                path + ".n_grid");
    mdim = mdim_profile(model, eps, n, depth_schedule_of(*section, path, eps.size()));
    mdim_ran = true;
  }

  void run_mbdim() {
    const json* section = find(cfg, "mbdim");
    if (!section) return;
    std::string path = "mbdim";
    std::vector<double> eps = as_number_array(require(*section, "eps_grid", path),
                                              path + ".eps_grid");
    std::vector<std::size_t> n = as_index_array(require(*section, "n_grid", path),
                                                path + ".n_grid");
    mbdim = mbdim_estimate(model, n, eps, depth_schedule_of(*section, path, eps.size()));
    mbdim_ran = true;
  }

  void run_span() {
    const json* section = find(cfg, "span");
    if (!section) return;
    std::string path = "span";
    span_eps = as_number(require(*section, "eps", path), path + ".eps");
    std::vector<std::size_t> n = as_index_array(require(*section, "n_grid", path),
                                                path + ".n_grid");
    int depth = 0;
    if (const json* d = find(*section, "depth")) {
      depth = static_cast<int>(as_index(*d, path + ".depth"));
    }
    span = span_rate(model, span_eps, n, depth);
    span_ran = true;
  }

  void run_rb() {
    const json* section = find(cfg, "rb");
    if (!section) return;
    if (!section->is_array()) throw config_error("rb: expected an array of entries");
    for (std::size_t i = 0; i < section->size(); ++i) {
      std::string path = "rb[" + std::to_string(i) + "]";
      const json& entry = (*section)[i];
      std::string mid = as_string(require(entry, "measure", path), path + ".measure");
      const MeasureModel& m = measure(mid, path + ".measure");
      std::size_t n = as_index(require(entry, "n", path), path + ".n");
      std::vector<double> deltas = as_number_array(require(entry, "deltas", path),
                                                   path + ".deltas");
      std::vector<double> eps = as_number_array(require(entry, "eps_grid", path),
                                                path + ".eps_grid");
      std::vector<double> values = rb_upper_bounds(m, deltas, n, eps);
      for (std::size_t d = 0; d < deltas.size(); ++d) {
        rb_rows.push_back(RbRow{mid, n, deltas[d], values[d]});
      }
    }
  }

  void run_rd() {
    const json* section = find(cfg, "rd");
    if (!section) return;
    if (!section->is_array()) throw config_error("rd: expected an array of sweeps");
    struct Task {
      std::string measure_id;
      std::size_t n;
      double eps;
      double tol;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < section->size(); ++i) {
      std::string path = "rd[" + std::to_string(i) + "]";
      const json& sweep = (*section)[i];
      const json& mids = require(sweep, "measures", path);
      if (!mids.is_array() || mids.empty()) {
        throw config_error(path + ".measures: expected a nonempty array of ids");
      }
      std::vector<double> eps = as_number_array(require(sweep, "eps_grid", path),
                                                path + ".eps_grid");
      std::vector<std::size_t> ns = as_index_array(require(sweep, "n_grid", path),
                                                   path + ".n_grid");
      double tol = number_or(sweep, "tol", path, 1e-6);
      for (std::size_t mi = 0; mi < mids.size(); ++mi) {
        std::string mid = as_string(mids[mi], path + ".measures[" + std::to_string(mi) + "]");
        measure(mid, path + ".measures");  // validate before the parallel phase
        for (double e : eps) {
          for (std::size_t n : ns) tasks.push_back(Task{mid, n, e, tol});
        }
      }
    }
    std::vector<RdPoint> points(tasks.size());
    parallel_for(jobs, tasks.size(), [&](std::size_t i) {
      const Task& t = tasks[i];
      points[i] = rd_block(measure(t.measure_id, "rd"), t.n, t.eps, t.tol);
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      rd_cells.push_back(RdCell{tasks[i].measure_id, tasks[i].n, tasks[i].eps, points[i]});
    }
  }

  void run_variational() {
    const json* section = find(cfg, "variational");
    if (!section) return;
    std::string path = "variational";
    const json& mids = require(*section, "measures", path);
    if (!mids.is_array() || mids.empty()) {
      throw config_error(path + ".measures: expected a nonempty array of ids");
    }
    std::vector<MeasureModel> grid;
    for (std::size_t i = 0; i < mids.size(); ++i) {
      grid.push_back(measure(as_string(mids[i], path + ".measures[" + std::to_string(i) + "]"),
                             path + ".measures"));
    }
    std::vector<double> eps = as_number_array(require(*section, "eps_grid", path),
                                              path + ".eps_grid");
    std::vector<std::size_t> ns = as_index_array(require(*section, "n_grid", path),
                                                 path + ".n_grid");
    double tol = number_or(*section, "tol", path, 1e-6);
    vsweep = variational_sweep(grid, eps, ns, tol, jobs);
    variational_ran = true;
  }

  CodecPair build_codec(const json& entry, const std::string& path,
                        const MeasureModel& m, std::uint64_t entry_seed) {
    std::string family = as_string(require(entry, "family", path), path + ".family");
    std::size_t n = as_index(require(entry, "n", path), path + ".n");
    if (family == "identity") return identity_codec(n);
    std::size_t k = as_index(require(entry, "k", path), path + ".k");
    if (family == "digit-pack") return digit_pack_codec(m.model.alphabet, n, k);
    if (family == "random-linear") {
      return random_linear_codec(n, k, entry_seed, window_law(m, n));
    }
    throw config_error(path + ".family: unknown codec family '" + family +
                       "'; known families: identity, digit-pack, random-linear");
  }

  void run_codecs() {
    const json* section = find(cfg, "codecs");
    if (!section) return;
    if (!section->is_array()) throw config_error("codecs: expected an array of entries");
    for (std::size_t i = 0; i < section->size(); ++i) {
      std::string path = "codecs[" + std::to_string(i) + "]";
      const json& entry = (*section)[i];
      std::string mid = as_string(require(entry, "measure", path), path + ".measure");
      const MeasureModel& m = measure(mid, path + ".measure");
      double eps_threshold = number_or(entry, "eps_threshold", path, 0.0);
      double p_norm = number_or(entry, "p_norm", path, 2.0);
      std::vector<std::uint64_t> entry_seeds;
      if (const json* s = find(entry, "seeds")) {
        for (std::size_t si = 0; si < s->size(); ++si) {
          entry_seeds.push_back(as_index(
              (*s)[si], path + ".seeds[" + std::to_string(si) + "]"));
        }
        if (entry_seeds.empty()) {
          throw config_error(path + ".seeds: expected a nonempty array");
        }
      } else {
        entry_seeds.push_back(seed);
      }
      for (std::uint64_t entry_seed : entry_seeds) {
        CodecPair codec = build_codec(entry, path, m, entry_seed);
        WindowLaw law = window_law(m, codec.n);
        CodecRow row;
        row.codec_id = codec.id;
        row.provenance = provenance_name(codec.provenance);
        row.measure_id = mid;
        row.n = codec.n;
        row.k = codec.k;
        row.seed = codec.seed;
        row.report = apply_codec(codec, law, eps_threshold, p_norm);
        if (codec.certificate.has_value()) {
          row.has_certificate = true;
          row.L = codec.certificate->L;
          row.alpha = codec.certificate->alpha;
          HolderCheckResult check = holder_check(codec);
          row.holder_pass = check.pass;
          row.holder_worst_ratio = check.worst_ratio;
        }
        codec_rows.push_back(std::move(row));
        codec_pairs.emplace(codec.id, std::move(codec));
      }
    }
  }

  void run_quantized() {
    const json* section = find(cfg, "quantized");
    if (!section) return;
    if (!section->is_array()) throw config_error("quantized: expected an array of entries");
    for (std::size_t i = 0; i < section->size(); ++i) {
      std::string path = "quantized[" + std::to_string(i) + "]";
      const json& entry = (*section)[i];
      std::string cid = as_string(require(entry, "codec", path), path + ".codec");
      auto it = codec_pairs.find(cid);
      if (it == codec_pairs.end()) {
        std::string known;
        for (const auto& [id, pair] : codec_pairs) {
          (void)pair;
          known += known.empty() ? id : "; " + id;
        }
        throw config_error(path + ".codec: no codec '" + cid +
                           "' built by the codecs section (built: " + known + ")");
      }
      std::string mid = as_string(require(entry, "measure", path), path + ".measure");
      const MeasureModel& m = measure(mid, path + ".measure");
      std::vector<double> eps = as_number_array(require(entry, "eps_grid", path),
                                                path + ".eps_grid");
      for (double e : eps) {
        bound_rows.push_back(
            BoundRow{cid, mid, quantized_codec_bound(it->second, e, m, it->second.n)});
      }
    }
  }

  void run_rate_search() {
    const json* section = find(cfg, "rate_search");
    if (!section) return;
    if (!section->is_array()) throw config_error("rate_search: expected an array of entries");
    for (std::size_t i = 0; i < section->size(); ++i) {
      std::string path = "rate_search[" + std::to_string(i) + "]";
      const json& entry = (*section)[i];
      SearchRow row;
      row.search_id = as_string(require(entry, "id", path), path + ".id");
      row.family = as_string(require(entry, "family", path), path + ".family");
      row.criterion = as_string(require(entry, "criterion", path), path + ".criterion");
      row.measure_id = as_string(require(entry, "measure", path), path + ".measure");
      row.n = as_index(require(entry, "n", path), path + ".n");
      row.eps = as_number(require(entry, "eps", path), path + ".eps");
      CodecFamily family;
      if (row.family == "digit-pack") {
        family = CodecFamily::DigitPack;
      } else if (row.family == "random-linear") {
        family = CodecFamily::RandomLinear;
      } else {
        throw config_error(path + ".family: unknown family '" + row.family +
                           "'; known families: digit-pack, random-linear");
      }
      RateCriterion criterion;
      if (row.criterion == "lossless") {
        criterion = RateCriterion::Lossless;
      } else if (row.criterion == "threshold") {
        criterion = RateCriterion::Threshold;
      } else {
        throw config_error(path + ".criterion: unknown criterion '" + row.criterion +
                           "'; known criteria: lossless, threshold");
      }
      double p_norm = number_or(entry, "p_norm", path, 2.0);
      std::uint64_t entry_seed = seed;
      if (const json* s = find(entry, "seed")) entry_seed = as_index(*s, path + ".seed");
      row.result = rate_search(measure(row.measure_id, path + ".measure"), family,
                               criterion, row.eps, row.n, p_norm, entry_seed);
      search_rows.push_back(std::move(row));
    }
  }

  // ---- checks ----

  const CheckInfo& info_of(const std::string& id) const {
    for (const auto& info : check_registry()) {
      if (info.id == id) return info;
    }
    throw config_error("checks: unknown check id '" + id +
                       "' (run the list subcommand for the registry)");
  }

  CheckRow base_row(const std::string& name, const std::string& check_id) const {
    CheckRow row;
    row.name = name;
    row.claim = info_of(check_id).claim;
    return row;
  }

  void push_bound_row(CheckRow row, bool pass) {
    row.verdict = pass ? "pass" : "fail";
    report.rows.push_back(std::move(row));
  }

  const SearchRow& search_by_id(const std::string& id, const std::string& path) const {
    for (const auto& row : search_rows) {
      if (row.search_id == id) return row;
    }
    throw config_error(path + ": no rate_search entry with id '" + id + "'");
  }

  double rb_value_at(const std::string& mid, double delta, std::size_t n,
                     const std::string& path) const {
    for (const auto& row : rb_rows) {
      if (row.measure_id == mid && row.n == n &&
          std::abs(row.delta - delta) <= 1e-12) {
        return row.value;
      }
    }
    throw config_error(path + ": the rb section holds no row for measure '" + mid +
                       "' at delta " + fmt_num(delta) + " and n " + fmt_index(n));
  }

  void check_mdim_le_mbdim(const json& params, const std::string& path) {
    if (!mdim_ran || !mbdim_ran) {
      throw config_error(path + ": needs both the mdim and mbdim sections");
    }
    double tol = number_or(params, "tolerance", path, 0.02);
    CheckRow row = base_row("mdim-le-mbdim", "mdim-le-mbdim");
    row.left = mdim.value;
    row.relation = "<=";
    row.right = mbdim.value;
    row.tolerance = tol;
    row.left_source = "mdim.csv";
    row.right_source = "mbdim.csv";
    push_bound_row(std::move(row), mdim.value <= mbdim.value + tol);
  }

  void check_alphabet_identity(const json& params, const std::string& path) {
    if (!mdim_ran) throw config_error(path + ": needs the mdim section");
    if (model.kind != SubshiftModel::Kind::FullShift) {
      throw config_error(path + ": applies to full-shift models only");
    }
    double tol = number_or(params, "tolerance", path, 0.05);
    std::vector<std::pair<double, double>> log_counts;
    for (std::size_t i = 0; i < mdim.eps_grid.size(); ++i) {
      int depth = 0;
      for (const auto& cell : mdim.table) {
        if (cell.eps == mdim.eps_grid[i]) {
          depth = cell.depth;
          break;
        }
      }
      Alphabet a = model.alphabet_at(depth);
      std::vector<Point> pts;
      for (double letter : a.letters) pts.push_back(Point{letter});
      PointCloud cloud(std::move(pts), Metric::linf());
      std::size_t boxes = grid_box_count(cloud, mdim.eps_grid[i]);
      log_counts.emplace_back(mdim.eps_grid[i], std::log(static_cast<double>(boxes)));
    }
    DimensionEstimate letter_fit = box_dimension_fit_log(log_counts);
    CheckRow row = base_row("fullshift-alphabet-identity", "fullshift-alphabet-identity");
    row.left = mdim.value;
    row.relation = "~=";
    row.right = letter_fit.value;
    row.tolerance = tol;
    row.left_source = "mdim.csv";
    row.right_source = "letter-set grid box counts over the mdim scale grid";
    push_bound_row(std::move(row), std::abs(mdim.value - letter_fit.value) <= tol);
  }

  void check_mdim_decay(const json& params, const std::string& path) {
    if (!mdim_ran) throw config_error(path + ": needs the mdim section");
    double target_eps = number_or(params, "eps", path, 1e-3);
    double bound = number_or(params, "bound", path, 0.12);
    std::vector<double> ratios;
    std::size_t n_max = *std::max_element(mdim.n_grid.begin(), mdim.n_grid.end());
    for (double eps : mdim.eps_grid) {
      for (const auto& cell : mdim.table) {
        if (cell.eps == eps && cell.n == n_max) {
          ratios.push_back(cell.ratio);
          break;
        }
      }
    }
    if (ratios.size() != mdim.eps_grid.size()) {
      throw config_error(path + ": mdim table lacks largest-n rows");
    }
    const double* at_target = nullptr;
    for (std::size_t i = 0; i < mdim.eps_grid.size(); ++i) {
      if (std::abs(mdim.eps_grid[i] - target_eps) <=
          1e-9 * std::max(1.0, std::abs(target_eps))) {
        at_target = &ratios[i];
      }
    }
    if (!at_target) {
      throw config_error(path + ": eps " + fmt_num(target_eps) +
                         " is not in the mdim eps_grid");
    }
    CheckRow value_row = base_row("mdim-decay/value", "mdim-decay");
    value_row.left = *at_target;
    value_row.relation = "<=";
    value_row.right = bound;
    value_row.left_source = "mdim.csv";
    value_row.right_source = "configured bound";
    push_bound_row(std::move(value_row), *at_target <= bound);

    double worst_step = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
      worst_step = std::max(worst_step, ratios[i + 1] - ratios[i]);
    }
    CheckRow mono_row = base_row("mdim-decay/monotone", "mdim-decay");
    mono_row.left = worst_step;
    mono_row.relation = "<";
    mono_row.right = 0.0;
    mono_row.left_source = "mdim.csv largest-n ratios in grid order";
    mono_row.right_source = "strict decrease";
    push_bound_row(std::move(mono_row), worst_step < 0.0);
  }

  void check_ba_closed_form(const json& params, const std::string& path) {
    std::string mid = as_string(require(params, "measure", path), path + ".measure");
    const MeasureModel& m = measure(mid, path + ".measure");
    if (m.kind != MeasureModel::Kind::Bernoulli || m.probs.size() != 2) {
      throw config_error(path + ".measure: needs a two-letter Bernoulli measure");
    }
    double p = std::min(m.probs[0], m.probs[1]);
    std::vector<double> distortions =
        find(params, "distortions")
            ? as_number_array(*find(params, "distortions"), path + ".distortions")
            : std::vector<double>{0.05, 0.1, 0.2};
    double tol_bits = number_or(params, "tolerance_bits", path, 1e-4);
    for (double d : distortions) {
      RdPoint pt = rd_block(m, 1, d, 1e-9);
      rd_cells.push_back(RdCell{mid, 1, d, pt});
      double closed_bits =
          nats_to_bits(binary_entropy_nats(p) - binary_entropy_nats(d));
      CheckRow row = base_row("ba-closed-form/D=" + fmt_num(d), "ba-closed-form");
      row.left = std::abs(pt.rate_bits - closed_bits);
      row.relation = "<=";
      row.right = tol_bits;
      row.left_source = "rd.csv rate against the two-letter closed form";
      row.right_source = "configured tolerance in bits";
      push_bound_row(std::move(row), row.left <= tol_bits);
    }
  }

  void check_rd_subadditivity(const json& params, const std::string& path) {
    std::string mid = as_string(require(params, "measure", path), path + ".measure");
    double eps = as_number(require(params, "eps", path), path + ".eps");
    std::size_t max_total = as_index(require(params, "max_total", path), path + ".max_total");
    double slack = number_or(params, "slack", path, kSubaddSlack);
    std::vector<double> total(max_total + 1,
                              std::numeric_limits<double>::quiet_NaN());
    for (const auto& cell : rd_cells) {
      if (cell.measure_id == mid && std::abs(cell.eps - eps) <= 1e-12 &&
          cell.n <= max_total) {
        total[cell.n] = static_cast<double>(cell.n) * cell.point.rate_nats;
      }
    }
    for (std::size_t n = 1; n <= max_total; ++n) {
      if (std::isnan(total[n])) {
        throw config_error(path + ": the rd section lacks measure '" + mid +
                           "' at eps " + fmt_num(eps) + " and n " + fmt_index(n));
      }
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n + 1 <= max_total; ++n) {
      for (std::size_t m2 = 1; n + m2 <= max_total; ++m2) {
        worst = std::max(worst, total[n + m2] - total[n] - total[m2]);
      }
    }
    CheckRow row = base_row("rd-subadditivity", "rd-subadditivity");
    row.left = worst;
    row.relation = "<=";
    row.right = slack;
    row.left_source = "rd.csv worst split excess over all n+m pairs";
    row.right_source = "configured slack in nats";
    push_bound_row(std::move(row), worst <= slack);
  }

  void check_variational_band(const json& params, const std::string& path) {
    if (!variational_ran || !mdim_ran) {
      throw config_error(path + ": needs the variational and mdim sections");
    }
    double below = number_or(params, "below", path, 0.15);
    double above = number_or(params, "above", path, 0.02);
    if (vsweep.sup_ratio_per_eps.empty()) {
      throw config_error(path + ": the variational sweep produced no rows");
    }
    double sup = vsweep.sup_ratio_per_eps.front().second;
    CheckRow lower = base_row("variational-band/lower", "variational-band");
    lower.left = sup;
    lower.relation = ">=";
    lower.right = mdim.value - below;
    lower.left_source = "variational.csv supremum ratio";
    lower.right_source = "mdim.csv";
    push_bound_row(std::move(lower), sup >= mdim.value - below);
    CheckRow upper = base_row("variational-band/upper", "variational-band");
    upper.left = sup;
    upper.relation = "<=";
    upper.right = mdim.value + above;
    upper.left_source = "variational.csv supremum ratio";
    upper.right_source = "mdim.csv";
    push_bound_row(std::move(upper), sup <= mdim.value + above);
  }

  void check_quantized_chain(const json& params, const std::string& path) {
    (void)params;
    if (bound_rows.empty()) {
      throw config_error(path + ": needs the quantized section");
    }
    for (const auto& bound : bound_rows) {
      const QuantizedBoundRecord& rec = bound.record;
      std::string stem = "quantized-chain/" + bound.codec_id + "/eps=" + fmt_num(rec.eps);
      if (!rec.applicable) {
        CheckRow row = base_row(stem, "quantized-chain");
        row.left = rec.error_lossless;
        row.relation = "inapplicable: " + csv_text(rec.reason);
        row.right = rec.eps;
        row.verdict = "inapplicable";
        row.left_source = "bounds.csv";
        row.right_source = "bounds.csv";
        report.rows.push_back(std::move(row));
        continue;
      }
      CheckRow dist = base_row(stem + "/distortion", "quantized-chain");
      dist.left = rec.mean_distortion;
      dist.relation = "<=";
      dist.right = rec.distortion_bound;
      dist.tolerance = kStrictSlack;
      dist.left_source = "bounds.csv";
      dist.right_source = "bounds.csv";
      push_bound_row(std::move(dist), rec.distortion_ok);
      CheckRow ent = base_row(stem + "/entropy", "quantized-chain");
      ent.left = rec.hy_nats;
      ent.relation = "<=";
      ent.right = rec.hy_bound;
      ent.tolerance = kBaTol;
      ent.left_source = "bounds.csv";
      ent.right_source = "bounds.csv";
      push_bound_row(std::move(ent), rec.mi_ok);
      CheckRow rate = base_row(stem + "/rate-ratio", "quantized-chain");
      rate.left = rec.rd_ratio;
      rate.relation = "<=";
      rate.right = rec.rate_bound;
      rate.left_source = "bounds.csv";
      rate.right_source = "bounds.csv";
      push_bound_row(std::move(rate), rec.rd_ok);
    }
  }

  void check_holder_packing_upper(const json& params, const std::string& path) {
    if (!mbdim_ran) throw config_error(path + ": needs the mbdim section");
    const SearchRow& search = search_by_id(
        as_string(require(params, "rate_search", path), path + ".rate_search"), path);
    if (search.family != "digit-pack") {
      throw config_error(path + ".rate_search: needs a digit-pack search entry");
    }
    double slack = number_or(params, "slack", path, 0.1);
    double alpha = search.result.alpha;
    double packing = std::min(1.0, 2.0 / (1.0 - alpha) * mbdim.value);
    CheckRow row = base_row("holder-packing-upper", "holder-packing-upper");
    row.left = search.result.rate;
    row.relation = "<=";
    row.right = packing;
    row.tolerance = slack;
    row.left_source = "ratesearch.csv";
    row.right_source = "mbdim.csv scaled by 2/(1-alpha) and clamped at 1";
    push_bound_row(std::move(row),
                   search.result.achieved && search.result.rate <= packing + slack);
  }

  void check_mdim_rate_lower(const json& params, const std::string& path) {
    if (!mdim_ran) throw config_error(path + ": needs the mdim section");
    const SearchRow& search = search_by_id(
        as_string(require(params, "rate_search", path), path + ".rate_search"), path);
    double slack = number_or(params, "slack", path, 0.05);
    CheckRow row = base_row("mdim-rate-lower", "mdim-rate-lower");
    row.left = search.result.alpha * mdim.value;
    row.relation = "<=";
    row.right = search.result.rate;
    row.tolerance = slack;
    row.left_source = "mdim.csv scaled by the achieved exponent";
    row.right_source = "ratesearch.csv";
    push_bound_row(std::move(row),
                   search.result.achieved && row.left <= search.result.rate + slack);
  }

  void check_lin_borel(const json& params, const std::string& path) {
    const SearchRow& search = search_by_id(
        as_string(require(params, "rate_search", path), path + ".rate_search"), path);
    if (search.family != "random-linear") {
      throw config_error(path + ".rate_search: needs a random-linear search entry");
    }
    double alpha = as_number(require(params, "alpha", path), path + ".alpha");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw config_error(path + ".alpha: needs 0 < alpha < 1");
    }
    double delta = as_number(require(params, "delta", path), path + ".delta");
    double rb = rb_value_at(search.measure_id, delta, search.n, path);
    CheckRow row = base_row("lin-borel-consistency", "lin-borel-consistency");
    row.left = search.result.rate;
    row.relation = "<= (one-sided; both sides are empirical upper bounds)";
    row.right = rb / (1.0 - alpha);
    row.tolerance = kRateSlack;
    row.left_source = "ratesearch.csv";
    row.right_source = "rb.csv scaled by 1/(1-alpha)";
    push_bound_row(std::move(row),
                   search.result.achieved && row.left <= row.right + kRateSlack);
  }

  void check_holder_lower(const json& params, const std::string& path) {
    const SearchRow& search = search_by_id(
        as_string(require(params, "rate_search", path), path + ".rate_search"), path);
    if (search.family != "digit-pack") {
      throw config_error(path + ".rate_search: needs a digit-pack search entry");
    }
    double delta = as_number(require(params, "delta", path), path + ".delta");
    double slack = number_or(params, "slack", path, 0.05);
    double rb = rb_value_at(search.measure_id, delta, search.n, path);
    CheckRow row = base_row("holder-lower-consistency", "holder-lower-consistency");
    row.left = search.result.alpha * rb;
    row.relation = "<= (one-sided; both sides are empirical upper bounds)";
    row.right = search.result.rate;
    row.tolerance = slack;
    row.left_source = "rb.csv scaled by the achieved exponent";
    row.right_source = "ratesearch.csv";
    push_bound_row(std::move(row),
                   search.result.achieved && row.left <= search.result.rate + slack);
  }

  void run_checks() {
    const json* checks = find(cfg, "checks");
    if (!checks) return;
    if (!checks->is_array()) throw config_error("checks: expected an array");
    for (std::size_t i = 0; i < checks->size(); ++i) {
      std::string path = "checks[" + std::to_string(i) + "]";
      const json& item = (*checks)[i];
      std::string id;
      json params = json::object();
      if (item.is_string()) {
        id = item.get<std::string>();
      } else if (item.is_object()) {
        id = as_string(require(item, "id", path), path + ".id");
        params = item;
      } else {
        throw config_error(path + ": expected a check id or an object");
      }
      info_of(id);  // reject unknown ids before dispatch
      if (id == "mdim-le-mbdim") check_mdim_le_mbdim(params, path);
      else if (id == "fullshift-alphabet-identity") check_alphabet_identity(params, path);
      else if (id == "mdim-decay") check_mdim_decay(params, path);
      else if (id == "ba-closed-form") check_ba_closed_form(params, path);
      else if (id == "rd-subadditivity") check_rd_subadditivity(params, path);
      else if (id == "variational-band") check_variational_band(params, path);
      else if (id == "quantized-chain") check_quantized_chain(params, path);
      else if (id == "holder-packing-upper") check_holder_packing_upper(params, path);
      else if (id == "mdim-rate-lower") check_mdim_rate_lower(params, path);
      else if (id == "lin-borel-consistency") check_lin_borel(params, path);
      else if (id == "holder-lower-consistency") check_holder_lower(params, path);
    }
  }

  // ---- writers ----

  void write_file(const std::string& name, const std::string& header,
                  const std::vector<std::string>& lines) const {
    std::ofstream outf(out / name, std::ios::binary);
    if (!outf) throw config_error("out: cannot write '" + (out / name).string() + "'");
    outf << header << "\n";
    for (const auto& line : lines) outf << line << "\n";
  }

  void write_dim_table(const std::string& name, const DimensionEstimate& est) const {
    std::vector<std::string> lines;
    for (const auto& cell : est.table) {
      lines.push_back(model.id + "," + fmt_index(cell.n) + "," + fmt_num(cell.eps) +
                      "," + std::to_string(cell.depth) + "," + fmt_num(cell.log_count) +
                      "," + fmt_num(cell.ratio) + "," + fmt_bool(cell.exact));
    }
    write_file(name, "model_id,n,eps,depth,log_count,ratio,exact", lines);
  }

  void write_mbdim() const {
    std::vector<std::string> lines;
    std::vector<std::size_t> sorted_n = mbdim.n_grid;
    std::sort(sorted_n.begin(), sorted_n.end());
    for (std::size_t i = 0; i < sorted_n.size(); ++i) {
      std::size_t n = sorted_n[i];
      std::vector<std::pair<double, double>> log_counts;
      for (const auto& cell : mbdim.table) {
        if (cell.n == n) log_counts.emplace_back(cell.eps, cell.log_count);
      }
      DimensionEstimate fit = box_dimension_fit_log(log_counts);
      lines.push_back(model.id + "," + fmt_index(n) + "," + fmt_num(fit.value) + "," +
                      fmt_num(fit.value / static_cast<double>(n)) + "," +
                      fmt_num(mbdim.upper_sequence[i]) + "," + fmt_num(fit.fit.residual));
    }
    write_file("mbdim.csv", "model_id,n,dim_fit,dim_per_n,upper_min,residual", lines);
  }

  void write_all(bool dims, bool rd, bool codec, bool checks) const {
    fs::create_directories(out);
    if (dims) {
      if (mdim_ran) write_dim_table("mdim.csv", mdim);
      if (mbdim_ran) write_mbdim();
      if (span_ran) {
        std::vector<std::string> lines;
        for (std::size_t i = 0; i < span.n_grid.size(); ++i) {
          lines.push_back(model.id + "," + fmt_num(span_eps) + "," +
                          fmt_index(span.n_grid[i]) + "," + fmt_num(span.per_n[i]) +
                          "," + fmt_num(span.upper_seq[i]));
        }
        write_file("span.csv", "model_id,eps,n,log_count_per_n,upper_min", lines);
      }
      if (!rb_rows.empty()) {
        std::vector<std::string> lines;
        for (const auto& row : rb_rows) {
          lines.push_back(row.measure_id + "," + fmt_index(row.n) + "," +
                          fmt_num(row.delta) + "," + fmt_num(row.value));
        }
        write_file("rb.csv", "measure_id,n,delta,value", lines);
      }
    }
    if (rd) {
      if (!rd_cells.empty()) {
        std::vector<std::string> lines;
        for (const auto& cell : rd_cells) {
          const RdPoint& pt = cell.point;
          lines.push_back(cell.measure_id + "," + fmt_index(cell.n) + "," +
                          fmt_num(cell.eps) + "," + fmt_num(pt.rate_nats) + "," +
                          fmt_num(pt.rate_bits) + "," + fmt_num(pt.distortion) + "," +
                          fmt_num(pt.s) + "," + std::to_string(pt.iterations) + "," +
                          fmt_bool(pt.converged) + "," + fmt_bool(pt.objective_monotone));
        }
        write_file("rd.csv",
                   "measure_id,n,eps,rate_nats_per_letter,rate_bits_per_letter,"
                   "distortion,s,iterations,converged,objective_monotone",
                   lines);
      }
      if (variational_ran) {
        std::vector<std::string> lines;
        for (const auto& row : vsweep.rows) {
          lines.push_back(fmt_num(row.eps) + "," + row.measure_id + "," +
                          fmt_num(row.rate_per_letter) + "," + fmt_num(row.ratio));
        }
        for (const auto& [eps, sup] : vsweep.sup_ratio_per_eps) {
          lines.push_back(fmt_num(eps) + ",sup,," + fmt_num(sup));
        }
        write_file("variational.csv", "eps,measure_id,rate_per_letter_nats,ratio", lines);
      }
    }
    if (codec) {
      if (!codec_rows.empty()) {
        std::vector<std::string> lines;
        for (const auto& row : codec_rows) {
          const CodecReport& r = row.report;
          lines.push_back(row.codec_id + "," + row.provenance + "," + row.measure_id +
                          "," + fmt_index(row.n) + "," + fmt_index(row.k) + "," +
                          fmt_num(r.rate) + "," + fmt_num(r.eps_threshold) + "," +
                          fmt_num(r.p_norm) + "," + fmt_num(r.error_lossless) + "," +
                          fmt_num(r.error_threshold) + "," + fmt_num(r.mean_distortion) +
                          "," + fmt_num(row.L) + "," + fmt_num(row.alpha) + "," +
                          fmt_bool(row.has_certificate) + "," + fmt_bool(row.holder_pass) +
                          "," + fmt_num(row.holder_worst_ratio) + "," +
                          std::to_string(row.seed) + "," + fmt_bool(r.monte_carlo));
        }
        write_file("codecs.csv",
                   "codec_id,provenance,measure_id,n,k,rate,eps_threshold,p_norm,"
                   "error_lossless,error_threshold,mean_distortion,L,alpha,"
                   "has_certificate,holder_pass,holder_worst_ratio,seed,monte_carlo",
                   lines);
      }
      if (!bound_rows.empty()) {
        std::vector<std::string> lines;
        for (const auto& row : bound_rows) {
          const QuantizedBoundRecord& b = row.record;
          lines.push_back(row.codec_id + "," + row.measure_id + "," + fmt_num(b.eps) +
                          "," + fmt_index(b.n) + "," + fmt_index(b.k) + "," +
                          fmt_num(b.L) + "," + fmt_num(b.alpha) + "," +
                          fmt_bool(b.applicable) + "," + csv_text(b.reason) + "," +
                          fmt_num(b.error_lossless) + "," + fmt_num(b.mean_distortion) +
                          "," + fmt_num(b.distortion_bound) + "," +
                          fmt_bool(b.distortion_ok) + "," + fmt_num(b.mi_nats) + "," +
                          fmt_num(b.hy_nats) + "," + fmt_num(b.hy_bound) + "," +
                          fmt_bool(b.mi_ok) + "," + fmt_num(b.rd_eps) + "," +
                          fmt_num(b.rd_ratio) + "," + fmt_num(b.rate_bound) + "," +
                          fmt_bool(b.rd_ok) + "," + fmt_bool(b.all_ok));
        }
        write_file("bounds.csv",
                   "codec_id,measure_id,eps,n,k,L,alpha,applicable,reason,"
                   "error_lossless,mean_distortion,distortion_bound,distortion_ok,"
                   "mi_nats,hy_nats,hy_bound,mi_ok,rd_eps,rd_ratio,rate_bound,rd_ok,"
                   "all_ok",
                   lines);
      }
      if (!search_rows.empty()) {
        std::vector<std::string> lines;
        for (const auto& row : search_rows) {
          const RateSearchResult& r = row.result;
          lines.push_back(row.search_id + "," + row.family + "," + row.criterion + "," +
                          row.measure_id + "," + fmt_index(row.n) + "," +
                          fmt_num(row.eps) + "," + fmt_bool(r.achieved) + "," +
                          fmt_index(r.k) + "," + fmt_num(r.rate) + "," + fmt_num(r.L) +
                          "," + fmt_num(r.alpha) + "," + r.codec_id + "," +
                          fmt_num(r.report.error_lossless) + "," +
                          fmt_num(r.report.error_threshold));
        }
        write_file("ratesearch.csv",
                   "search_id,family,criterion,measure_id,n,eps,achieved,k,rate,L,"
                   "alpha,codec_id,error_lossless,error_threshold",
                   lines);
      }
    }
    if (checks) {
      std::vector<std::string> lines;
      for (const auto& row : report.rows) {
        lines.push_back(csv_text(row.name) + "," + csv_text(row.claim) + "," +
                        fmt_num(row.left) + "," + csv_text(row.relation) + "," +
                        fmt_num(row.right) + "," + fmt_num(row.tolerance) + "," +
                        row.verdict + "," + csv_text(row.left_source) + "," +
                        csv_text(row.right_source));
      }
      write_file("checks.csv",
                 "name,claim,left,relation,right,tolerance,verdict,left_source,"
                 "right_source",
                 lines);
      write_report_text();
    }
  }

  void write_report_text() const {
    std::size_t pass = 0, fail = 0, inapplicable = 0;
    for (const auto& row : report.rows) {
      if (row.verdict == "pass") ++pass;
      else if (row.verdict == "fail") ++fail;
      else ++inapplicable;
    }
    std::ostringstream text;
    text << "verification report\n";
    text << "config: " << fs::path(opt.config_path).filename().string() << "\n";
    text << "model: " << model.id << "\n";
    text << "seed: " << (has_seed ? std::to_string(seed) : std::string("none")) << "\n";
    text << "checks: " << report.rows.size() << " total / " << pass << " pass / "
         << fail << " fail / " << inapplicable << " inapplicable\n\n";
    for (const auto& row : report.rows) {
      std::string verdict = row.verdict == "pass" ? "PASS"
                            : row.verdict == "fail" ? "FAIL"
                                                    : "N/A ";
      text << "[" << verdict << "] " << row.name << ": " << fmt_num(row.left) << " "
           << row.relation << " " << fmt_num(row.right);
      if (row.tolerance != 0.0) text << " (tol " << fmt_num(row.tolerance) << ")";
      text << "\n    claim: " << row.claim << "\n";
    }
    text << "\nresult: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
    std::ofstream outf(out / "report.txt", std::ios::binary);
    if (!outf) {
      throw config_error("out: cannot write '" + (out / "report.txt").string() + "'");
    }
    outf << text.str();
  }

  VerificationReport run() {
    load();
    bool dims = opt.scope == RunScope::Dims || opt.scope == RunScope::Verify;
    bool rd = opt.scope == RunScope::Rd || opt.scope == RunScope::Verify;
    bool codec = opt.scope == RunScope::Codec || opt.scope == RunScope::Verify;
    bool checks = opt.scope == RunScope::Verify;
    if (dims) {
      run_mdim();
      run_mbdim();
      run_span();
      run_rb();
    }
    if (rd) {
      run_rd();
      run_variational();
    }
    if (codec) {
      run_codecs();
      run_quantized();
      run_rate_search();
    }
    if (checks) run_checks();
    write_all(dims, rd, codec, checks);
    return report;
  }
};

}  // namespace

VerificationReport run_experiment(const RunOptions& options) {
  Harness harness;
  harness.opt = options;
  return harness.run();
}

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> infos = {
      {"mdim-le-mbdim",
       "covering-growth value stays at or below the per-window box-dimension value",
       "Compares the headline value of the mdim section against the mbdim value at "
       "the largest window length, within a tolerance (default 0.02). Needs the mdim "
       "and mbdim sections."},
      {"fullshift-alphabet-identity",
       "full-shift covering growth matches the letter-set box dimension",
       "Fits grid box counts of the letter set over the mdim scale grid and compares "
       "the slope with the mdim value, within a tolerance (default 0.05). Full-shift "
       "models only."},
      {"mdim-decay",
       "covering-growth ratios decay as the scale shrinks",
       "Two rows: the largest-n ratio at the target scale (default eps = 1e-3) stays "
       "at or below the bound (default 0.12), and the largest-n ratios strictly "
       "decrease in grid order. Needs the mdim section."},
      {"ba-closed-form",
       "alternating-minimization rate matches the two-letter closed form",
       "Solves the single-letter problem at each listed distortion and compares the "
       "rate in bits with h(p) - h(D), within a tolerance (default 1e-4 bits). Needs "
       "a two-letter Bernoulli measure; solved cells are appended to rd.csv."},
      {"rd-subadditivity",
       "scaled block rates are subadditive across window splits",
       "For every split n + m <= max_total, checks (n+m) R(n+m) <= n R(n) + m R(m) "
       "within a slack (default 1e-6 nats), using rd.csv cells at the given eps."},
      {"variational-band",
       "the supremum of scaled block rates over the measure grid brackets the "
       "covering-growth value",
       "Two rows: the supremum ratio of the variational section stays within "
       "[mdim - below, mdim + above] (defaults 0.15 and 0.02)."},
      {"quantized-chain",
       "the quantized composite meets the distortion bound and the entropy bound "
       "and the rate-ratio bound",
       "For every quantized section row: (i) mean distortion <= eps + L (eps/2)^alpha, "
       "(ii) output entropy <= k log ceil(1/eps), (iii) the block rate at the induced "
       "distortion divided by log ceil(1/eps) stays at or below k/n. Precondition "
       "failures report as inapplicable."},
      {"holder-packing-upper",
       "the digit-pack lossless rate stays below the box-dimension packing bound",
       "Compares the achieved rate of a digit-pack rate_search entry against "
       "min(1, 2/(1-alpha) mbdim) plus a slack (default 0.1)."},
      {"mdim-rate-lower",
       "the scaled covering-growth value stays below the achieved lossless rate",
       "Compares alpha times the mdim value against the achieved rate of a "
       "rate_search entry plus a slack (default 0.05). One-sided: both sides are "
       "computable upper bounds of their limits."},
      {"lin-borel-consistency",
       "the linear-compressor rate stays consistent with the mass-constrained "
       "dimension bound",
       "Compares the achieved rate of a random-linear rate_search entry against "
       "1/(1-alpha) times the rb.csv value at the same measure, window length, and "
       "delta. One-sided: both sides are empirical upper bounds, and the "
       "nearest-neighbor decoder realizes a measurable rather than smooth map."},
      {"holder-lower-consistency",
       "the scaled mass-constrained dimension bound stays below the achieved "
       "digit-pack rate",
       "Compares alpha times the rb.csv value against the achieved rate of a "
       "digit-pack rate_search entry plus a slack (default 0.05). One-sided: both "
       "sides are empirical upper bounds."},
  };
  return infos;
}

std::vector<std::string> bundled_model_ids() {
  return {"full-shift-binary", "golden-mean-sft", "cantor-full-shift", "sparse-shift"};
}

std::string describe_check(const std::string& id) {
  for (const auto& info : check_registry()) {
    if (info.id == id) {
      return info.id + "\n  claim: " + info.claim + "\n  " + info.detail + "\n";
    }
  }
  throw config_error("describe: unknown check id '" + id +
                     "' (run the list subcommand for the registry)");
}

}  // namespace meandim
