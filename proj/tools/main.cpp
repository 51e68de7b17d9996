#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "meandim/common.hpp"
#include "meandim/harness.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 selects the hardware thread count
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output directory (default: config out_dir)");
  args.seed_opt = sub->add_option("--seed", args.seed,
                                  "override the config seed (unsigned 64-bit)");
  sub->add_option("--jobs", args.jobs, "worker threads (default: hardware count)");
}

int run_scope(meandim::RunScope scope, const CommonArgs& args) {
  meandim::RunOptions opt;
  opt.config_path = args.config;
  opt.out_dir = args.out;
  if (args.seed_opt != nullptr && args.seed_opt->count() > 0) {
    opt.seed_override = args.seed;
  }
  opt.jobs = args.jobs;
  opt.scope = scope;
  meandim::VerificationReport report = meandim::run_experiment(opt);
  if (scope != meandim::RunScope::Verify) return 0;
  std::size_t pass = 0, fail = 0, inapplicable = 0;
  for (const auto& row : report.rows) {
    const char* verdict = row.verdict == "pass"   ? "PASS"
                          : row.verdict == "fail" ? "FAIL"
                                                  : "N/A ";
    if (row.verdict == "pass") ++pass;
    else if (row.verdict == "fail") ++fail;
    else ++inapplicable;
    std::cout << "[" << verdict << "] " << row.name << "\n";
  }
  std::cout << "checks: " << report.rows.size() << " total / " << pass
            << " pass / " << fail << " fail / " << inapplicable
            << " inapplicable\n";
  std::cout << "result: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"window-set dimension and compression-rate toolkit"};
  app.require_subcommand(1);

  CommonArgs dims_args, rd_args, codec_args, verify_args;
  CLI::App* dims = app.add_subcommand(
      "dims", "covering-growth, box-dimension, span, and mass-constrained tables");
  add_common(dims, dims_args);
  CLI::App* rd = app.add_subcommand(
      "rd", "block rate-distortion tables and the variational sweep");
  add_common(rd, rd_args);
  CLI::App* codec = app.add_subcommand(
      "codec", "codec round-trips, quantized bounds, and rate searches");
  add_common(codec, codec_args);
  CLI::App* verify = app.add_subcommand(
      "verify", "run every section and evaluate the configured checks");
  add_common(verify, verify_args);
  CLI::App* list = app.add_subcommand(
      "list", "print the bundled model kinds and the check registry");
  std::string describe_id;
  CLI::App* describe = app.add_subcommand("describe", "explain one check");
  describe->add_option("id", describe_id, "check identifier")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      std::cout << "models:\n";
      for (const auto& id : meandim::bundled_model_ids()) {
        std::cout << "  " << id << "\n";
      }
      std::cout << "checks:\n";
      for (const auto& info : meandim::check_registry()) {
        std::cout << "  " << info.id << ": " << info.claim << "\n";
      }
      return 0;
    }
    if (describe->parsed()) {
      std::cout << meandim::describe_check(describe_id);
      return 0;
    }
    if (dims->parsed()) return run_scope(meandim::RunScope::Dims, dims_args);
    if (rd->parsed()) return run_scope(meandim::RunScope::Rd, rd_args);
    if (codec->parsed()) return run_scope(meandim::RunScope::Codec, codec_args);
    if (verify->parsed()) return run_scope(meandim::RunScope::Verify, verify_args);
  } catch (const meandim::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const meandim::cap_exceeded& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const meandim::digit_capacity_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
