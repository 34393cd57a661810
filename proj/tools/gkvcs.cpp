// gkvcs: spectrum tables, coherent-state property suites, moment checks, and
// deterministic report merging for the nanoparticle Hamiltonian library.

#include <gkvcs/campaign.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace gkvcs;

namespace {

int log_level() {
  const char* v = std::getenv("GKVCS_LOG");
  if (!v) return 1;  // warn
  std::string s = v;
  if (s == "error") return 0;
  if (s == "warn") return 1;
  if (s == "info") return 2;
  if (s == "debug") return 3;
  return 1;
}

void log(int level, const std::string& msg) {
  static int enabled = log_level();
  if (level <= enabled) std::cerr << "gkvcs: " << msg << "\n";
}

struct OutputOpts {
  std::string out_dir = ".";
  std::string format = "ndjson";
  bool strict = false;
  int parallel = 1;  // accepted for interface stability; checks are cheap and run ordered
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + p.string() + "'");
  f << content;
}

int emit(report::ReportBundle bundle, const OutputOpts& o, const std::string& stem) {
  bundle.timestamp = report::env_timestamp();
  fs::create_directories(o.out_dir);
  if (o.format == "ndjson" || o.format == "both")
    write_file(fs::path(o.out_dir) / (stem + ".ndjson"), report::to_ndjson(bundle));
  if (o.format == "csv" || o.format == "both")
    write_file(fs::path(o.out_dir) / (stem + ".csv"), report::spectrum_csv(bundle));
  std::cout << report::summary_text(bundle, o.strict);
  int failures = bundle.failures(o.strict);
  if (failures > 0) log(0, std::to_string(failures) + " check(s) failed");
  return failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nanoparticle Hamiltonian spectra and Gazeau-Klauder coherent-state verification"};
  app.require_subcommand(1);

  std::string config_path;
  OutputOpts out;
  std::vector<std::string> merge_inputs;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) sub->add_option("--config", config_path, "campaign config (JSON)")->required();
    sub->add_option("--out", out.out_dir, "output directory");
    sub->add_option("--format", out.format, "ndjson | csv | both")
        ->check(CLI::IsMember({"ndjson", "csv", "both"}));
    sub->add_option("--parallel", out.parallel, "worker count")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", out.strict, "treat report-only discrepancies as failures");
  };

  auto* spectrum = app.add_subcommand("spectrum", "analytic vs numeric eigenvalue tables per sector");
  add_common(spectrum, true);
  auto* vcs_verify = app.add_subcommand("vcs-verify", "coherent-state property checks for chosen families");
  add_common(vcs_verify, true);
  auto* moments = app.add_subcommand("moments", "measure / moment-problem checks");
  add_common(moments, true);
  auto* merge = app.add_subcommand("report-merge", "deterministically merge report bundles");
  add_common(merge, false);
  merge->add_option("inputs", merge_inputs, "ndjson bundles to merge")->required()->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (merge->parsed()) {
      std::vector<report::ReportBundle> bundles;
      for (const auto& in : merge_inputs) {
        std::ifstream f(in, std::ios::binary);
        if (!f) throw ParameterError("cannot read '" + in + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        bundles.push_back(report::from_ndjson(ss.str()));
      }
      log(2, "merging " + std::to_string(bundles.size()) + " bundle(s)");
      return emit(report::merge(bundles), out, "merged");
    }

    auto loaded = campaign::load_config(config_path);
    log(2, "config " + config_path + " hash " + loaded.hash);
    report::ReportBundle bundle;
    std::string stem = loaded.cfg.basename;
    if (spectrum->parsed()) {
      bundle = campaign::run_spectrum(loaded.cfg);
      if (stem.empty()) stem = "spectrum";
    } else if (vcs_verify->parsed()) {
      bundle = campaign::run_vcs_verify(loaded.cfg);
      if (stem.empty()) stem = "vcs-verify";
    } else {
      bundle = campaign::run_moments(loaded.cfg);
      if (stem.empty()) stem = "moments";
    }
    bundle.config_hash = loaded.hash;
    return emit(std::move(bundle), out, stem);
  } catch (const ParameterError& e) {
    std::cerr << "gkvcs: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gkvcs: internal error: " << e.what() << "\n";
    return 1;
  }
}
