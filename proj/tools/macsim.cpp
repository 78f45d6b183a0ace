// macsim command-line driver.
#include <CLI11.hpp>

#include <iostream>

#include "macsim/errors.hpp"
#include "macsim/pipeline.hpp"

namespace {

std::vector<std::string> split_keys(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace macsim;

  CLI::App app{"Simulate agreement arrays and assess record-linkage accuracy"};
  app.set_config("--config", "", "Flat key=value file; command-line flags win");
  app.require_subcommand(1);

  std::string x_file, y_file, truth_file, params_file, saved, blocking = "sa1", linking, blocks, policy = "reject";
  std::uint64_t seed = 1;
  double cutoff = 0.0, weight_cap = 30.0, smoothing = 0.0;
  std::int64_t steps = 1'000'000, thin = 1000, burn_in = 0;
  Index synth_n_y = 400000;
  double synth_scale = 1.0;
  std::uint64_t synth_seed = 1, error_seed = ErrorSpec{}.seed;
  bool no_errors = false, observed_blocking = false, save_samples = false, no_plots = false, allow_overlap = false;
  int threads = 1;
  std::string out_dir = "macsim_out";

  app.add_option("--x", x_file, "File X (CSV)");
  app.add_option("--y", y_file, "File Y (CSV)");
  app.add_option("--truth", truth_file, "Truth sidecar for X (recid,field,original_value)");
  app.add_option("--synth-n-y", synth_n_y, "Synthetic Y size when no input files are given");
  app.add_option("--synth-scale", synth_scale, "Synthetic SA1/MB group scale");
  app.add_option("--synth-seed", synth_seed, "Synthetic population seed");
  app.add_option("--error-seed", error_seed, "Error-injection seed");
  app.add_flag("--no-errors", no_errors, "Do not perturb synthetic X");
  app.add_option("--seed", seed, "Master seed for the chains");
  app.add_option("--cutoff", cutoff, "Link only pairs with weight above this value");
  app.add_option("--weight-cap", weight_cap, "Absolute cap on a cell weight");
  app.add_option("--blocking", blocking, "Blocking fields, e.g. SA1 or SA1&SEX");
  app.add_option("--linking", linking, "Linking fields (default: all non-blocking fields)");
  app.add_flag("--allow-overlap", allow_overlap, "Allow a field to be both blocking and linking");
  app.add_flag("--observed-blocking", observed_blocking, "Block X on its observed (perturbed) values");
  app.add_option("--steps", steps, "Kernel steps per block");
  app.add_option("--thin", thin, "Keep one state every N steps");
  app.add_option("--burn-in", burn_in, "Retained samples discarded before assessment");
  app.add_option("--blocks", blocks, "Only these block keys (comma separated)");
  app.add_option("--use-saved-samples", saved, "Directory of saved <block>.macs files to reuse");
  app.add_flag("--save-samples", save_samples, "Write sample files during assess");
  app.add_option("--params", params_file, "External params CSV (block,field,m,u,g,w)");
  app.add_option("--invalid-fields", policy, "reject or drop")->check(CLI::IsMember({"reject", "drop"}));
  app.add_option("--smoothing", smoothing, "Add-epsilon smoothing for estimated m and u");
  app.add_flag("--no-plots", no_plots, "Skip plot-data CSVs");
  app.add_option("--threads", threads, "Blocks processed in parallel");
  app.add_option("--out", out_dir, "Output directory");

  const std::vector<std::pair<const char*, Stage>> stages = {
      {"generate", Stage::generate}, {"block", Stage::block},       {"estimate", Stage::estimate},
      {"link", Stage::link},         {"simulate", Stage::simulate}, {"assess", Stage::assess}};
  std::vector<std::pair<CLI::App*, Stage>> subs;
  for (const auto& [name, stage] : stages) {
    auto* sub = app.add_subcommand(name, "Run the pipeline up to " + std::string(name));
    sub->fallthrough();
    subs.emplace_back(sub, stage);
  }
  auto* report = app.add_subcommand("report", "Rebuild bin tables from an existing per_record.csv");
  report->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*report) {
      write_bins_from_report(out_dir);
      return 0;
    }
    RunConfig cfg;
    if (!x_file.empty() || !y_file.empty() || !truth_file.empty()) {
      if (!x_file.empty()) cfg.x_file = x_file;
      if (!y_file.empty()) cfg.y_file = y_file;
      if (!truth_file.empty()) cfg.truth_file = truth_file;
    } else {
      SynthParams sp;
      sp.n_y = synth_n_y;
      sp.scale = synth_scale;
      sp.seed = synth_seed;
      sp.inject = !no_errors;
      sp.errors.seed = error_seed;
      cfg.synth = sp;
    }
    cfg.seed = seed;
    cfg.cutoff = cutoff;
    cfg.caps = {weight_cap, -weight_cap};
    cfg.blocking.blocking_fields = parse_field_list(blocking);
    if (!linking.empty()) cfg.blocking.linking_fields = parse_field_list(linking);
    cfg.blocking.allow_overlap = allow_overlap;
    cfg.blocking.use_truth_values = !observed_blocking;
    cfg.chain.total_steps = steps;
    cfg.chain.thin = thin;
    cfg.chain.burn_in = burn_in;
    cfg.block_filter = split_keys(blocks);
    if (!saved.empty()) cfg.saved_samples = saved;
    cfg.save_samples = save_samples;
    if (!params_file.empty()) cfg.params_file = params_file;
    cfg.invalid_fields = policy == "drop" ? InvalidFieldPolicy::drop : InvalidFieldPolicy::reject;
    cfg.estimation.smoothing = smoothing;
    cfg.write_plots = !no_plots;
    cfg.threads = threads;
    cfg.out_dir = out_dir;

    Stage stage = Stage::assess;
    for (const auto& [sub, s] : subs) {
      if (*sub) stage = s;
    }
    const auto summary = run_stage(cfg, stage);
    for (const auto& b : summary.blocks) {
      if (!b.completed) std::cerr << "block " << b.key << " skipped: " << b.skip_reason << '\n';
    }
    return summary.exit_status;
  } catch (const Error& e) {
    std::cerr << "macsim: " << e.what() << '\n';
    return 1;
  }
}
