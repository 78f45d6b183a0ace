#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "macsim/analytics.hpp"
#include "macsim/blocking.hpp"
#include "macsim/estimation.hpp"
#include "macsim/kernel.hpp"
#include "macsim/linker.hpp"
#include "macsim/synthgen.hpp"

namespace macsim {

struct SynthParams {
  Index n_y = 400000;
  double scale = 1.0;
  std::uint64_t seed = 1;
  bool inject = true;
  ErrorSpec errors;
};

enum class InvalidFieldPolicy { reject, drop };

// Which part of the pipeline to run; each stage includes the ones before it.
enum class Stage { generate, block, estimate, link, simulate, assess };

struct RunConfig {
  std::optional<std::filesystem::path> x_file;
  std::optional<std::filesystem::path> y_file;
  std::optional<std::filesystem::path> truth_file;
  std::optional<SynthParams> synth;

  BlockingSpec blocking;
  double cutoff = 0.0;
  WeightCaps caps;
  ChainConfig chain;            // chain.seed is ignored; each block derives its own
  std::uint64_t seed = 1;       // master seed
  std::optional<std::filesystem::path> params_file;
  EstimationOptions estimation;
  InvalidFieldPolicy invalid_fields = InvalidFieldPolicy::reject;

  std::optional<std::filesystem::path> saved_samples;  // directory of <block>.macs files to reuse
  bool save_samples = false;
  bool write_plots = true;
  std::vector<std::string> block_filter;
  std::filesystem::path out_dir = "macsim_out";
  int threads = 1;

  // Throws ConfigError: exactly one of input files and synth parameters, Y
  // present with X, referenced paths existing, counts positive.
  void validate() const;
};

struct Inputs {
  LinkFile x;
  PersonFile y;
};

// Reads the input files or generates (and perturbs) a synthetic pair.
Inputs load_inputs(const RunConfig& cfg);

std::uint64_t block_seed(std::uint64_t master, const std::string& block_key);

struct BlockOutcome {
  std::string key;
  bool completed = false;
  std::string skip_reason;
  Index x_size = 0;
  Index y_size = 0;
  std::uint64_t chain_seed = 0;
  std::vector<std::string> linking_fields;
  std::vector<std::string> dropped_fields;
  std::vector<FieldParams> params;
  std::vector<std::string> x_recids;
  std::vector<std::string> y_recids;
  std::vector<std::string> dropped_x_recids;
  LinkSet observed;
  AccuracyReport accuracy;
  std::vector<double> distances;       // per retained sample, vs A*(0)
  std::vector<TernaryCounts> counts;   // per retained sample
  std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
};

// All per-block steps up to `stage`. Failures local to the block are
// reported through `completed` and `skip_reason`; files under cfg.out_dir
// that belong to this block (samples, plot data) are written here.
BlockOutcome process_block(const Inputs& inputs, const Block& block, const RunConfig& cfg, Stage stage);

struct RunSummary {
  int exit_status = 0;
  std::vector<BlockOutcome> blocks;
};

// Runs `stage` over every selected block and writes the report files. Exit
// status is nonzero only when blocks were attempted and all of them failed.
RunSummary run_stage(const RunConfig& cfg, Stage stage);

inline RunSummary run_assessment(const RunConfig& cfg) { return run_stage(cfg, Stage::assess); }

// Writes bins_coarse.csv and bins_fine.csv next to an existing per_record.csv.
void write_bins_from_report(const std::filesystem::path& out_dir);

std::string stage_name(Stage s);

}  // namespace macsim
