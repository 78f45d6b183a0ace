#include "macsim/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "macsim/errors.hpp"
#include "macsim/format.hpp"
#include "macsim/sample_io.hpp"

namespace macsim {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::vector<std::string> names_of(std::span<const Field> fields) {
  std::vector<std::string> out;
  for (Field f : fields) out.emplace_back(field_name(f));
  return out;
}

fs::path samples_path(const fs::path& dir, const std::string& key) { return dir / (key + ".macs"); }

void write_xy(const fs::path& path, const char* x_name, const char* y_name, std::int64_t first,
              const std::vector<std::string>& ys) {
  auto out = open_out(path);
  out << x_name << ',' << y_name << '\n';
  for (std::size_t k = 0; k < ys.size(); ++k) out << first + static_cast<std::int64_t>(k) << ',' << ys[k] << '\n';
}

template <typename T, typename F>
std::vector<std::string> map_text(const std::vector<T>& values, F f) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(f(v));
  return out;
}

// Params for one block: external table or estimated, then validated per policy.
void resolve_params(BlockOutcome& outcome, AgreementBlock& block, const RunConfig& cfg,
                    const ParamsTable* external) {
  std::vector<FieldParams> params;
  if (external) {
    auto it = external->find(outcome.key);
    if (it == external->end()) throw EstimationError("no external params for block " + outcome.key);
    for (const auto& name : outcome.linking_fields) {
      auto f = it->second.find(name);
      if (f == it->second.end()) throw EstimationError("no external params for field " + name);
      params.push_back(f->second);
    }
  } else {
    auto opts = cfg.estimation;
    opts.validate = false;
    params = estimate_params(block, outcome.linking_fields, opts);
  }

  if (cfg.invalid_fields == InvalidFieldPolicy::reject) {
    for (std::size_t l = 0; l < params.size(); ++l) validate(params[l], outcome.linking_fields[l]);
    outcome.params = std::move(params);
    return;
  }
  std::vector<Index> keep;
  std::vector<std::string> kept_names;
  std::vector<FieldParams> kept;
  for (std::size_t l = 0; l < params.size(); ++l) {
    try {
      validate(params[l], outcome.linking_fields[l]);
      keep.push_back(static_cast<Index>(l));
      kept_names.push_back(outcome.linking_fields[l]);
      kept.push_back(params[l]);
    } catch (const ValidationError&) {
      outcome.dropped_fields.push_back(outcome.linking_fields[l]);
    }
  }
  if (keep.empty()) throw ValidationError(join(outcome.dropped_fields, ','), "no valid linking field left");
  if (!outcome.dropped_fields.empty()) block = select_fields(block, keep);
  outcome.linking_fields = std::move(kept_names);
  outcome.params = std::move(kept);
}

}  // namespace

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::generate: return "generate";
    case Stage::block: return "block";
    case Stage::estimate: return "estimate";
    case Stage::link: return "link";
    case Stage::simulate: return "simulate";
    case Stage::assess: return "assess";
  }
  return "?";
}

void RunConfig::validate() const {
  const bool files = x_file.has_value() || y_file.has_value() || truth_file.has_value();
  if (files == synth.has_value()) throw ConfigError("give either input files or synthetic-data parameters, not both");
  if (files) {
    if (!x_file || !y_file) throw ConfigError("both X and Y input files are required");
    for (const auto* p : {&x_file, &y_file, &truth_file}) {
      if (*p && !fs::exists(**p)) throw ConfigError("input file not found: " + (*p)->string());
    }
  }
  if (synth && synth->n_y <= 0) throw ConfigError("synthetic n_y must be positive");
  if (params_file && !fs::exists(*params_file)) throw ConfigError("params file not found: " + params_file->string());
  if (saved_samples && !fs::is_directory(*saved_samples)) {
    throw ConfigError("saved-samples directory not found: " + saved_samples->string());
  }
  if (threads < 1) throw ConfigError("thread count must be positive");
  if (chain.thin <= 0 || chain.total_steps <= 0) throw ConfigError("steps and thinning must be positive");
  chain.validate();
  blocking.validate();
}

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  if (cfg.synth) {
    auto pop = generate_population(cfg.synth->n_y, cfg.synth->scale, cfg.synth->seed);
    in.y = std::move(pop.y);
    in.x = cfg.synth->inject ? inject_errors(pop.x, cfg.synth->errors) : std::move(pop.x);
  } else {
    in.x = load_link_file(*cfg.x_file, cfg.truth_file);
    in.y = load_person_csv(*cfg.y_file);
  }
  return in;
}

std::uint64_t block_seed(std::uint64_t master, const std::string& block_key) {
  return derive_seed(master, block_key);
}

BlockOutcome process_block(const Inputs& inputs, const Block& blk, const RunConfig& cfg, Stage stage) {
  BlockOutcome outcome;
  outcome.key = blk.key;
  outcome.x_size = std::ssize(blk.x_rows);
  outcome.y_size = std::ssize(blk.y_rows);
  outcome.chain_seed = block_seed(cfg.seed, blk.key);
  const auto linking = cfg.blocking.resolved_linking_fields();
  outcome.linking_fields = names_of(linking);

  std::unique_ptr<ParamsTable> external;
  if (cfg.params_file) {
    std::ifstream in(*cfg.params_file);
    external = std::make_unique<ParamsTable>(read_params_csv(in));
  }

  try {
    auto t = Clock::now();
    auto assembled = assemble_block(inputs.x, inputs.y, blk, linking, cfg.blocking.use_truth_values);
    outcome.timings.emplace_back("create_agreement", seconds_since(t));
    for (Index r : assembled.x_rows) outcome.x_recids.push_back(inputs.x.records[static_cast<std::size_t>(r)].recid);
    for (Index r : assembled.y_rows) outcome.y_recids.push_back(inputs.y[static_cast<std::size_t>(r)].recid);
    for (Index r : assembled.dropped_x) {
      outcome.dropped_x_recids.push_back(inputs.x.records[static_cast<std::size_t>(r)].recid);
    }
    outcome.x_size = assembled.block.x_size();
    AgreementBlock& block = assembled.block;
    if (stage < Stage::estimate) {
      outcome.completed = true;
      return outcome;
    }

    t = Clock::now();
    resolve_params(outcome, block, cfg, external.get());
    outcome.timings.emplace_back("estimate", seconds_since(t));
    if (stage < Stage::link) {
      outcome.completed = true;
      return outcome;
    }

    t = Clock::now();
    outcome.observed = link_array(block.cells, outcome.params, cfg.cutoff, cfg.caps);
    outcome.timings.emplace_back("observed_link", seconds_since(t));
    if (stage < Stage::simulate) {
      outcome.completed = true;
      return outcome;
    }

    const bool assess = stage == Stage::assess;
    const bool save = !assess || cfg.save_samples;
    if (save) fs::create_directories(cfg.out_dir / "samples");

    std::optional<RelinkTally> tally;
    if (assess) tally.emplace(outcome.observed, block.x_size(), block.truth);
    std::optional<SampleWriter> writer;
    double relink_seconds = 0.0;
    double accuracy_seconds = 0.0;
    std::int64_t burn_in = cfg.chain.burn_in;

    auto visit = [&](std::int64_t s, const AgreementArray& sample) {
      auto v0 = Clock::now();
      outcome.distances.push_back(distance(sample, block.cells));
      outcome.counts.push_back(ternary_counts(sample));
      if (writer) writer->write(sample);
      if (tally && s > burn_in) {
        auto r0 = Clock::now();
        auto links = link_array(sample, outcome.params, cfg.cutoff, cfg.caps);
        relink_seconds += seconds_since(r0);
        auto a0 = Clock::now();
        tally->add(links);
        accuracy_seconds += seconds_since(a0);
      }
      return seconds_since(v0);
    };

    t = Clock::now();
    double visit_seconds = 0.0;
    if (cfg.saved_samples) {
      SampleReader reader(samples_path(*cfg.saved_samples, blk.key));
      const auto& h = reader.header();
      if (static_cast<Index>(h.x_size) != block.x_size() || static_cast<Index>(h.y_size) != block.y_size() ||
          static_cast<Index>(h.field_count) != block.field_count()) {
        throw FormatError("saved samples for block " + blk.key + " do not match the block's shape");
      }
      burn_in = h.burn_in;
      outcome.chain_seed = h.seed;
      auto initial = reader.next();
      if (!initial || *initial != block.cells) {
        throw FormatError("saved samples for block " + blk.key + " start from a different agreement array");
      }
      std::int64_t s = 0;
      while (auto sample = reader.next()) visit_seconds += visit(++s, *sample);
      outcome.timings.emplace_back("load_samples", seconds_since(t) - visit_seconds);
    } else {
      const auto transition = transition_params(outcome.params, outcome.linking_fields);
      ChainConfig chain = cfg.chain;
      chain.seed = outcome.chain_seed;
      if (save) {
        SampleFileHeader h;
        h.x_size = static_cast<std::uint32_t>(block.x_size());
        h.y_size = static_cast<std::uint32_t>(block.y_size());
        h.field_count = static_cast<std::uint32_t>(block.field_count());
        h.samples = static_cast<std::uint32_t>(chain.samples());
        h.burn_in = static_cast<std::uint32_t>(chain.burn_in);
        h.thin = static_cast<std::uint32_t>(chain.thin);
        h.seed = chain.seed;
        writer.emplace(samples_path(cfg.out_dir / "samples", blk.key), h);
        writer->write(block.cells);
      }
      run_chain(block, transition, chain,
                [&](std::int64_t s, const AgreementArray& a) { visit_seconds += visit(s, a); });
      if (writer) writer->close();
      outcome.timings.emplace_back("simulate", seconds_since(t) - visit_seconds);
    }
    if (assess) {
      outcome.timings.emplace_back("relink", relink_seconds);
      outcome.timings.emplace_back("accuracy", accuracy_seconds);
      outcome.accuracy = tally->report();
    }

    if (cfg.write_plots) {
      const auto dir = cfg.out_dir / "plots";
      fs::create_directories(dir);
      const auto& key = blk.key;
      write_xy(dir / (key + "_distance.csv"), "sample", "distance", 1, map_text(outcome.distances, fmt_double));
      write_xy(dir / (key + "_agree_count.csv"), "sample", "agree", 1,
               map_text(outcome.counts, [](const TernaryCounts& c) { return std::to_string(c.agree); }));
      write_xy(dir / (key + "_disagree_count.csv"), "sample", "disagree", 1,
               map_text(outcome.counts, [](const TernaryCounts& c) { return std::to_string(c.disagree); }));
      if (assess) {
        write_xy(dir / (key + "_record_accuracy.csv"), "record", "proportion", 1,
                 map_text(outcome.accuracy.per_record(), fmt_double));
        write_xy(dir / (key + "_sample_accuracy.csv"), "sample", "proportion", burn_in + 1,
                 map_text(outcome.accuracy.per_sample(), fmt_double));
      }
    }
    outcome.completed = true;
  } catch (const Error& e) {
    outcome.completed = false;
    outcome.skip_reason = e.what();
  }
  return outcome;
}

namespace {

void write_manifest(const fs::path& path, const RunConfig& cfg, Stage stage, const BlockSet& blocks,
                    const std::vector<BlockOutcome>& outcomes, double total_seconds) {
  auto out = open_out(path);
  out << "format=macsim-manifest-1\n";
  out << "stage=" << stage_name(stage) << '\n';
  out << "seed=" << cfg.seed << '\n';
  if (cfg.synth) {
    out << "config.synth_n_y=" << cfg.synth->n_y << '\n';
    out << "config.synth_scale=" << fmt_double(cfg.synth->scale) << '\n';
    out << "config.synth_seed=" << cfg.synth->seed << '\n';
    out << "config.synth_errors=" << (cfg.synth->inject ? "paper-default" : "none") << '\n';
    out << "config.synth_error_seed=" << cfg.synth->errors.seed << '\n';
  } else {
    out << "config.x=" << cfg.x_file->string() << '\n';
    out << "config.y=" << cfg.y_file->string() << '\n';
    if (cfg.truth_file) out << "config.truth=" << cfg.truth_file->string() << '\n';
  }
  out << "config.blocking=" << join(names_of(cfg.blocking.blocking_fields), '&') << '\n';
  out << "config.use_truth_values=" << (cfg.blocking.use_truth_values ? 1 : 0) << '\n';
  out << "config.linking=" << join(names_of(cfg.blocking.resolved_linking_fields()), ',') << '\n';
  out << "config.cutoff=" << fmt_double(cfg.cutoff) << '\n';
  out << "config.weight_cap=" << fmt_double(cfg.caps.max) << '\n';
  out << "config.steps=" << cfg.chain.total_steps << '\n';
  out << "config.thin=" << cfg.chain.thin << '\n';
  out << "config.burn_in=" << cfg.chain.burn_in << '\n';
  out << "config.invalid_fields=" << (cfg.invalid_fields == InvalidFieldPolicy::drop ? "drop" : "reject") << '\n';
  out << "config.smoothing=" << fmt_double(cfg.estimation.smoothing) << '\n';
  if (cfg.params_file) out << "config.params=" << cfg.params_file->string() << '\n';
  if (cfg.saved_samples) out << "config.use_saved_samples=" << cfg.saved_samples->string() << '\n';
  out << "config.threads=" << cfg.threads << '\n';

  std::int64_t completed = 0;
  for (const auto& o : outcomes) completed += o.completed;
  out << "blocks.total=" << outcomes.size() << '\n';
  out << "blocks.completed=" << completed << '\n';
  out << "blocks.skipped=" << std::ssize(outcomes) - completed << '\n';
  out << "residual.x_records=" << blocks.residual.x_rows.size() << '\n';
  out << "residual.y_records=" << blocks.residual.y_rows.size() << '\n';

  std::int64_t correct = 0;
  std::int64_t trials = 0;
  for (const auto& o : outcomes) {
    const std::string p = "block." + o.key + '.';
    out << p << "status=" << (o.completed ? "completed" : "skipped") << '\n';
    if (!o.completed) out << p << "reason=" << o.skip_reason << '\n';
    out << p << "x_size=" << o.x_size << '\n';
    out << p << "y_size=" << o.y_size << '\n';
    out << p << "chain_seed=" << o.chain_seed << '\n';
    if (!o.dropped_fields.empty()) out << p << "dropped_fields=" << join(o.dropped_fields, ',') << '\n';
    if (!o.dropped_x_recids.empty()) out << p << "dropped_x_records=" << o.dropped_x_recids.size() << '\n';
    for (const auto& [name, sec] : o.timings) out << p << "time." << name << '=' << fmt_double(sec) << '\n';
    if (o.completed && stage == Stage::assess) {
      out << p << "linked_records=" << o.accuracy.records.size() << '\n';
      out << p << "unlinked_records=" << o.accuracy.unlinked.size() << '\n';
      out << p << "mean=" << fmt_double(o.accuracy.overall_mean()) << '\n';
      correct += o.accuracy.total_correct();
      trials += o.accuracy.sample_count() * std::ssize(o.accuracy.records);
    }
  }
  if (stage == Stage::assess && trials > 0) {
    out << "overall.mean=" << fmt_double(static_cast<double>(correct) / static_cast<double>(trials)) << '\n';
  }
  out << "time.total=" << fmt_double(total_seconds) << '\n';
}

void write_reports(const fs::path& dir, Stage stage, const std::vector<BlockOutcome>& outcomes) {
  if (stage >= Stage::estimate) {
    auto out = open_out(dir / "params.csv");
    out << "block,field,m,u,g,w\n";
    for (const auto& o : outcomes) {
      if (o.params.empty()) continue;
      write_params_csv(out, o.key, o.linking_fields, o.params, false);
    }
  }
  if (stage >= Stage::link) {
    auto out = open_out(dir / "observed_links.csv");
    out << "block,x_recid,y_recid,weight\n";
    for (const auto& o : outcomes) {
      if (!o.completed) continue;
      auto links = o.observed.links;
      std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.x < b.x; });
      for (const auto& l : links) {
        out << o.key << ',' << o.x_recids[static_cast<std::size_t>(l.x)] << ','
            << o.y_recids[static_cast<std::size_t>(l.y)] << ',' << fmt_double(l.weight) << '\n';
      }
    }
  }
  if (stage < Stage::assess) return;

  auto per_record = open_out(dir / "per_record.csv");
  auto per_sample = open_out(dir / "per_sample.csv");
  auto unlinked = open_out(dir / "unlinked.csv");
  per_record << "block,recid,proportion,truth_proportion\n";
  per_sample << "block,sample,proportion\n";
  unlinked << "block,recid\n";
  std::vector<double> all;
  for (const auto& o : outcomes) {
    if (!o.completed) continue;
    const auto& acc = o.accuracy;
    const auto rec = acc.per_record();
    const auto truth = acc.per_record_truth();
    for (std::size_t k = 0; k < rec.size(); ++k) {
      per_record << o.key << ',' << o.x_recids[static_cast<std::size_t>(acc.records[k])] << ','
                 << fmt_double(rec[k]) << ',' << (truth.empty() ? std::string() : fmt_double(truth[k])) << '\n';
      all.push_back(rec[k]);
    }
    const auto smp = acc.per_sample();
    const std::int64_t first = std::ssize(o.distances) - std::ssize(smp) + 1;
    for (std::size_t k = 0; k < smp.size(); ++k) {
      per_sample << o.key << ',' << first + static_cast<std::int64_t>(k) << ',' << fmt_double(smp[k]) << '\n';
    }
    for (Index i : acc.unlinked) unlinked << o.key << ',' << o.x_recids[static_cast<std::size_t>(i)] << '\n';
  }
  auto coarse = open_out(dir / "bins_coarse.csv");
  write_bins_csv(coarse, bin_report(all, coarse_edges()));
  auto fine = open_out(dir / "bins_fine.csv");
  write_bins_csv(fine, bin_report(all, fine_edges()));
}

}  // namespace

RunSummary run_stage(const RunConfig& cfg, Stage stage) {
  const auto start = Clock::now();
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  RunSummary summary;

  const Inputs inputs = load_inputs(cfg);
  if (stage == Stage::generate) {
    save_person_csv(cfg.out_dir / "Y.csv", inputs.y);
    save_link_file(cfg.out_dir / "X.csv", cfg.out_dir / "X_truth.csv", inputs.x);
    write_manifest(cfg.out_dir / "manifest.txt", cfg, stage, BlockSet{}, {}, seconds_since(start));
    return summary;
  }

  BlockSet blocks = partition(inputs.x, inputs.y, cfg.blocking);
  std::vector<const Block*> selected;
  if (cfg.block_filter.empty()) {
    for (const auto& b : blocks.blocks) selected.push_back(&b);
  } else {
    for (const auto& key : cfg.block_filter) {
      const Block* b = blocks.find(key);
      if (!b) throw ConfigError("unknown block key '" + key + "'");
      selected.push_back(b);
    }
  }
  {
    BlockSet shown;
    for (const Block* b : selected) shown.blocks.push_back(*b);
    shown.residual = blocks.residual;
    auto out = open_out(cfg.out_dir / "blocks.csv");
    write_block_manifest(out, shown);
  }

  summary.blocks.resize(selected.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= selected.size()) return;
      try {
        summary.blocks[k] = process_block(inputs, *selected[k], cfg, stage);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = selected.size();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), std::max<std::size_t>(selected.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  write_reports(cfg.out_dir, stage, summary.blocks);
  write_manifest(cfg.out_dir / "manifest.txt", cfg, stage, blocks, summary.blocks, seconds_since(start));

  const bool any_completed =
      std::any_of(summary.blocks.begin(), summary.blocks.end(), [](const BlockOutcome& o) { return o.completed; });
  summary.exit_status = !summary.blocks.empty() && !any_completed ? 2 : 0;
  return summary;
}

void write_bins_from_report(const fs::path& out_dir) {
  std::ifstream in(out_dir / "per_record.csv");
  if (!in) throw ConfigError("cannot open " + (out_dir / "per_record.csv").string());
  std::string line;
  std::getline(in, line);
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string key, recid, p;
    std::getline(ss, key, ',');
    std::getline(ss, recid, ',');
    std::getline(ss, p, ',');
    values.push_back(parse_double(p));
  }
  auto coarse = open_out(out_dir / "bins_coarse.csv");
  write_bins_csv(coarse, bin_report(values, coarse_edges()));
  auto fine = open_out(out_dir / "bins_fine.csv");
  write_bins_csv(fine, bin_report(values, fine_edges()));
}

}  // namespace macsim
