#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "macsim/kernel.hpp"
#include "macsim/linker.hpp"
#include "macsim/params.hpp"

namespace macsim {

// composite_weights followed by greedy_link.
LinkSet link_array(const AgreementArray& a, std::span<const FieldParams> params, double cutoff,
                   const WeightCaps& caps = {});

// Re-links every usable sample with the block's own params and cutoff.
std::vector<LinkSet> relink_samples(const SampleStream& stream, std::span<const FieldParams> params, double cutoff,
                                    const WeightCaps& caps = {});

// Correct re-link counts for one block. A record is correct in a sample when
// its simulated partner equals its observed partner. Records the observed
// link left unlinked are listed separately and excluded from both rates.
struct AccuracyReport {
  std::vector<Index> records;                       // observed-linked x indices, ascending
  std::vector<Index> partners;                      // observed partner of each entry of `records`
  std::vector<std::int64_t> record_correct;         // per entry of `records`
  std::vector<std::int64_t> sample_correct;         // per sample
  std::vector<std::int64_t> record_truth_correct;   // vs true partner; empty when no truth given
  std::vector<Index> unlinked;                      // x indices with no observed link

  std::int64_t sample_count() const { return std::ssize(sample_correct); }
  std::int64_t total_correct() const;
  std::vector<double> per_record() const;
  std::vector<double> per_sample() const;
  std::vector<double> per_record_truth() const;
  // total correct / (samples * linked records); NaN when either is zero.
  double overall_mean() const;
};

// Incremental form of correct_relink, for streamed samples.
class RelinkTally {
 public:
  RelinkTally(const LinkSet& observed, Index x_size, std::span<const Index> truth = {});
  void add(const LinkSet& simulated);
  const AccuracyReport& report() const noexcept { return report_; }

 private:
  Index x_size_;
  std::vector<Index> truth_;
  AccuracyReport report_;
};

AccuracyReport correct_relink(const LinkSet& observed, std::span<const LinkSet> simulated, Index x_size,
                              std::span<const Index> truth = {});

struct Bin {
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t count = 0;
  double percent = 0.0;
};

// Bins [edges[k+1], edges[k]) for strictly decreasing edges; the top bin also
// holds values equal to edges[0]. Percentages are relative to all
// proportions, including any that fall outside the edges.
std::vector<Bin> bin_report(std::span<const double> proportions, std::span<const double> edges);

std::vector<double> coarse_edges();  // 1.0, 0.9, ..., 0.0
std::vector<double> fine_edges();    // 1.00, 0.99, ..., 0.90

void write_bins_csv(std::ostream& out, std::span<const Bin> bins);

}  // namespace macsim
