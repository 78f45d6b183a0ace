#include "macsim/analytics.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "macsim/errors.hpp"
#include "macsim/format.hpp"

namespace macsim {

LinkSet link_array(const AgreementArray& a, std::span<const FieldParams> params, double cutoff,
                   const WeightCaps& caps) {
  return greedy_link(composite_weights(a, params, caps), cutoff);
}

std::vector<LinkSet> relink_samples(const SampleStream& stream, std::span<const FieldParams> params, double cutoff,
                                    const WeightCaps& caps) {
  std::vector<LinkSet> out;
  for (const auto& sample : stream.usable()) out.push_back(link_array(sample, params, cutoff, caps));
  return out;
}

std::int64_t AccuracyReport::total_correct() const {
  return std::accumulate(record_correct.begin(), record_correct.end(), std::int64_t{0});
}

namespace {

std::vector<double> ratios(const std::vector<std::int64_t>& counts, std::int64_t denominator) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto c : counts) {
    out.push_back(denominator > 0 ? static_cast<double>(c) / static_cast<double>(denominator)
                                  : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace

std::vector<double> AccuracyReport::per_record() const { return ratios(record_correct, sample_count()); }
std::vector<double> AccuracyReport::per_sample() const { return ratios(sample_correct, std::ssize(records)); }
std::vector<double> AccuracyReport::per_record_truth() const { return ratios(record_truth_correct, sample_count()); }

double AccuracyReport::overall_mean() const {
  const std::int64_t denom = sample_count() * std::ssize(records);
  if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(total_correct()) / static_cast<double>(denom);
}

RelinkTally::RelinkTally(const LinkSet& observed, Index x_size, std::span<const Index> truth)
    : x_size_(x_size), truth_(truth.begin(), truth.end()) {
  const auto partners = observed.partners(x_size);
  for (Index i = 0; i < x_size; ++i) {
    if (partners[static_cast<std::size_t>(i)] < 0) {
      report_.unlinked.push_back(i);
    } else {
      report_.records.push_back(i);
      report_.partners.push_back(partners[static_cast<std::size_t>(i)]);
    }
  }
  report_.record_correct.assign(report_.records.size(), 0);
  if (!truth_.empty()) report_.record_truth_correct.assign(report_.records.size(), 0);
}

void RelinkTally::add(const LinkSet& simulated) {
  const auto sim = simulated.partners(x_size_);
  std::int64_t correct = 0;
  for (std::size_t k = 0; k < report_.records.size(); ++k) {
    const Index got = sim[static_cast<std::size_t>(report_.records[k])];
    if (got == report_.partners[k]) {
      ++report_.record_correct[k];
      ++correct;
    }
    if (!truth_.empty() && got == truth_[static_cast<std::size_t>(report_.records[k])]) {
      ++report_.record_truth_correct[k];
    }
  }
  report_.sample_correct.push_back(correct);
}

AccuracyReport correct_relink(const LinkSet& observed, std::span<const LinkSet> simulated, Index x_size,
                              std::span<const Index> truth) {
  RelinkTally tally(observed, x_size, truth);
  for (const auto& s : simulated) tally.add(s);
  return tally.report();
}

std::vector<Bin> bin_report(std::span<const double> proportions, std::span<const double> edges) {
  if (edges.size() < 2) throw DomainError("bin_report: at least two edges required");
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (!(edges[k] > edges[k + 1])) throw DomainError("bin_report: edges must be strictly decreasing");
  }
  std::vector<Bin> bins;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) bins.push_back({edges[k + 1], edges[k], 0, 0.0});
  for (double p : proportions) {
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const bool in_top = k == 0 && p == bins[k].upper;
      if (in_top || (p >= bins[k].lower && p < bins[k].upper)) {
        ++bins[k].count;
        break;
      }
    }
  }
  const double total = static_cast<double>(proportions.size());
  for (auto& b : bins) b.percent = total > 0 ? 100.0 * static_cast<double>(b.count) / total : 0.0;
  return bins;
}

std::vector<double> coarse_edges() {
  std::vector<double> e;
  for (int k = 10; k >= 0; --k) e.push_back(k / 10.0);
  return e;
}

std::vector<double> fine_edges() {
  std::vector<double> e;
  for (int k = 100; k >= 90; --k) e.push_back(k / 100.0);
  return e;
}

void write_bins_csv(std::ostream& out, std::span<const Bin> bins) {
  out << "upper,lower,count,percent\n";
  for (const auto& b : bins) {
    out << fmt_double(b.upper) << ',' << fmt_double(b.lower) << ',' << b.count << ',' << fmt_double(b.percent)
        << '\n';
  }
}

}  // namespace macsim
