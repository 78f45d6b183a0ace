#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "macsim/agreement.hpp"
#include "macsim/params.hpp"
#include "macsim/rng.hpp"

namespace macsim {

// A chain of total_steps kernel applications, keeping the state after every
// `thin` steps. The first burn_in kept states are marked unusable.
struct ChainConfig {
  std::int64_t total_steps = 1'000'000;
  std::int64_t thin = 1000;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 1;

  std::int64_t samples() const { return thin > 0 ? total_steps / thin : 0; }
  // Throws ConfigError unless thin > 0, total_steps = thin * S and burn_in < S
  // (burn_in = 0 is accepted for an empty chain).
  void validate() const;
};

// What one kernel step did, for instrumentation.
struct StepRecord {
  Index x = 0;
  Index field = 0;
  Agreement before = Agreement::missing;  // matched cell before the step
  Agreement after = Agreement::missing;   // matched cell after the step
  Index flipped_to_disagree = 0;          // non-matched cells agree -> disagree
  Index flipped_to_agree = 0;             // non-matched cells disagree -> agree
};

// One transition, in place. Picks x record i and field l uniformly; let t be
// i's true partner.
//   matched cell missing            : nothing changes
//   matched agree, flips (p1)       : non-matched agree -> disagree,
//                                     disagree -> agree with q1
//   matched agree, no flip          : nothing else changes
//   matched disagree, flips (p2)    : non-matched agree -> disagree,
//                                     disagree -> agree with q2
//   matched disagree, no flip       : non-matched disagree -> agree with q3
// Missing cells never change. Draw order: index(x_size), index(fields), one
// uniform for the matched cell, then one uniform per disagreeing non-matched
// cell in ascending j, only when its probability lies strictly in (0, 1).
StepRecord kernel_step(AgreementBlock& state, std::span<const TransitionParams> params, Rng& rng);

// Initial state plus the S states kept by thinning.
struct SampleStream {
  AgreementArray initial;
  std::vector<AgreementArray> retained;  // A*(1) .. A*(S)
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
  std::uint64_t seed = 0;

  std::span<const AgreementArray> usable() const {
    return std::span(retained).subspan(static_cast<std::size_t>(std::min<std::int64_t>(burn_in, std::ssize(retained))));
  }
  bool operator==(const SampleStream&) const = default;
};

// Called with s = 1..S and the state after s * thin steps.
using SampleVisitor = std::function<void(std::int64_t s, const AgreementArray& sample)>;

// Streams every kept state, burn-in included, to `visit`. Seeds its
// generator with cfg.seed.
void run_chain(const AgreementBlock& a0, std::span<const TransitionParams> params, const ChainConfig& cfg,
               const SampleVisitor& visit);

SampleStream run_chain(const AgreementBlock& a0, std::span<const TransitionParams> params, const ChainConfig& cfg);

// Per-field transition_params; throws ValidationError naming the field.
std::vector<TransitionParams> transition_params(std::span<const FieldParams> params,
                                                std::span<const std::string> field_names = {});

// Share of cells whose value differs from a0. Throws DomainError on a shape mismatch.
double distance(const AgreementArray& sample, const AgreementArray& a0);

struct TernaryCounts {
  std::int64_t agree = 0;
  std::int64_t disagree = 0;
  std::int64_t missing = 0;

  std::int64_t total() const { return agree + disagree + missing; }
  bool operator==(const TernaryCounts&) const = default;
};

TernaryCounts ternary_counts(const AgreementArray& sample);

}  // namespace macsim
