#include "macsim/kernel.hpp"

#include <string>

#include "macsim/errors.hpp"

namespace macsim {

namespace {

bool draw(double p, Rng& rng) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return rng.bernoulli(p);
}

// Non-matched cells after the matched cell flipped: agree cells can no longer
// agree, disagree cells may now agree.
void cascade_after_flip(std::span<Agreement> slice, Index matched, double q, Rng& rng, StepRecord& rec) {
  for (Index j = 0; j < std::ssize(slice); ++j) {
    if (j == matched) continue;
    auto& c = slice[static_cast<std::size_t>(j)];
    if (c == Agreement::agree) {
      c = Agreement::disagree;
      ++rec.flipped_to_disagree;
    } else if (c == Agreement::disagree && draw(q, rng)) {
      c = Agreement::agree;
      ++rec.flipped_to_agree;
    }
  }
}

}  // namespace

void ChainConfig::validate() const {
  if (thin <= 0) throw ConfigError("thinning interval must be positive");
  if (total_steps < 0) throw ConfigError("step count must be non-negative");
  if (total_steps % thin != 0) throw ConfigError("step count must be a multiple of the thinning interval");
  if (burn_in < 0) throw ConfigError("burn-in must be non-negative");
  if (burn_in > 0 && burn_in >= samples()) throw ConfigError("burn-in must be smaller than the retained sample count");
}

StepRecord kernel_step(AgreementBlock& state, std::span<const TransitionParams> params, Rng& rng) {
  StepRecord rec;
  if (state.x_size() == 0 || state.field_count() == 0) return rec;
  rec.x = rng.index(state.x_size());
  rec.field = rng.index(state.field_count());
  const Index t = state.truth[static_cast<std::size_t>(rec.x)];
  auto slice = state.cells.slice(rec.x, rec.field);
  auto& matched = slice[static_cast<std::size_t>(t)];
  rec.before = rec.after = matched;
  if (matched == Agreement::missing) return rec;

  const auto& tp = params[static_cast<std::size_t>(rec.field)];
  const double u = rng.uniform();
  if (matched == Agreement::agree) {
    if (!(u < tp.p1)) return rec;
    matched = Agreement::disagree;
    rec.after = matched;
    cascade_after_flip(slice, t, tp.q1, rng, rec);
  } else if (u < tp.p2) {
    matched = Agreement::agree;
    rec.after = matched;
    cascade_after_flip(slice, t, tp.q2, rng, rec);
  } else {
    for (Index j = 0; j < std::ssize(slice); ++j) {
      auto& c = slice[static_cast<std::size_t>(j)];
      if (j != t && c == Agreement::disagree && draw(tp.q3, rng)) {
        c = Agreement::agree;
        ++rec.flipped_to_agree;
      }
    }
  }
  return rec;
}

void run_chain(const AgreementBlock& a0, std::span<const TransitionParams> params, const ChainConfig& cfg,
               const SampleVisitor& visit) {
  cfg.validate();
  if (static_cast<Index>(params.size()) != a0.field_count()) {
    throw DomainError("run_chain: one TransitionParams per field required");
  }
  AgreementBlock state = a0;
  Rng rng(cfg.seed);
  const std::int64_t samples = cfg.samples();
  for (std::int64_t s = 1; s <= samples; ++s) {
    for (std::int64_t k = 0; k < cfg.thin; ++k) kernel_step(state, params, rng);
    visit(s, state.cells);
  }
}

SampleStream run_chain(const AgreementBlock& a0, std::span<const TransitionParams> params, const ChainConfig& cfg) {
  SampleStream stream;
  stream.initial = a0.cells;
  stream.burn_in = cfg.burn_in;
  stream.thin = cfg.thin;
  stream.seed = cfg.seed;
  stream.retained.reserve(static_cast<std::size_t>(std::max<std::int64_t>(cfg.samples(), 0)));
  run_chain(a0, params, cfg, [&](std::int64_t, const AgreementArray& a) { stream.retained.push_back(a); });
  return stream;
}

std::vector<TransitionParams> transition_params(std::span<const FieldParams> params,
                                                std::span<const std::string> field_names) {
  std::vector<TransitionParams> out;
  out.reserve(params.size());
  for (std::size_t l = 0; l < params.size(); ++l) {
    const std::string name = l < field_names.size() ? field_names[l] : std::to_string(l);
    out.push_back(transition_params(params[l], name));
  }
  return out;
}

double distance(const AgreementArray& sample, const AgreementArray& a0) {
  if (!sample.same_shape(a0)) throw DomainError("distance: arrays differ in shape");
  if (a0.size() == 0) return 0.0;
  auto a = sample.cells();
  auto b = a0.cells();
  std::int64_t changed = 0;
  for (std::size_t k = 0; k < a.size(); ++k) changed += a[k] != b[k];
  return static_cast<double>(changed) / static_cast<double>(a.size());
}

TernaryCounts ternary_counts(const AgreementArray& sample) {
  TernaryCounts c;
  for (Agreement a : sample.cells()) {
    switch (a) {
      case Agreement::agree: ++c.agree; break;
      case Agreement::disagree: ++c.disagree; break;
      case Agreement::missing: ++c.missing; break;
    }
  }
  return c;
}

}  // namespace macsim
