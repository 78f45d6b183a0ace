#include "macsim/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "macsim/errors.hpp"

namespace macsim {

namespace {

constexpr std::int32_t kFirstSa1 = 10001;
constexpr std::int32_t kDays = 366;
constexpr std::int32_t kFirstYear = 1955;
constexpr std::int32_t kLastYear = 2009;
constexpr std::int32_t kEyeColours = 5;
constexpr Index kMeshblocks = 5;

Index integral_size(double value, const char* what) {
  const double r = std::round(value);
  if (r < 1.0 || std::abs(value - r) > 1e-9) {
    throw ConfigError(std::string(what) + " group size is not a positive integer");
  }
  return static_cast<Index>(r);
}

std::string make_recid(Index serial) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "A%06lld", static_cast<long long>(serial));
  return buf;
}

// Uniform draw from [lo, hi] other than `current`.
std::int32_t other_value(std::int32_t lo, std::int32_t hi, std::int32_t current, Rng& rng) {
  auto r = lo + static_cast<std::int32_t>(rng.index(hi - lo));
  return r >= current ? r + 1 : r;
}

std::int32_t draw_overseas(Rng& rng) {
  static const std::vector<double> cumulative = [] {
    std::vector<double> c;
    double total = 0.0;
    for (const auto& cc : overseas_country_codes()) c.push_back(total += cc.weight);
    return c;
  }();
  const double target = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
  return overseas_country_codes()[k].code;
}

std::int32_t same_region_code(std::int32_t current, Rng& rng) {
  std::vector<std::int32_t> candidates;
  for (const auto& cc : overseas_country_codes()) {
    if (cc.code / 100 == current / 100 && cc.code != current) candidates.push_back(cc.code);
  }
  if (candidates.empty()) return current;
  return candidates[static_cast<std::size_t>(rng.index(static_cast<Index>(candidates.size())))];
}

// Splits a uniform draw of sum(counts) rows from `pool` into consecutive parts.
std::vector<std::vector<Index>> disjoint_selections(const std::vector<Index>& pool,
                                                    const std::vector<Index>& counts, Rng& rng,
                                                    const char* what) {
  const Index total = std::accumulate(counts.begin(), counts.end(), Index{0});
  if (total > static_cast<Index>(pool.size())) {
    throw ConfigError(std::string(what) + ": more records requested than are eligible");
  }
  auto picks = sample_indices(static_cast<Index>(pool.size()), total, rng);
  std::vector<std::vector<Index>> parts;
  std::size_t at = 0;
  for (Index c : counts) {
    auto& part = parts.emplace_back();
    for (Index k = 0; k < c; ++k) part.push_back(pool[static_cast<std::size_t>(picks[at++])]);
  }
  return parts;
}

std::vector<Index> all_rows(Index n) {
  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  return rows;
}

}  // namespace

Population generate_population(Index n_y, double scale, std::uint64_t seed) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  const Index sa1_size = integral_size(400.0 * scale, "SA1");
  if (n_y <= 0 || n_y % sa1_size != 0) throw ConfigError("n_y is not a multiple of the SA1 group size");
  if (n_y % 8 != 0) throw ConfigError("n_y is not a multiple of 8");
  if (n_y > 999999) throw ConfigError("n_y exceeds the 7-character RECID range");
  const Index n_sa1 = n_y / sa1_size;
  if (kFirstSa1 + n_sa1 - 1 > 99999) throw ConfigError("too many SA1 groups for 5-digit codes");

  Rng rng(seed);
  PersonFile y(static_cast<std::size_t>(n_y));

  for (Index r = 0; r < n_y; ++r) {
    auto& rec = y[static_cast<std::size_t>(r)];
    const auto sa1 = static_cast<std::int32_t>(kFirstSa1 + r / sa1_size);
    // Equal meshblocks of 80 * scale when that is integral, otherwise as even as possible.
    const auto mb_suffix = static_cast<std::int32_t>((r % sa1_size) * kMeshblocks / sa1_size + 1);
    rec[Field::sa1] = sa1;
    rec[Field::mb] = sa1 * 100 + mb_suffix;
  }

  std::vector<std::int32_t> sex(static_cast<std::size_t>(n_y));
  std::fill(sex.begin(), sex.begin() + n_y / 2, 1);
  std::fill(sex.begin() + n_y / 2, sex.end(), 2);
  shuffle(std::span(sex), rng);

  const Index n_australian = 3 * n_y / 4;
  std::vector<std::int32_t> cob(static_cast<std::size_t>(n_y), kAustralia);
  for (Index r = n_australian; r < n_y; ++r) cob[static_cast<std::size_t>(r)] = draw_overseas(rng);
  shuffle(std::span(cob), rng);

  for (Index r = 0; r < n_y; ++r) {
    auto& rec = y[static_cast<std::size_t>(r)];
    rec[Field::bday] = 1 + static_cast<std::int32_t>(rng.index(kDays));
    rec[Field::byear] = kFirstYear + static_cast<std::int32_t>(rng.index(kLastYear - kFirstYear + 1));
    rec[Field::sex] = sex[static_cast<std::size_t>(r)];
    rec[Field::eye] = 1 + static_cast<std::int32_t>(rng.index(kEyeColours));
    rec[Field::cob] = cob[static_cast<std::size_t>(r)];
  }

  shuffle(std::span(y), rng);
  for (Index r = 0; r < n_y; ++r) y[static_cast<std::size_t>(r)].recid = make_recid(r + 1);

  Population pop;
  pop.x.records.assign(y.begin(), y.begin() + n_y / 8);
  pop.x.originals = pop.x.records;
  pop.y = std::move(y);
  return pop;
}

ErrorSpec ErrorSpec::none() {
  ErrorSpec s;
  s.sa1_adjacent = s.mb_within_sa1 = 0.0;
  s.bday_missing = s.bday_altered = 0.0;
  s.byear_minus2 = s.byear_plus2 = s.byear_minus1 = s.byear_plus1 = 0.0;
  s.sex_flip = 0.0;
  s.eye_missing = s.eye_alternative = 0.0;
  s.cob_missing_australian = s.cob_missing_overseas = s.cob_to_australia = s.cob_same_region = 0.0;
  return s;
}

Index ErrorSpec::count(double rate, Index n) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("error rate outside [0, 1]");
  return static_cast<Index>(std::llround(rate * static_cast<double>(n)));
}

LinkFile inject_errors(const LinkFile& x, const ErrorSpec& spec) {
  LinkFile out = x;
  const auto n = static_cast<Index>(x.size());
  if (n == 0) return out;
  auto& rec = out.records;
  auto at = [&](Index r) -> PersonRecord& { return rec[static_cast<std::size_t>(r)]; };
  auto cnt = [&](double rate) { return ErrorSpec::count(rate, n); };
  Rng rng(spec.seed);
  const auto rows = all_rows(n);

  std::int32_t sa1_lo = std::numeric_limits<std::int32_t>::max();
  std::int32_t sa1_hi = std::numeric_limits<std::int32_t>::min();
  std::int32_t mb_per_sa1 = 1;
  for (const auto& o : x.originals) {
    if (!o[Field::sa1]) continue;
    sa1_lo = std::min(sa1_lo, *o[Field::sa1]);
    sa1_hi = std::max(sa1_hi, *o[Field::sa1]);
    if (o[Field::mb]) mb_per_sa1 = std::max(mb_per_sa1, *o[Field::mb] % 100);
  }

  // SA1 moved to an adjacent code with the meshblock prefix following it;
  // MB moved to another meshblock of the same SA1.
  {
    auto sel = disjoint_selections(rows, {cnt(spec.sa1_adjacent), cnt(spec.mb_within_sa1)}, rng, "SA1/MB");
    for (Index r : sel[0]) {
      auto& v = at(r);
      if (!v[Field::sa1] || sa1_lo == sa1_hi) continue;
      const std::int32_t old = *v[Field::sa1];
      std::int32_t step = rng.bernoulli(0.5) ? 1 : -1;
      if (old + step < sa1_lo || old + step > sa1_hi) step = -step;
      const std::int32_t moved = old + step;
      v[Field::sa1] = moved;
      if (v[Field::mb]) v[Field::mb] = moved * 100 + *v[Field::mb] % 100;
    }
    for (Index r : sel[1]) {
      auto& v = at(r);
      if (!v[Field::mb] || mb_per_sa1 < 2) continue;
      const std::int32_t suffix = *v[Field::mb] % 100;
      v[Field::mb] = (*v[Field::mb] / 100) * 100 + other_value(1, mb_per_sa1, suffix, rng);
    }
  }
  {
    auto sel = disjoint_selections(rows, {cnt(spec.bday_missing), cnt(spec.bday_altered)}, rng, "BDAY");
    for (Index r : sel[0]) at(r)[Field::bday].reset();
    for (Index r : sel[1]) {
      auto& v = at(r)[Field::bday];
      if (v) v = other_value(1, kDays, *v, rng);
    }
  }
  {
    auto sel = disjoint_selections(
        rows, {cnt(spec.byear_minus2), cnt(spec.byear_plus2), cnt(spec.byear_minus1), cnt(spec.byear_plus1)},
        rng, "BYEAR");
    constexpr std::array<std::int32_t, 4> shift = {-2, 2, -1, 1};
    for (std::size_t k = 0; k < shift.size(); ++k) {
      for (Index r : sel[k]) {
        auto& v = at(r)[Field::byear];
        if (v) v = *v + shift[k];
      }
    }
  }
  {
    auto sel = disjoint_selections(rows, {cnt(spec.sex_flip)}, rng, "SEX");
    for (Index r : sel[0]) {
      auto& v = at(r)[Field::sex];
      if (v) v = *v == 1 ? 2 : 1;
    }
  }
  {
    auto sel = disjoint_selections(rows, {cnt(spec.eye_missing), cnt(spec.eye_alternative)}, rng, "EYE");
    for (Index r : sel[0]) at(r)[Field::eye].reset();
    for (Index r : sel[1]) {
      auto& v = at(r)[Field::eye];
      if (v) v = other_value(1, kEyeColours, *v, rng);
    }
  }
  {
    std::vector<Index> australian;
    std::vector<Index> overseas;
    for (Index r = 0; r < n; ++r) {
      const auto& c = x.originals[static_cast<std::size_t>(r)][Field::cob];
      if (!c) continue;
      (*c == kAustralia ? australian : overseas).push_back(r);
    }
    auto sel_au = disjoint_selections(australian, {cnt(spec.cob_missing_australian)}, rng, "COB");
    auto sel_os = disjoint_selections(
        overseas, {cnt(spec.cob_missing_overseas), cnt(spec.cob_to_australia), cnt(spec.cob_same_region)}, rng,
        "COB");
    for (Index r : sel_au[0]) at(r)[Field::cob].reset();
    for (Index r : sel_os[0]) at(r)[Field::cob].reset();
    for (Index r : sel_os[1]) at(r)[Field::cob] = kAustralia;
    for (Index r : sel_os[2]) {
      auto& v = at(r)[Field::cob];
      v = same_region_code(*v, rng);
    }
  }
  return out;
}

}  // namespace macsim
