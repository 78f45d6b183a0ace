#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "macsim/records.hpp"
#include "macsim/rng.hpp"

namespace macsim {

inline constexpr std::int32_t kAustralia = 1101;

struct CountryCode {
  std::int32_t code;
  double weight;
};

// Approximate overseas-born country-of-birth table: 300 four-digit codes,
// grouped by their two-digit region prefix, with relative weights. The
// proportions are illustrative and do not come from any census release.
std::span<const CountryCode> overseas_country_codes();

struct Population {
  PersonFile y;
  LinkFile x;  // first n_y / 8 records of y, error free
};

// Y has n_y records in random order. SA1 codes 10001.. each hold exactly
// 400 * scale records, split over 5 meshblocks (80 * scale each when that is
// a whole number, otherwise as evenly as possible). Sex is exactly half male;
// exactly three quarters of COB values are 1101, the rest drawn from
// overseas_country_codes(). Throws ConfigError when the SA1 group size is not
// integral or n_y is not a multiple of it and of 8.
Population generate_population(Index n_y, double scale, std::uint64_t seed);

// Rates are fractions of |X|; the count applied is llround(rate * |X|).
// Within one field the selections are disjoint, across fields independent.
struct ErrorSpec {
  double sa1_adjacent = 0.01;
  double mb_within_sa1 = 0.03;
  double bday_missing = 0.08;
  double bday_altered = 0.01;
  double byear_minus2 = 0.001;
  double byear_plus2 = 0.001;
  double byear_minus1 = 0.024;
  double byear_plus1 = 0.024;
  double sex_flip = 0.001;
  double eye_missing = 0.10;
  double eye_alternative = 0.10;
  double cob_missing_australian = 0.015;  // drawn among COB == 1101
  double cob_missing_overseas = 0.005;    // drawn among COB != 1101
  double cob_to_australia = 0.0025;       // drawn among COB != 1101
  double cob_same_region = 0.0025;        // drawn among COB != 1101
  std::uint64_t seed = 0x5eed;

  static ErrorSpec none();
  static Index count(double rate, Index n);
};

// Perturbed copy of x. Pre-error values are kept in the result's originals.
// Throws ConfigError when a rate is outside [0, 1] or a selection would need
// more records than are eligible.
LinkFile inject_errors(const LinkFile& x, const ErrorSpec& spec);

}  // namespace macsim
