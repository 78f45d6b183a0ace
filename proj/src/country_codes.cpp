#include <array>
#include <vector>

#include "macsim/synthgen.hpp"

namespace macsim {

namespace {

struct Region {
  std::int32_t prefix;
  int codes;
  double share;  // percent of overseas born
};

// 300 codes in total. Codes are prefix * 100 + k for k = 1..codes, except
// region 11 which starts at 1102 because 1101 is handled separately.
constexpr std::array<Region, 25> kRegions = {{
    {11, 3, 0.3},  {12, 2, 8.9},  {13, 5, 0.9},  {14, 8, 0.2},  {15, 10, 0.8},
    {21, 6, 23.0}, {22, 4, 1.2},  {23, 12, 4.5}, {24, 9, 0.8},  {31, 8, 5.0},
    {32, 14, 4.0}, {33, 15, 1.5}, {41, 8, 1.6},  {42, 20, 3.0}, {51, 8, 5.5},
    {52, 10, 6.0}, {61, 8, 8.0},  {62, 4, 1.3},  {71, 10, 6.5}, {72, 9, 0.3},
    {81, 30, 2.0}, {82, 12, 1.2}, {83, 30, 0.4}, {91, 25, 0.8}, {92, 30, 3.0},
}};

std::vector<CountryCode> build_table() {
  std::vector<CountryCode> table;
  for (const auto& r : kRegions) {
    double harmonic = 0.0;
    for (int k = 1; k <= r.codes; ++k) harmonic += 1.0 / k;
    const int first = r.prefix == 11 ? 2 : 1;
    for (int k = 1; k <= r.codes; ++k) {
      table.push_back({r.prefix * 100 + first + k - 1, r.share / (k * harmonic)});
    }
  }
  return table;
}

}  // namespace

std::span<const CountryCode> overseas_country_codes() {
  static const std::vector<CountryCode> table = build_table();
  return table;
}

}  // namespace macsim
