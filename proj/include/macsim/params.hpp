#pragma once

#include <string>
#include <string_view>

namespace macsim {

// Single-file missing rate w from the pair missing rate g, using (1 - w)^2 = 1 - g.
double w_from_g(double g);

// Per-field agreement probabilities.
//   m: agree, given a matched pair
//   u: agree, given a non-matched pair
//   g: either or both values missing
//   w: one file's value missing
struct FieldParams {
  double m = 0.0;
  double u = 0.0;
  double g = 0.0;
  double w = 0.0;

  static FieldParams make(double m, double u, double g) { return {m, u, g, w_from_g(g)}; }

  bool operator==(const FieldParams&) const = default;
};

// Kernel flip probabilities for one field. p1: matched agree -> disagree,
// p2: matched disagree -> agree, q1..q3: non-matched disagree -> agree in the
// three cascade cases.
struct TransitionParams {
  double p1 = 0.0;
  double p2 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 1.0;

  bool operator==(const TransitionParams&) const = default;
};

inline constexpr double kFrozenTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-12;

// low_u: u <= (1 - g) / 2, where q1 = q2 = u / (1 - u - g) is a probability.
enum class Regime { low_u, high_u };

Regime regime(const FieldParams& fp);

// Throws ValidationError naming `field` when m + g > 1, u + g > 1 or m <= u,
// and DomainError when a probability is outside [0, 1].
void validate(const FieldParams& fp, std::string_view field = {});

// Flip probabilities that keep the matched agree rate at m and the
// non-matched agree rate at u. Validates fp first.
//
// A field with 1 - m - g <= kFrozenTolerance is frozen: p1 = p2 = 0.
// For m < (1 - g) / 2 in the low_u regime the unconstrained p1 exceeds one;
// it is clamped to 1, p2 = m / (1 - m - g) keeps the matched balance and
// q3 = 0 keeps the non-matched one. Everywhere else q3 = 1.
TransitionParams transition_params(const FieldParams& fp, std::string_view field = {});

// Same, but evaluating the formulas of the given regime regardless of u.
TransitionParams transition_params(const FieldParams& fp, Regime forced, std::string_view field = {});

}  // namespace macsim
