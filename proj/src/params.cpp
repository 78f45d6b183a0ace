#include "macsim/params.hpp"

#include <algorithm>
#include <cmath>

#include "macsim/errors.hpp"

namespace macsim {

namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

std::string label(std::string_view field) { return field.empty() ? std::string("?") : std::string(field); }

}  // namespace

double w_from_g(double g) {
  if (!is_probability(g)) throw DomainError("w_from_g: g outside [0, 1]");
  return 1.0 - std::sqrt(1.0 - g);
}

Regime regime(const FieldParams& fp) {
  return fp.u <= 0.5 * (1.0 - fp.g) ? Regime::low_u : Regime::high_u;
}

void validate(const FieldParams& fp, std::string_view field) {
  if (!is_probability(fp.m) || !is_probability(fp.u) || !is_probability(fp.g)) {
    throw DomainError("field " + label(field) + ": probability outside [0, 1]");
  }
  if (fp.m + fp.g > 1.0 + kProbabilityTolerance) {
    throw ValidationError(label(field), "m + g exceeds 1");
  }
  if (fp.u + fp.g > 1.0 + kProbabilityTolerance) {
    throw ValidationError(label(field), "u + g exceeds 1");
  }
  if (!(fp.m > fp.u)) {
    throw ValidationError(label(field), "m does not exceed u");
  }
}

TransitionParams transition_params(const FieldParams& fp, std::string_view field) {
  validate(fp, field);
  return transition_params(fp, regime(fp), field);
}

TransitionParams transition_params(const FieldParams& fp, Regime forced, std::string_view field) {
  validate(fp, field);
  const double m = fp.m;
  const double u = fp.u;
  const double g = fp.g;
  const double m_bar = std::max(0.0, 1.0 - m - g);  // matched disagree rate
  const double u_bar = std::max(0.0, 1.0 - u - g);  // non-matched disagree rate

  TransitionParams tp;
  if (forced == Regime::low_u) {
    tp.p1 = m_bar / m;
    tp.q1 = tp.q2 = u_bar > 0.0 ? u / u_bar : 1.0;
  } else {
    tp.p1 = m_bar * u_bar / (m * (3.0 * u + g - 1.0));
    tp.q1 = tp.q2 = 1.0;
  }
  tp.q3 = 1.0;

  if (m_bar <= kFrozenTolerance) {
    tp.p1 = tp.p2 = 0.0;
  } else if (tp.p1 > 1.0) {
    // Matched disagree cells now stay put with probability 1 - p2, and the
    // non-matched balance only holds if step 4(c) leaves them alone.
    tp.p1 = 1.0;
    tp.p2 = m / m_bar;
    tp.q3 = 0.0;
  } else {
    tp.p2 = tp.p1 * m / m_bar;
  }
  for (double* p : {&tp.p1, &tp.p2, &tp.q1, &tp.q2}) *p = std::clamp(*p, 0.0, 1.0);  // rounding only
  return tp;
}

}  // namespace macsim
