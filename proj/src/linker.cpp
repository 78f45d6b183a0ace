#include "macsim/linker.hpp"

namespace macsim {

double cell_weight(Agreement a, const FieldParams& fp, const WeightCaps& caps) {
  auto ratio = [&](double num, double den) {
    if (num <= 0.0) return caps.min;
    if (den <= 0.0) return caps.min;
    return std::clamp(std::log2(num / den), caps.min, caps.max);
  };
  switch (a) {
    case Agreement::missing:
      return 0.0;
    case Agreement::agree:
      if (fp.u <= 0.0 && fp.m > 0.0) return caps.max;
      return ratio(fp.m, fp.u);
    case Agreement::disagree:
      return ratio(1.0 - fp.m - fp.g, 1.0 - fp.u - fp.g);
  }
  return 0.0;
}

std::vector<Index> LinkSet::partners(Index x_size) const {
  std::vector<Index> out(static_cast<std::size_t>(x_size), -1);
  for (const auto& l : links) out[static_cast<std::size_t>(l.x)] = l.y;
  return out;
}

bool LinkSet::is_one_to_one() const {
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      if (links[a].x == links[b].x || links[a].y == links[b].y) return false;
    }
  }
  return true;
}

namespace detail {

LinkSet accept_greedily(std::vector<Candidate> candidates, Index x_size, Index y_size, double cutoff) {
  std::sort(candidates.begin(), candidates.end(), ranks_before);
  std::vector<bool> x_used(static_cast<std::size_t>(x_size), false);
  std::vector<bool> y_used(static_cast<std::size_t>(y_size), false);
  LinkSet out;
  out.cutoff = cutoff;
  const auto limit = static_cast<std::size_t>(std::min(x_size, y_size));
  for (const auto& c : candidates) {
    if (out.links.size() == limit) break;
    auto xi = static_cast<std::size_t>(c.x);
    auto yj = static_cast<std::size_t>(c.y);
    if (x_used[xi] || y_used[yj]) continue;
    x_used[xi] = y_used[yj] = true;
    out.links.push_back({c.x, c.y, c.weight});
  }
  return out;
}

}  // namespace detail

}  // namespace macsim
