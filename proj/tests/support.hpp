#pragma once

// Test-side helpers. The oracles here are written from the algorithm
// descriptions, not from the library code, and are deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <span>
#include <vector>

#include "macsim/agreement.hpp"
#include "macsim/params.hpp"
#include "macsim/rng.hpp"

namespace testsupport {

using macsim::Agreement;
using macsim::Index;

// Block whose cells are drawn independently: matched cells agree with
// probability m, non-matched with u, and either is missing with probability g.
inline macsim::AgreementBlock random_block(Index nx, Index ny, const std::vector<macsim::FieldParams>& params,
                                           macsim::Rng& rng) {
  macsim::AgreementBlock b;
  b.cells = macsim::AgreementArray(nx, ny, static_cast<Index>(params.size()));
  std::vector<Index> ys(static_cast<std::size_t>(ny));
  for (Index j = 0; j < ny; ++j) ys[static_cast<std::size_t>(j)] = j;
  macsim::shuffle(std::span(ys), rng);
  b.truth.assign(ys.begin(), ys.begin() + nx);
  for (Index i = 0; i < nx; ++i) {
    for (Index j = 0; j < ny; ++j) {
      const bool matched = b.truth[static_cast<std::size_t>(i)] == j;
      for (Index l = 0; l < static_cast<Index>(params.size()); ++l) {
        const auto& fp = params[static_cast<std::size_t>(l)];
        const double r = rng.uniform();
        const double agree = matched ? fp.m : fp.u;
        Agreement a = Agreement::disagree;
        if (r < fp.g) {
          a = Agreement::missing;
        } else if (r < fp.g + agree) {
          a = Agreement::agree;
        }
        b.cells.set(i, j, l, a);
      }
    }
  }
  return b;
}

// Same, but missingness comes from the records: each value is absent with
// probability w, a cell is missing when either side is, and present cells
// agree with probability m / (1 - g) or u / (1 - g).
inline macsim::AgreementBlock record_missing_block(Index nx, Index ny, const std::vector<macsim::FieldParams>& params,
                                                   macsim::Rng& rng) {
  macsim::AgreementBlock b;
  const Index nl = static_cast<Index>(params.size());
  b.cells = macsim::AgreementArray(nx, ny, nl);
  std::vector<Index> ys(static_cast<std::size_t>(ny));
  for (Index j = 0; j < ny; ++j) ys[static_cast<std::size_t>(j)] = j;
  macsim::shuffle(std::span(ys), rng);
  b.truth.assign(ys.begin(), ys.begin() + nx);
  for (Index l = 0; l < nl; ++l) {
    const auto& fp = params[static_cast<std::size_t>(l)];
    std::vector<bool> x_gone(static_cast<std::size_t>(nx)), y_gone(static_cast<std::size_t>(ny));
    for (auto&& v : x_gone) v = rng.uniform() < fp.w;
    for (auto&& v : y_gone) v = rng.uniform() < fp.w;
    for (Index i = 0; i < nx; ++i) {
      for (Index j = 0; j < ny; ++j) {
        Agreement a = Agreement::missing;
        if (!x_gone[static_cast<std::size_t>(i)] && !y_gone[static_cast<std::size_t>(j)]) {
          const double agree = b.truth[static_cast<std::size_t>(i)] == j ? fp.m : fp.u;
          a = rng.uniform() < agree / (1.0 - fp.g) ? Agreement::agree : Agreement::disagree;
        }
        b.cells.set(i, j, l, a);
      }
    }
  }
  return b;
}

// Probability that a non-matched cell agrees after one step, by the
// one-step expansion over the joint state of the matched and non-matched
// cells (independence assumed, w the single-file missing rate).
inline double nonmatched_agree_after_step(double m, double u, double g, const macsim::TransitionParams& t) {
  const double w = 1.0 - std::sqrt(1.0 - g);
  const double mb = 1.0 - m - g;
  const double ub = 1.0 - u - g;
  const double s = m * u * (1.0 - t.p1) + m * ub * t.p1 * t.q1 + mb * ub * t.p2 * t.q2 +
                   mb * ub * (1.0 - t.p2) * t.q3 + mb * u * (1.0 - t.p2);
  return u * w + s / (1.0 - w);
}

inline double matched_agree_after_step(double m, double g, const macsim::TransitionParams& t) {
  return m * (1.0 - t.p1) + (1.0 - m - g) * t.p2;
}

struct OracleLink {
  Index x;
  Index y;
  double w;
  bool operator==(const OracleLink&) const = default;
};

// Linking walk on a dense weight table: take the heaviest remaining pair
// (smallest (x, y) among equals); link it if it beats the cutoff and strike
// every pair that shares a record with it; repeat until nothing can link.
inline std::vector<OracleLink> greedy_oracle(const std::vector<std::vector<double>>& w, double cutoff) {
  const Index rows = static_cast<Index>(w.size());
  const Index cols = rows ? static_cast<Index>(w[0].size()) : 0;
  std::vector<std::vector<bool>> alive(static_cast<std::size_t>(rows), std::vector<bool>(static_cast<std::size_t>(cols), true));
  std::vector<OracleLink> out;
  for (;;) {
    Index bi = -1, bj = -1;
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        if (!alive[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
        if (bi < 0 || w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >
                          w[static_cast<std::size_t>(bi)][static_cast<std::size_t>(bj)]) {
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    const double best = w[static_cast<std::size_t>(bi)][static_cast<std::size_t>(bj)];
    if (!(best > cutoff)) break;
    out.push_back({bi, bj, best});
    for (Index k = 0; k < cols; ++k) alive[static_cast<std::size_t>(bi)][static_cast<std::size_t>(k)] = false;
    for (Index k = 0; k < rows; ++k) alive[static_cast<std::size_t>(k)][static_cast<std::size_t>(bj)] = false;
  }
  return out;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("macsim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testsupport
