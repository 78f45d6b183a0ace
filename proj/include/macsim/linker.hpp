#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "macsim/agreement.hpp"
#include "macsim/errors.hpp"
#include "macsim/params.hpp"

namespace macsim {

// Bounds applied to cell weights. They keep the log ratios finite when u = 0
// or 1 - m - g = 0.
struct WeightCaps {
  double max = 30.0;
  double min = -30.0;
};

// Log2 likelihood ratio of one cell:
//   agree    -> log2(m / u)
//   disagree -> log2((1 - m - g) / (1 - u - g))
//   missing  -> 0
double cell_weight(Agreement a, const FieldParams& fp, const WeightCaps& caps = {});

template <typename Scalar>
using WeightMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using WeightMatrix = WeightMatrixT<double>;

// W(i, j) = sum over fields of cell_weight(a(i, j, l), params[l]).
template <typename Scalar = double>
WeightMatrixT<Scalar> composite_weights(const AgreementArray& a, std::span<const FieldParams> params,
                                        const WeightCaps& caps = {}) {
  if (static_cast<Index>(params.size()) != a.field_count()) {
    throw DomainError("composite_weights: one FieldParams per field required");
  }
  // Lookup indexed by code + 1: disagree, missing, agree.
  std::vector<std::array<Scalar, 3>> table;
  table.reserve(params.size());
  for (const auto& fp : params) {
    table.push_back({static_cast<Scalar>(cell_weight(Agreement::disagree, fp, caps)), Scalar(0),
                     static_cast<Scalar>(cell_weight(Agreement::agree, fp, caps))});
  }
  WeightMatrixT<Scalar> w = WeightMatrixT<Scalar>::Zero(a.x_size(), a.y_size());
  for (Index i = 0; i < a.x_size(); ++i) {
    Scalar* row = w.row(i).data();
    for (Index l = 0; l < a.field_count(); ++l) {
      const auto& t = table[static_cast<std::size_t>(l)];
      auto slice = a.slice(i, l);
      for (Index j = 0; j < a.y_size(); ++j) row[j] += t[static_cast<std::size_t>(code(slice[static_cast<std::size_t>(j)]) + 1)];
    }
  }
  return w;
}

struct Link {
  Index x = 0;
  Index y = 0;
  double weight = 0.0;

  bool operator==(const Link&) const = default;
};

struct LinkSet {
  std::vector<Link> links;  // in acceptance order
  double cutoff = 0.0;

  // partners[i] = linked y index of x record i, or -1.
  std::vector<Index> partners(Index x_size) const;
  bool is_one_to_one() const;
  bool operator==(const LinkSet&) const = default;
};

namespace detail {

struct Candidate {
  double weight;
  Index x;
  Index y;
};

// Descending weight, then ascending (x, y).
inline bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

LinkSet accept_greedily(std::vector<Candidate> candidates, Index x_size, Index y_size, double cutoff);

}  // namespace detail

// Sorts all pairs by weight, largest first, and walks the list: a pair is
// linked when its weight exceeds the cutoff and neither record is linked yet.
// Equivalent to repeatedly linking the top pair and deleting every pair that
// shares a record with it. Ties go to the smaller (x, y).
template <typename Derived>
LinkSet greedy_link(const Eigen::MatrixBase<Derived>& w, double cutoff) {
  const auto& m = w.derived();
  std::vector<detail::Candidate> candidates;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = static_cast<double>(m(i, j));
      if (!std::isfinite(v)) throw DomainError("greedy_link: non-finite weight");
      if (v > cutoff) candidates.push_back({v, i, j});
    }
  }
  return detail::accept_greedily(std::move(candidates), m.rows(), m.cols(), cutoff);
}

}  // namespace macsim
