#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace macsim {

using Index = Eigen::Index;

// Comparison outcome for one field of one record pair. The numeric codes are
// the canonical ones: agree 1, disagree -1, missing 0.
enum class Agreement : std::int8_t { missing = 0, agree = 1, disagree = -1 };

constexpr int code(Agreement a) noexcept { return static_cast<int>(a); }
Agreement agreement_from_code(int c);

// Dense ternary array over (x record, y record, field).
//
// Cells are stored x-major, then field, then y, so the (i, l) slice that one
// chain step touches is contiguous. Serialization uses (i, j, l) order and
// converts explicitly.
class AgreementArray {
 public:
  AgreementArray() = default;
  AgreementArray(Index x_size, Index y_size, Index field_count,
                 Agreement fill = Agreement::missing);

  Index x_size() const noexcept { return x_size_; }
  Index y_size() const noexcept { return y_size_; }
  Index field_count() const noexcept { return field_count_; }
  Index size() const noexcept { return static_cast<Index>(cells_.size()); }

  Agreement operator()(Index i, Index j, Index l) const {
    return cells_[offset(i, l) + static_cast<std::size_t>(j)];
  }
  void set(Index i, Index j, Index l, Agreement v) {
    cells_[offset(i, l) + static_cast<std::size_t>(j)] = v;
  }

  std::span<Agreement> slice(Index i, Index l) {
    return {cells_.data() + offset(i, l), static_cast<std::size_t>(y_size_)};
  }
  std::span<const Agreement> slice(Index i, Index l) const {
    return {cells_.data() + offset(i, l), static_cast<std::size_t>(y_size_)};
  }

  std::span<const Agreement> cells() const noexcept { return cells_; }
  std::span<Agreement> cells() noexcept { return cells_; }

  bool same_shape(const AgreementArray& other) const noexcept {
    return x_size_ == other.x_size_ && y_size_ == other.y_size_ &&
           field_count_ == other.field_count_;
  }

  bool operator==(const AgreementArray&) const = default;

 private:
  std::size_t offset(Index i, Index l) const noexcept {
    return static_cast<std::size_t>((i * field_count_ + l) * y_size_);
  }

  Index x_size_ = 0;
  Index y_size_ = 0;
  Index field_count_ = 0;
  std::vector<Agreement> cells_;
};

// Agreement array plus the designated true partner of every X record.
struct AgreementBlock {
  AgreementArray cells;
  std::vector<Index> truth;  // truth[i] = y index matched to x record i

  Index x_size() const noexcept { return cells.x_size(); }
  Index y_size() const noexcept { return cells.y_size(); }
  Index field_count() const noexcept { return cells.field_count(); }

  Agreement matched(Index i, Index l) const { return cells(i, truth[static_cast<std::size_t>(i)], l); }

  // Throws DomainError unless x_size <= y_size and truth is an injective
  // map into [0, y_size).
  void validate() const;
};

// Copy of `block` keeping only the listed fields, in the given order.
AgreementBlock select_fields(const AgreementBlock& block, std::span<const Index> fields);

}  // namespace macsim
