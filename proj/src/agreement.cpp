#include "macsim/agreement.hpp"

#include "macsim/errors.hpp"

namespace macsim {

Agreement agreement_from_code(int c) {
  switch (c) {
    case 0: return Agreement::missing;
    case 1: return Agreement::agree;
    case -1: return Agreement::disagree;
    default: throw DomainError("agreement code must be one of 1, -1, 0; got " + std::to_string(c));
  }
}

AgreementArray::AgreementArray(Index x_size, Index y_size, Index field_count, Agreement fill)
    : x_size_(x_size), y_size_(y_size), field_count_(field_count) {
  if (x_size < 0 || y_size < 0 || field_count < 0) {
    throw DomainError("AgreementArray: negative dimension");
  }
  cells_.assign(static_cast<std::size_t>(x_size * y_size * field_count), fill);
}

void AgreementBlock::validate() const {
  if (x_size() > y_size()) throw DomainError("agreement block has more X than Y records");
  if (static_cast<Index>(truth.size()) != x_size()) {
    throw DomainError("truth map size differs from X record count");
  }
  std::vector<bool> used(static_cast<std::size_t>(y_size()), false);
  for (Index t : truth) {
    if (t < 0 || t >= y_size()) throw DomainError("truth map entry outside the Y range");
    if (used[static_cast<std::size_t>(t)]) throw DomainError("truth map is not injective");
    used[static_cast<std::size_t>(t)] = true;
  }
}

AgreementBlock select_fields(const AgreementBlock& block, std::span<const Index> fields) {
  const auto nf = static_cast<Index>(fields.size());
  AgreementBlock out{AgreementArray(block.x_size(), block.y_size(), nf), block.truth};
  for (Index i = 0; i < block.x_size(); ++i) {
    for (Index k = 0; k < nf; ++k) {
      auto src = block.cells.slice(i, fields[static_cast<std::size_t>(k)]);
      auto dst = out.cells.slice(i, k);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return out;
}

}  // namespace macsim
