#include "macsim/blocking.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

#include "macsim/errors.hpp"

namespace macsim {

std::vector<Field> BlockingSpec::resolved_linking_fields() const {
  if (!linking_fields.empty()) return linking_fields;
  std::vector<Field> out;
  for (Field f : kAllFields) {
    if (std::find(blocking_fields.begin(), blocking_fields.end(), f) == blocking_fields.end()) out.push_back(f);
  }
  return out;
}

void BlockingSpec::validate() const {
  if (blocking_fields.empty()) throw ConfigError("no blocking fields");
  if (allow_overlap) return;
  for (Field f : linking_fields) {
    if (std::find(blocking_fields.begin(), blocking_fields.end(), f) != blocking_fields.end()) {
      throw ConfigError("field " + std::string(field_name(f)) + " is both a blocking and a linking field");
    }
  }
}

const Block* BlockSet::find(const std::string& key) const {
  auto it = std::lower_bound(blocks.begin(), blocks.end(), key,
                             [](const Block& b, const std::string& k) { return b.key < k; });
  return it != blocks.end() && it->key == key ? &*it : nullptr;
}

std::string block_key(const PersonRecord& rec, std::span<const Field> fields) {
  std::string key;
  for (Field f : fields) {
    if (!rec[f]) return {};
    if (!key.empty()) key += '_';
    key += format_value(f, rec[f]);
  }
  return key;
}

BlockSet partition(const LinkFile& x, const PersonFile& y, const BlockingSpec& spec) {
  spec.validate();
  std::map<std::string, Block> by_key;
  BlockSet out;
  const auto& x_keys = spec.use_truth_values ? x.originals : x.records;
  for (std::size_t r = 0; r < x_keys.size(); ++r) {
    auto key = block_key(x_keys[r], spec.blocking_fields);
    if (key.empty()) {
      out.residual.x_rows.push_back(static_cast<Index>(r));
      continue;
    }
    auto& b = by_key[key];
    b.key = key;
    b.x_rows.push_back(static_cast<Index>(r));
  }
  for (std::size_t r = 0; r < y.size(); ++r) {
    auto key = block_key(y[r], spec.blocking_fields);
    if (key.empty()) {
      out.residual.y_rows.push_back(static_cast<Index>(r));
      continue;
    }
    auto& b = by_key[key];
    b.key = key;
    b.y_rows.push_back(static_cast<Index>(r));
  }
  out.blocks.reserve(by_key.size());
  for (auto& [key, b] : by_key) out.blocks.push_back(std::move(b));
  return out;
}

AgreementBlock build_agreement(std::span<const PersonRecord> x_block, std::span<const PersonRecord> y_block,
                               std::span<const Field> linking_fields) {
  if (x_block.empty() || y_block.empty()) throw BlockingError("build_agreement: empty block");
  const auto nx = static_cast<Index>(x_block.size());
  const auto ny = static_cast<Index>(y_block.size());
  const auto nl = static_cast<Index>(linking_fields.size());

  std::unordered_map<std::string_view, Index> y_of;
  y_of.reserve(y_block.size());
  for (Index j = 0; j < ny; ++j) y_of.emplace(y_block[static_cast<std::size_t>(j)].recid, j);

  AgreementBlock out{AgreementArray(nx, ny, nl), std::vector<Index>(static_cast<std::size_t>(nx))};
  for (Index i = 0; i < nx; ++i) {
    const auto& xr = x_block[static_cast<std::size_t>(i)];
    auto it = y_of.find(xr.recid);
    if (it == y_of.end()) throw BlockingError("X record " + xr.recid + " has no partner in its block");
    out.truth[static_cast<std::size_t>(i)] = it->second;
    for (Index l = 0; l < nl; ++l) {
      const Field f = linking_fields[static_cast<std::size_t>(l)];
      const auto& xv = xr[f];
      auto slice = out.cells.slice(i, l);
      if (!xv) continue;  // already missing
      for (Index j = 0; j < ny; ++j) {
        const auto& yv = y_block[static_cast<std::size_t>(j)][f];
        if (yv) slice[static_cast<std::size_t>(j)] = *yv == *xv ? Agreement::agree : Agreement::disagree;
      }
    }
  }
  out.validate();
  return out;
}

AssembledBlock assemble_block(const LinkFile& x, const PersonFile& y, const Block& block,
                              std::span<const Field> linking_fields, bool require_truth) {
  AssembledBlock out;
  out.y_rows = block.y_rows;
  std::unordered_map<std::string_view, Index> in_block;
  for (Index r : block.y_rows) in_block.emplace(y[static_cast<std::size_t>(r)].recid, r);

  for (Index r : block.x_rows) {
    const auto& recid = x.records[static_cast<std::size_t>(r)].recid;
    if (in_block.count(recid)) {
      out.x_rows.push_back(r);
    } else if (require_truth) {
      throw BlockingError("X record " + recid + " has no partner in block " + block.key);
    } else {
      out.dropped_x.push_back(r);
    }
  }
  std::vector<PersonRecord> xs;
  std::vector<PersonRecord> ys;
  xs.reserve(out.x_rows.size());
  ys.reserve(out.y_rows.size());
  for (Index r : out.x_rows) xs.push_back(x.records[static_cast<std::size_t>(r)]);
  for (Index r : out.y_rows) ys.push_back(y[static_cast<std::size_t>(r)]);
  out.block = build_agreement(xs, ys, linking_fields);
  return out;
}

void write_block_manifest(std::ostream& out, const BlockSet& blocks) {
  out << "block,x_size,y_size\n";
  for (const auto& b : blocks.blocks) out << b.key << ',' << b.x_rows.size() << ',' << b.y_rows.size() << '\n';
  if (!blocks.residual.x_rows.empty() || !blocks.residual.y_rows.empty()) {
    out << blocks.residual.key << ',' << blocks.residual.x_rows.size() << ',' << blocks.residual.y_rows.size()
        << '\n';
  }
}

}  // namespace macsim
