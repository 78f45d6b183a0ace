#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "macsim/agreement.hpp"
#include "macsim/records.hpp"

namespace macsim {

struct BlockingSpec {
  std::vector<Field> blocking_fields{Field::sa1};
  // Block X records on their pre-error values, so every true match shares a block.
  bool use_truth_values = true;
  // Empty means every analysis field that is not a blocking field.
  std::vector<Field> linking_fields;
  bool allow_overlap = false;

  std::vector<Field> resolved_linking_fields() const;
  // Throws ConfigError for an empty key or a blocking/linking overlap that
  // was not allowed.
  void validate() const;
};

inline constexpr const char* kResidualKey = "unblocked";

struct Block {
  std::string key;
  std::vector<Index> x_rows;  // rows of file X
  std::vector<Index> y_rows;  // rows of file Y
};

// Blocks in ascending key order. Records with a missing key value go to the
// residual group, which is never simulated.
struct BlockSet {
  std::vector<Block> blocks;
  Block residual{kResidualKey, {}, {}};

  const Block* find(const std::string& key) const;
};

// Key text for one record: formatted key values joined by '_'; empty when a
// value is missing.
std::string block_key(const PersonRecord& rec, std::span<const Field> fields);

BlockSet partition(const LinkFile& x, const PersonFile& y, const BlockingSpec& spec);

// Cell (i, j, l) agrees when both values are present and equal, disagrees
// when both are present and differ, and is missing otherwise. The truth map
// pairs equal RECIDs; throws BlockingError when an X RECID has no Y partner.
AgreementBlock build_agreement(std::span<const PersonRecord> x_block, std::span<const PersonRecord> y_block,
                               std::span<const Field> linking_fields);

struct AssembledBlock {
  AgreementBlock block;
  std::vector<Index> x_rows;     // X file rows, in block order
  std::vector<Index> y_rows;     // Y file rows, in block order
  std::vector<Index> dropped_x;  // X rows without an in-block partner
};

// Gathers one block's records and builds its agreement array. With
// require_truth the lack of a partner is an error; otherwise such X records
// are dropped and listed.
AssembledBlock assemble_block(const LinkFile& x, const PersonFile& y, const Block& block,
                              std::span<const Field> linking_fields, bool require_truth);

// "block,x_size,y_size" per block, then the residual group if non-empty.
void write_block_manifest(std::ostream& out, const BlockSet& blocks);

}  // namespace macsim
