#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "macsim/agreement.hpp"
#include "macsim/params.hpp"

namespace macsim {

struct FieldCounts {
  std::int64_t matched = 0;
  std::int64_t matched_agree = 0;
  std::int64_t nonmatched = 0;
  std::int64_t nonmatched_agree = 0;
  std::int64_t pairs = 0;
  std::int64_t missing = 0;
};

std::vector<FieldCounts> count_agreement(const AgreementBlock& block);

struct EstimationOptions {
  // Add-epsilon smoothing of the m and u ratios; 0 disables it.
  double smoothing = 0.0;
  // Run validate() on every field and throw ValidationError on failure.
  bool validate = true;
};

// Per field: m over matched pairs, u over non-matched pairs, g over all
// pairs, each denominator counting missing cells too. `field_names` labels
// validation errors and may be empty. Throws EstimationError when the block
// has no matched or no non-matched pair.
std::vector<FieldParams> estimate_params(const AgreementBlock& block, std::span<const std::string> field_names = {},
                                         const EstimationOptions& options = {});

// "block,field,m,u,g,w" rows, full round-trip precision.
void write_params_csv(std::ostream& out, const std::string& block_key, std::span<const std::string> field_names,
                      std::span<const FieldParams> params, bool header);

// block key -> field name -> params.
using ParamsTable = std::map<std::string, std::map<std::string, FieldParams>>;
ParamsTable read_params_csv(std::istream& in);

}  // namespace macsim
