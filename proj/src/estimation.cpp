#include "macsim/estimation.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "macsim/errors.hpp"
#include "macsim/format.hpp"

namespace macsim {

std::vector<FieldCounts> count_agreement(const AgreementBlock& block) {
  const Index nx = block.x_size();
  const Index ny = block.y_size();
  std::vector<FieldCounts> counts(static_cast<std::size_t>(block.field_count()));
  for (Index l = 0; l < block.field_count(); ++l) {
    auto& c = counts[static_cast<std::size_t>(l)];
    for (Index i = 0; i < nx; ++i) {
      const Index t = block.truth[static_cast<std::size_t>(i)];
      auto slice = block.cells.slice(i, l);
      for (Index j = 0; j < ny; ++j) {
        const Agreement a = slice[static_cast<std::size_t>(j)];
        if (a == Agreement::missing) ++c.missing;
        if (j == t) {
          ++c.matched;
          if (a == Agreement::agree) ++c.matched_agree;
        } else {
          ++c.nonmatched;
          if (a == Agreement::agree) ++c.nonmatched_agree;
        }
      }
    }
    c.pairs = nx * ny;
  }
  return counts;
}

std::vector<FieldParams> estimate_params(const AgreementBlock& block, std::span<const std::string> field_names,
                                         const EstimationOptions& options) {
  if (block.x_size() < 1) throw EstimationError("block has no matched pairs");
  if (block.y_size() < 2) throw EstimationError("block has no non-matched pairs");
  const double eps = options.smoothing;
  std::vector<FieldParams> out;
  const auto counts = count_agreement(block);
  for (std::size_t l = 0; l < counts.size(); ++l) {
    const auto& c = counts[l];
    const double m = (static_cast<double>(c.matched_agree) + eps) / (static_cast<double>(c.matched) + 2 * eps);
    const double u =
        (static_cast<double>(c.nonmatched_agree) + eps) / (static_cast<double>(c.nonmatched) + 2 * eps);
    const double g = static_cast<double>(c.missing) / static_cast<double>(c.pairs);
    out.push_back(FieldParams::make(m, u, g));
    if (options.validate) {
      validate(out.back(), l < field_names.size() ? std::string_view(field_names[l]) : std::string_view{});
    }
  }
  return out;
}

void write_params_csv(std::ostream& out, const std::string& block_key, std::span<const std::string> field_names,
                      std::span<const FieldParams> params, bool header) {
  if (header) out << "block,field,m,u,g,w\n";
  for (std::size_t l = 0; l < params.size(); ++l) {
    const auto& p = params[l];
    out << block_key << ',' << field_names[l] << ',' << fmt_double(p.m) << ',' << fmt_double(p.u) << ','
        << fmt_double(p.g) << ',' << fmt_double(p.w) << '\n';
  }
}

ParamsTable read_params_csv(std::istream& in) {
  ParamsTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("params CSV is empty");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string key, field, m, u, g, w;
    if (!std::getline(ss, key, ',') || !std::getline(ss, field, ',') || !std::getline(ss, m, ',') ||
        !std::getline(ss, u, ',') || !std::getline(ss, g, ',')) {
      throw ConfigError("params CSV line " + std::to_string(line_no) + ": expected block,field,m,u,g[,w]");
    }
    table[key][field] = FieldParams::make(parse_double(m), parse_double(u), parse_double(g));
  }
  return table;
}

}  // namespace macsim
