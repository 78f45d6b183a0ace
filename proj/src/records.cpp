#include "macsim/records.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "macsim/errors.hpp"

namespace macsim {

namespace {

constexpr std::array<std::string_view, kFieldCount> kNames = {"SA1", "MB", "BDAY", "BYEAR",
                                                              "SEX", "EYE", "COB"};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

FieldValue parse_value(std::string_view cell, std::size_t line_no) {
  if (cell.empty()) return std::nullopt;
  std::int32_t v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ConfigError("line " + std::to_string(line_no) + ": not an integer: '" + std::string(cell) + "'");
  }
  return v;
}

int width(Field f) {
  switch (f) {
    case Field::sa1: return 5;
    case Field::mb: return 7;
    case Field::cob: return 4;
    default: return 0;
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string_view field_name(Field f) { return kNames[static_cast<std::size_t>(f)]; }

Field parse_field(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (int k = 0; k < kFieldCount; ++k) {
    if (kNames[static_cast<std::size_t>(k)] == upper) return static_cast<Field>(k);
  }
  throw ConfigError("unknown field '" + std::string(name) + "'");
}

std::vector<Field> parse_field_list(std::string_view names) {
  std::vector<Field> out;
  std::string normalized(names);
  std::replace(normalized.begin(), normalized.end(), '&', ',');
  std::replace(normalized.begin(), normalized.end(), '+', ',');
  for (auto part : split(normalized, ',')) {
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front()))) part.remove_prefix(1);
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back()))) part.remove_suffix(1);
    if (!part.empty()) out.push_back(parse_field(part));
  }
  return out;
}

std::string format_value(Field f, const FieldValue& v) {
  if (!v) return {};
  std::string s = std::to_string(*v);
  const int w = width(f);
  if (*v >= 0 && static_cast<int>(s.size()) < w) s.insert(0, static_cast<std::size_t>(w) - s.size(), '0');
  return s;
}

std::vector<TruthEntry> truth_entries(const LinkFile& x) {
  std::vector<TruthEntry> out;
  for (std::size_t r = 0; r < x.records.size(); ++r) {
    for (Field f : kAllFields) {
      if (x.records[r][f] != x.originals[r][f]) out.push_back({x.records[r].recid, f, x.originals[r][f]});
    }
  }
  return out;
}

void write_person_csv(std::ostream& out, const PersonFile& file) {
  out << "RECID";
  for (auto n : kNames) out << ',' << n;
  out << '\n';
  for (const auto& rec : file) {
    out << rec.recid;
    for (Field f : kAllFields) out << ',' << format_value(f, rec[f]);
    out << '\n';
  }
}

PersonFile read_person_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("person CSV is empty");
  auto header = split(trim_cr(line), ',');
  if (header.size() != kFieldCount + 1) throw ConfigError("person CSV header must have 8 columns");
  std::array<int, kFieldCount> column{};
  for (int k = 0; k < kFieldCount; ++k) {
    Field f = parse_field(header[static_cast<std::size_t>(k) + 1]);
    column[static_cast<std::size_t>(f)] = k + 1;
  }
  PersonFile file;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto row = trim_cr(line);
    if (row.empty()) continue;
    auto cells = split(row, ',');
    if (cells.size() != kFieldCount + 1) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 8 columns");
    }
    PersonRecord rec;
    rec.recid = std::string(cells[0]);
    for (Field f : kAllFields) {
      rec[f] = parse_value(cells[static_cast<std::size_t>(column[static_cast<std::size_t>(f)])], line_no);
    }
    file.push_back(std::move(rec));
  }
  return file;
}

void write_truth_csv(std::ostream& out, const std::vector<TruthEntry>& entries) {
  out << "recid,field,original_value\n";
  for (const auto& e : entries) {
    out << e.recid << ',' << field_name(e.field) << ',' << format_value(e.field, e.original) << '\n';
  }
}

std::vector<TruthEntry> read_truth_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("truth CSV is empty");
  std::vector<TruthEntry> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto row = trim_cr(line);
    if (row.empty()) continue;
    auto cells = split(row, ',');
    if (cells.size() != 3) throw ConfigError("truth CSV line " + std::to_string(line_no) + ": expected 3 columns");
    out.push_back({std::string(cells[0]), parse_field(cells[1]), parse_value(cells[2], line_no)});
  }
  return out;
}

void save_person_csv(const std::filesystem::path& path, const PersonFile& file) {
  auto out = open_out(path);
  write_person_csv(out, file);
}

PersonFile load_person_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_person_csv(in);
}

LinkFile load_link_file(const std::filesystem::path& x_csv,
                        const std::optional<std::filesystem::path>& truth_csv) {
  LinkFile x;
  x.records = load_person_csv(x_csv);
  x.originals = x.records;
  if (truth_csv) {
    auto in = open_in(*truth_csv);
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < x.records.size(); ++r) row_of.emplace(x.records[r].recid, r);
    for (const auto& e : read_truth_csv(in)) {
      auto it = row_of.find(e.recid);
      if (it == row_of.end()) throw ConfigError("truth entry for unknown recid " + e.recid);
      x.originals[it->second][e.field] = e.original;
    }
  }
  return x;
}

void save_link_file(const std::filesystem::path& x_csv, const std::filesystem::path& truth_csv,
                    const LinkFile& x) {
  save_person_csv(x_csv, x.records);
  auto out = open_out(truth_csv);
  write_truth_csv(out, truth_entries(x));
}

}  // namespace macsim
