#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace macsim {

// Analysis fields of a person record, in file column order after RECID.
enum class Field : int { sa1 = 0, mb, bday, byear, sex, eye, cob };
inline constexpr int kFieldCount = 7;
inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::sa1, Field::mb, Field::bday, Field::byear, Field::sex, Field::eye, Field::cob};

std::string_view field_name(Field f);
// Case-insensitive; throws ConfigError for unknown names.
Field parse_field(std::string_view name);
// Comma, '&' or '+' separated list, e.g. "SA1&SEX".
std::vector<Field> parse_field_list(std::string_view names);

using FieldValue = std::optional<std::int32_t>;

struct PersonRecord {
  std::string recid;
  std::array<FieldValue, kFieldCount> values{};

  FieldValue& operator[](Field f) { return values[static_cast<std::size_t>(f)]; }
  const FieldValue& operator[](Field f) const { return values[static_cast<std::size_t>(f)]; }

  bool operator==(const PersonRecord&) const = default;
};

using PersonFile = std::vector<PersonRecord>;

// File X as observed, plus the pre-error value of every field of every record.
struct LinkFile {
  PersonFile records;
  PersonFile originals;

  std::size_t size() const noexcept { return records.size(); }
};

struct TruthEntry {
  std::string recid;
  Field field;
  FieldValue original;
};

// One entry per (record, field) whose observed value differs from the original.
std::vector<TruthEntry> truth_entries(const LinkFile& x);

// Fixed-width text for a value: SA1 5 digits, MB 7, COB 4; others plain.
std::string format_value(Field f, const FieldValue& v);

// Header "RECID,SA1,MB,BDAY,BYEAR,SEX,EYE,COB"; missing is an empty cell.
void write_person_csv(std::ostream& out, const PersonFile& file);
PersonFile read_person_csv(std::istream& in);
// Header "recid,field,original_value".
void write_truth_csv(std::ostream& out, const std::vector<TruthEntry>& entries);
std::vector<TruthEntry> read_truth_csv(std::istream& in);

void save_person_csv(const std::filesystem::path& path, const PersonFile& file);
PersonFile load_person_csv(const std::filesystem::path& path);

// Reassembles X from its observed CSV and optional truth sidecar.
LinkFile load_link_file(const std::filesystem::path& x_csv,
                        const std::optional<std::filesystem::path>& truth_csv);
void save_link_file(const std::filesystem::path& x_csv, const std::filesystem::path& truth_csv,
                    const LinkFile& x);

}  // namespace macsim
