#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <vector>

#include "macsim/agreement.hpp"
#include "macsim/kernel.hpp"

namespace macsim {

// Sample file layout, all integers little-endian:
//
//   "MACS"          4 bytes
//   version         1 byte (kSampleFormatVersion)
//   x_size, y_size, field_count, S, burn_in, thin    6 x uint32
//   seed            uint64
//   S + 1 frames    A*(0) first
//
// A frame holds the cells in (i, j, l) row-major order, 2 bits each
// (00 missing, 01 agree, 10 disagree). Cell n sits in byte n / 4 at bit
// offset 2 * (n % 4). Each frame is zero-padded to a whole byte.
inline constexpr std::uint8_t kSampleFormatVersion = 1;
inline constexpr std::size_t kSampleHeaderBytes = 4 + 1 + 6 * 4 + 8;

struct SampleFileHeader {
  std::uint32_t x_size = 0;
  std::uint32_t y_size = 0;
  std::uint32_t field_count = 0;
  std::uint32_t samples = 0;
  std::uint32_t burn_in = 0;
  std::uint32_t thin = 0;
  std::uint64_t seed = 0;

  std::size_t frame_bytes() const;
  bool operator==(const SampleFileHeader&) const = default;
};

std::size_t frame_bytes(Index cell_count);
void pack_frame(const AgreementArray& a, std::span<std::uint8_t> out);
// Throws CorruptionError(frame) on the unused code 11.
AgreementArray unpack_frame(std::span<const std::uint8_t> bytes, const SampleFileHeader& h, std::int64_t frame);

// Writes the header on construction and one frame per write(); close()
// checks that exactly S + 1 frames were written.
class SampleWriter {
 public:
  SampleWriter(const std::filesystem::path& path, const SampleFileHeader& header);
  void write(const AgreementArray& frame);
  void close();

 private:
  std::ofstream out_;
  SampleFileHeader header_;
  std::vector<std::uint8_t> buffer_;
  std::int64_t frames_ = 0;
};

// Reads frames one at a time. Throws FormatError on a bad magic, version or
// header, CorruptionError when a frame is cut short.
class SampleReader {
 public:
  explicit SampleReader(const std::filesystem::path& path);
  const SampleFileHeader& header() const noexcept { return header_; }
  // Next frame, starting with A*(0); nullopt after the last one.
  std::optional<AgreementArray> next();

 private:
  std::ifstream in_;
  SampleFileHeader header_;
  std::vector<std::uint8_t> buffer_;
  std::int64_t frame_ = 0;
};

SampleFileHeader header_for(const SampleStream& stream);
void save_samples(const SampleStream& stream, const std::filesystem::path& path);
SampleStream load_samples(const std::filesystem::path& path);

}  // namespace macsim
