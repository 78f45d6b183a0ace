#include "macsim/sample_io.hpp"

#include <array>
#include <cstring>
#include <limits>

#include "macsim/errors.hpp"

namespace macsim {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'A', 'C', 'S'};

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) p[k] = static_cast<std::uint8_t>(v >> (8 * k));
}
void put_u64(std::uint8_t* p, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) p[k] = static_cast<std::uint8_t>(v >> (8 * k));
}
std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(p[k]) << (8 * k);
  return v;
}
std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  return v;
}

std::uint8_t bits_of(Agreement a) {
  switch (a) {
    case Agreement::agree: return 0b01;
    case Agreement::disagree: return 0b10;
    case Agreement::missing: return 0b00;
  }
  return 0;
}

std::uint32_t checked_u32(std::int64_t v, const char* what) {
  if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError(std::string(what) + " does not fit the sample header");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::size_t frame_bytes(Index cell_count) { return static_cast<std::size_t>((cell_count * 2 + 7) / 8); }

std::size_t SampleFileHeader::frame_bytes() const {
  return macsim::frame_bytes(static_cast<Index>(x_size) * y_size * field_count);
}

void pack_frame(const AgreementArray& a, std::span<std::uint8_t> out) {
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const Index nx = a.x_size(), ny = a.y_size(), nl = a.field_count();
  for (Index i = 0; i < nx; ++i) {
    for (Index l = 0; l < nl; ++l) {
      auto slice = a.slice(i, l);
      for (Index j = 0; j < ny; ++j) {
        const auto n = static_cast<std::size_t>((i * ny + j) * nl + l);
        out[n / 4] |= static_cast<std::uint8_t>(bits_of(slice[static_cast<std::size_t>(j)]) << (2 * (n % 4)));
      }
    }
  }
}

AgreementArray unpack_frame(std::span<const std::uint8_t> bytes, const SampleFileHeader& h, std::int64_t frame) {
  const Index nx = h.x_size, ny = h.y_size, nl = h.field_count;
  AgreementArray a(nx, ny, nl);
  for (Index i = 0; i < nx; ++i) {
    for (Index j = 0; j < ny; ++j) {
      for (Index l = 0; l < nl; ++l) {
        const auto n = static_cast<std::size_t>((i * ny + j) * nl + l);
        switch ((bytes[n / 4] >> (2 * (n % 4))) & 0b11) {
          case 0b00: break;
          case 0b01: a.set(i, j, l, Agreement::agree); break;
          case 0b10: a.set(i, j, l, Agreement::disagree); break;
          default: throw CorruptionError(frame, "invalid cell code 11 at cell " + std::to_string(n));
        }
      }
    }
  }
  return a;
}

SampleWriter::SampleWriter(const std::filesystem::path& path, const SampleFileHeader& header)
    : out_(path, std::ios::binary | std::ios::trunc), header_(header), buffer_(header.frame_bytes()) {
  if (!out_) throw ConfigError("cannot write " + path.string());
  std::array<std::uint8_t, kSampleHeaderBytes> h{};
  std::memcpy(h.data(), kMagic.data(), kMagic.size());
  h[4] = kSampleFormatVersion;
  const std::array<std::uint32_t, 6> dims = {header.x_size,  header.y_size,  header.field_count,
                                             header.samples, header.burn_in, header.thin};
  for (std::size_t k = 0; k < dims.size(); ++k) put_u32(h.data() + 5 + 4 * k, dims[k]);
  put_u64(h.data() + 29, header.seed);
  out_.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
}

void SampleWriter::write(const AgreementArray& frame) {
  if (frame.x_size() != header_.x_size || frame.y_size() != header_.y_size ||
      frame.field_count() != header_.field_count) {
    throw FormatError("frame shape differs from the sample header");
  }
  if (frames_ > static_cast<std::int64_t>(header_.samples)) throw FormatError("more frames than the header declares");
  pack_frame(frame, buffer_);
  out_.write(reinterpret_cast<const char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  ++frames_;
}

void SampleWriter::close() {
  if (frames_ != static_cast<std::int64_t>(header_.samples) + 1) {
    throw FormatError("sample file closed after " + std::to_string(frames_) + " of " +
                      std::to_string(header_.samples + 1) + " frames");
  }
  out_.close();
  if (!out_) throw ConfigError("write failed");
}

SampleReader::SampleReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
  if (!in_) throw ConfigError("cannot open " + path.string());
  std::array<std::uint8_t, kSampleHeaderBytes> h{};
  in_.read(reinterpret_cast<char*>(h.data()), static_cast<std::streamsize>(h.size()));
  if (in_.gcount() != static_cast<std::streamsize>(h.size())) throw FormatError("sample file header truncated");
  if (std::memcmp(h.data(), kMagic.data(), kMagic.size()) != 0) throw FormatError("not a sample file (bad magic)");
  if (h[4] != kSampleFormatVersion) {
    throw FormatError("unsupported sample format version " + std::to_string(h[4]));
  }
  header_.x_size = get_u32(h.data() + 5);
  header_.y_size = get_u32(h.data() + 9);
  header_.field_count = get_u32(h.data() + 13);
  header_.samples = get_u32(h.data() + 17);
  header_.burn_in = get_u32(h.data() + 21);
  header_.thin = get_u32(h.data() + 25);
  header_.seed = get_u64(h.data() + 29);
  if (header_.burn_in > 0 && header_.burn_in >= header_.samples) throw FormatError("burn-in exceeds sample count");
  buffer_.resize(header_.frame_bytes());
}

std::optional<AgreementArray> SampleReader::next() {
  if (frame_ > static_cast<std::int64_t>(header_.samples)) return std::nullopt;
  in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  if (in_.gcount() != static_cast<std::streamsize>(buffer_.size())) {
    throw CorruptionError(frame_, "truncated after " + std::to_string(in_.gcount()) + " of " +
                                      std::to_string(buffer_.size()) + " bytes");
  }
  auto a = unpack_frame(buffer_, header_, frame_);
  ++frame_;
  if (frame_ > static_cast<std::int64_t>(header_.samples) && in_.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after the last frame");
  }
  return a;
}

SampleFileHeader header_for(const SampleStream& stream) {
  SampleFileHeader h;
  h.x_size = checked_u32(stream.initial.x_size(), "x_size");
  h.y_size = checked_u32(stream.initial.y_size(), "y_size");
  h.field_count = checked_u32(stream.initial.field_count(), "field_count");
  h.samples = checked_u32(std::ssize(stream.retained), "sample count");
  h.burn_in = checked_u32(stream.burn_in, "burn-in");
  h.thin = checked_u32(stream.thin, "thin");
  h.seed = stream.seed;
  return h;
}

void save_samples(const SampleStream& stream, const std::filesystem::path& path) {
  SampleWriter writer(path, header_for(stream));
  writer.write(stream.initial);
  for (const auto& a : stream.retained) writer.write(a);
  writer.close();
}

SampleStream load_samples(const std::filesystem::path& path) {
  SampleReader reader(path);
  const auto& h = reader.header();
  SampleStream stream;
  stream.burn_in = h.burn_in;
  stream.thin = h.thin;
  stream.seed = h.seed;
  stream.initial = *reader.next();
  stream.retained.reserve(h.samples);
  while (auto a = reader.next()) stream.retained.push_back(std::move(*a));
  return stream;
}

}  // namespace macsim
