#include "nemflow/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "nemflow/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

namespace nemflow {

namespace {

constexpr char kMagic[4] = {'N', 'E', 'M', 'D'};
constexpr std::uint16_t kVersion = 1;

const std::array<std::uint64_t, 256>& crc_table() {
  static const std::array<std::uint64_t, 256> table = [] {
    // reflected ECMA-182 polynomial
    constexpr std::uint64_t poly = 0xC96C5795D7870F42ull;
    std::array<std::uint64_t, 256> t{};
    for (std::uint64_t b = 0; b < 256; ++b) {
      std::uint64_t r = b;
      for (int k = 0; k < 8; ++k) r = (r >> 1) ^ (poly & (~((r & 1) - 1)));
      t[b] = r;
    }
    return t;
  }();
  return table;
}

template <class T>
void put(std::vector<char>& buf, const T& v) {
  const std::size_t at = buf.size();
  buf.resize(at + sizeof(T));
  std::memcpy(buf.data() + at, &v, sizeof(T));
}

template <class T>
T get(const std::vector<char>& buf, std::size_t& at) {
  if (at + sizeof(T) > buf.size()) throw config_error("checkpoint: truncated file");
  T v;
  std::memcpy(&v, buf.data() + at, sizeof(T));
  at += sizeof(T);
  return v;
}

void put_field(std::vector<char>& buf, const SpectralField& f) {
  for (const std::complex<double>& c : f.c) {
    put(buf, c.real());
    put(buf, c.imag());
  }
}

void get_field(const std::vector<char>& buf, std::size_t& at, SpectralField& f) {
  for (std::complex<double>& c : f.c) {
    const double re = get<double>(buf, at);
    const double im = get<double>(buf, at);
    c = {re, im};
  }
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("checkpoint: cannot open '" + path + "'");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return buf;
}

// Header fields shared by read_checkpoint and checkpoint_info; leaves `at` at
// the start of the payload.
CheckpointInfo parse_header(const std::vector<char>& buf, std::size_t& at) {
  if (buf.size() < 4 + 2 + 4 + 8 * 5 + 1 + 8) throw config_error("checkpoint: truncated file");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw config_error("checkpoint: bad magic (not a checkpoint file)");
  }
  at = 4;
  CheckpointInfo info;
  info.version = get<std::uint16_t>(buf, at);
  if (info.version != kVersion) {
    throw config_error("checkpoint: unsupported version " + std::to_string(info.version));
  }
  info.n = static_cast<int>(get<std::uint32_t>(buf, at));
  info.length = get<double>(buf, at);
  info.t = get<double>(buf, at);
  info.params.nu = get<double>(buf, at);
  info.params.lambda = get<double>(buf, at);
  info.params.gamma = get<double>(buf, at);
  const std::uint8_t mode = get<std::uint8_t>(buf, at);
  if (mode > 1) throw config_error("checkpoint: bad director mode byte");
  info.mode = mode == 0 ? DirectorMode::angle : DirectorMode::vec;
  if (info.n < 8 || info.n % 2 != 0 || info.n > 4096) {
    throw config_error("checkpoint: implausible grid size");
  }
  if (!(info.length > 0.0)) throw config_error("checkpoint: nonpositive box length");
  return info;
}

// Structural validation (size derived from the header) precedes the CRC, so
// malformed files surface as config_error and only genuine payload corruption
// as numeric_error.
void check_size(const std::vector<char>& buf, const CheckpointInfo& info, std::size_t at) {
  const std::size_t fields = info.mode == DirectorMode::angle ? 3 : 4;
  const std::size_t modes = std::size_t(info.n) * std::size_t(info.n);
  const std::size_t expected = at + fields * modes * 16 + 8;
  if (buf.size() != expected) throw config_error("checkpoint: truncated file");
}

void check_crc(const std::vector<char>& buf) {
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - 8, 8);
  const std::uint64_t actual = crc64(buf.data(), buf.size() - 8);
  if (stored != actual) throw numeric_error("checkpoint: CRC mismatch (corrupt file)");
}

}  // namespace

std::uint64_t crc64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto& table = crc_table();
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t crc = ~seed;
  for (std::size_t i = 0; i < len; ++i) {
    crc = (crc >> 8) ^ table[(crc ^ p[i]) & 0xFF];
  }
  return ~crc;
}

void write_checkpoint(const FlowState& s, const std::string& path) {
  std::vector<char> buf;
  const std::size_t modes = s.grid->size();
  const std::size_t fields = s.mode == DirectorMode::angle ? 3 : 4;
  buf.reserve(64 + fields * modes * 16);

  buf.insert(buf.end(), kMagic, kMagic + 4);
  put(buf, kVersion);
  put(buf, static_cast<std::uint32_t>(s.grid->n));
  put(buf, s.grid->length);
  put(buf, s.t);
  put(buf, s.params.nu);
  put(buf, s.params.lambda);
  put(buf, s.params.gamma);
  put(buf, static_cast<std::uint8_t>(s.mode == DirectorMode::angle ? 0 : 1));
  put_field(buf, s.u1);
  put_field(buf, s.u2);
  if (s.mode == DirectorMode::angle) {
    put_field(buf, s.theta);
  } else {
    put_field(buf, s.d1);
    put_field(buf, s.d2);
  }
  put(buf, crc64(buf.data(), buf.size()));

  // write-temp-then-rename keeps readers from ever seeing a torn file
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("checkpoint: cannot write '" + tmp + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw config_error("checkpoint: short write to '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

FlowState read_checkpoint(const std::string& path) {
  const std::vector<char> buf = slurp(path);
  std::size_t at = 0;
  const CheckpointInfo info = parse_header(buf, at);
  check_size(buf, info, at);
  check_crc(buf);

  FlowState s;
  s.t = info.t;
  s.mode = info.mode;
  s.params = info.params;
  s.grid = make_grid(info.n, info.length);
  s.u1 = SpectralField(s.grid);
  s.u2 = SpectralField(s.grid);
  get_field(buf, at, s.u1);
  get_field(buf, at, s.u2);
  if (s.mode == DirectorMode::angle) {
    s.theta = SpectralField(s.grid);
    get_field(buf, at, s.theta);
  } else {
    s.d1 = SpectralField(s.grid);
    s.d2 = SpectralField(s.grid);
    get_field(buf, at, s.d1);
    get_field(buf, at, s.d2);
  }
  if (at + 8 != buf.size()) throw config_error("checkpoint: trailing bytes");
  return s;
}

CheckpointInfo checkpoint_info(const std::string& path) {
  const std::vector<char> buf = slurp(path);
  std::size_t at = 0;
  CheckpointInfo info = parse_header(buf, at);
  check_size(buf, info, at);
  check_crc(buf);
  std::memcpy(&info.payload_crc, buf.data() + buf.size() - 8, 8);
  return info;
}

}  // namespace nemflow
