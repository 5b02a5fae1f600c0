#include "specex/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "specex/errors.hpp"

namespace specex {
namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path.string());

  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("IoError", "read failed for " + path.string());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();

  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw Error("MalformedWav", "not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;

  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const char* id = bytes.data() + pos;
    std::uint32_t size = read_u32(p + pos + 4);
    pos += 8;
    if (size > n - pos)
      throw Error("MalformedWav", "chunk overruns file: " + path.string());

    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw Error("MalformedWav", "fmt chunk too small");
      format = read_u16(p + pos);
      channels = read_u16(p + pos + 2);
      sample_rate = read_u32(p + pos + 4);
      bits = read_u16(p + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw Error("MalformedWav", "data chunk before fmt");
      if (format != kFormatPcm || bits != 16 || channels != 1)
        throw Error("UnsupportedFormat",
                    "need PCM16 mono, got format=" + std::to_string(format) +
                        " bits=" + std::to_string(bits) +
                        " channels=" + std::to_string(channels));
      if (sample_rate == 0) throw Error("MalformedWav", "sample rate 0");
      if (size % 2 != 0) throw Error("MalformedWav", "odd data chunk size");

      AudioBuffer buf;
      buf.sample_rate = static_cast<int>(sample_rate);
      buf.samples.resize(size / 2);
      for (std::size_t i = 0; i < buf.samples.size(); ++i) {
        auto v = static_cast<std::int16_t>(read_u16(p + pos + 2 * i));
        buf.samples[i] = v / 32768.0;
      }
      return buf;
    }
    pos += size + (size % 2);  // RIFF chunks are word-aligned
  }
  throw Error("MalformedWav", "no data chunk in " + path.string());
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf) {
  const std::uint32_t data_size = static_cast<std::uint32_t>(buf.samples.size() * 2);

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  put_u32(out, 36 + data_size);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);  // byte rate
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits per sample
  out.append("data");
  put_u32(out, data_size);

  for (double s : buf.samples) {
    long q = std::lround(s * 32768.0);
    if (q > 32767) q = 32767;
    if (q < -32768) q = -32768;
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("IoError", "cannot open " + path.string() + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("IoError", "write failed for " + path.string());
}

}  // namespace specex
