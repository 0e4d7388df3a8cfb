#include "scuw/csv_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scuw {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

void write_complex_csv(const std::filesystem::path& path, std::span<const Complex> values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "index,real,imag\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    out << k << ',' << values[k].real() << ',' << values[k].imag() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ComplexVector read_complex_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ComplexVector out;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    double idx = 0.0, re = 0.0, im = 0.0;
    if (fields.size() != 3 || !parse_double(fields[0], idx)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      fail(path, line_no, "expected 'index,real,imag'");
    }
    header_allowed = false;
    if (!parse_double(fields[1], re) || !parse_double(fields[2], im)) {
      fail(path, line_no, "real/imag fields are not numbers");
    }
    if (idx != static_cast<double>(out.size())) {
      fail(path, line_no, "index " + trim(fields[0]) + " out of sequence (expected " +
                              std::to_string(out.size()) + ")");
    }
    out.emplace_back(re, im);
  }
  if (out.empty()) throw std::runtime_error(path.string() + ": no samples");
  return out;
}

ChannelRealization read_channel_csv(const std::filesystem::path& path) {
  return ChannelRealization{read_complex_csv(path)};
}

void write_channel_csv(const std::filesystem::path& path, const ChannelRealization& h) {
  write_complex_csv(path, h.taps);
}

UniqueWord read_unique_word_csv(const std::filesystem::path& path, std::size_t m_h) {
  return make_unique_word(read_complex_csv(path), m_h);
}

void write_iq_raw(const std::filesystem::path& path, std::span<const Complex> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& v : values) {
    for (double d : {v.real(), v.imag()}) {
      const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(d));
      char buf[8];
      std::memcpy(buf, &bits, 8);
      out.write(buf, 8);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ComplexVector read_iq_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 16 != 0) {
    throw std::runtime_error(path.string() + ": size is not a multiple of 16 bytes");
  }
  ComplexVector out(bytes.size() / 16);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double parts[2];
    for (int p = 0; p < 2; ++p) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, bytes.data() + 16 * k + 8 * p, 8);
      parts[p] = std::bit_cast<double>(to_little(bits));
    }
    out[k] = Complex(parts[0], parts[1]);
  }
  return out;
}

}  // namespace scuw
