#include "splitgrow/census_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#include "splitgrow/errors.hpp"

namespace splitgrow {

namespace {

template <class U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <class U>
bool get_le(std::istream& in, U& value) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) return false;
  value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return true;
}

}  // namespace

void write_census_binary(std::ostream& out, const Census& c) {
  const auto K = static_cast<std::uint32_t>(c.max_degree());
  put_le<std::uint64_t>(out, c.t);
  put_le<std::uint32_t>(out, K);
  for (std::uint32_t k = 1; k <= K; ++k) put_le<std::uint64_t>(out, c.n(static_cast<int>(k)));
}

bool read_census_binary(std::istream& in, Census& c) {
  std::uint64_t t = 0;
  if (!get_le(in, t)) {
    if (in.gcount() == 0) return false;
    throw Error("truncated census record header");
  }
  std::uint32_t K = 0;
  if (!get_le(in, K)) throw Error("truncated census record header");
  c.t = t;
  c.counts.assign(static_cast<std::size_t>(K) + 1, 0);
  for (std::uint32_t k = 1; k <= K; ++k) {
    if (!get_le(in, c.counts[k])) throw Error("truncated census record body");
  }
  c.total_weight = 0.0;
  return true;
}

void write_census_csv_rows(std::ostream& out, const Census& c, const std::string& prefix) {
  const int K = c.max_degree();
  for (int k = 1; k <= K; ++k) out << prefix << c.t << ',' << k << ',' << c.n(k) << '\n';
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

}  // namespace splitgrow
