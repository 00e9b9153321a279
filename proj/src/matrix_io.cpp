#include "clrlab/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace clrlab {
namespace {

constexpr std::array<char, 8> kMagic = {'C', 'L', 'R', 'M', 'A', 'T', '0', '1'};

template <typename U>
void put_le(std::ostream& os, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) os.put(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <typename U>
U get_le(std::istream& is) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    const int c = is.get();
    if (c == EOF) throw std::runtime_error("matrix dump: truncated file");
    value |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return value;
}

}  // namespace

void write_matrix_dump(const std::filesystem::path& path, const HermitianOperator& op) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("matrix dump: cannot open " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(op.side()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(op.tag));
  for (int i = 0; i < 12; ++i) os.put('\0');
  for (Eigen::Index r = 0; r < op.side(); ++r)
    for (Eigen::Index c = 0; c < op.side(); ++c) {
      const std::complex<double> z = op.matrix(r, c);
      put_le<std::uint32_t>(os, std::bit_cast<std::uint32_t>(static_cast<float>(z.real())));
      put_le<std::uint32_t>(os, std::bit_cast<std::uint32_t>(static_cast<float>(z.imag())));
    }
  if (!os) throw std::runtime_error("matrix dump: write failed for " + path.string());
}

MatrixDump read_matrix_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("matrix dump: cannot open " + path.string());
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw std::runtime_error("matrix dump: bad magic in " + path.string());
  const auto side = static_cast<Eigen::Index>(get_le<std::uint64_t>(is));
  MatrixDump out;
  out.tag = static_cast<BuilderTag>(get_le<std::uint32_t>(is));
  for (int i = 0; i < 12; ++i) get_le<std::uint8_t>(is);
  out.matrix.resize(side, side);
  for (Eigen::Index r = 0; r < side; ++r)
    for (Eigen::Index c = 0; c < side; ++c) {
      const float re = std::bit_cast<float>(get_le<std::uint32_t>(is));
      const float im = std::bit_cast<float>(get_le<std::uint32_t>(is));
      out.matrix(r, c) = {re, im};
    }
  return out;
}

}  // namespace clrlab
