#pragma once

// Binary dump of an operator for cross-checking elsewhere.
//
// Layout (little-endian):
//   bytes  0..7   magic "CLRMAT01"
//   bytes  8..15  uint64 side
//   bytes 16..19  uint32 builder tag (0 custom, 1 spectral-free, 2 levy-free, 3 levy-magnetic)
//   bytes 20..31  zero
//   then side*side entries, row-major, each a float32 real part followed by a float32 imaginary part.

#include <Eigen/Core>
#include <complex>
#include <filesystem>

#include "clrlab/discrete.hpp"

namespace clrlab {

struct MatrixDump {
  BuilderTag tag = BuilderTag::Custom;
  Eigen::MatrixXcf matrix;
};

void write_matrix_dump(const std::filesystem::path& path, const HermitianOperator& op);
MatrixDump read_matrix_dump(const std::filesystem::path& path);

}  // namespace clrlab
