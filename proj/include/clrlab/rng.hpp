#pragma once

// Counter-based random numbers: Philox4x32-10. A stream is addressed by (root seed, stream
// index); the n-th block of a stream is a pure function of those two numbers and n, so paths
// can be generated in any order on any number of threads.

#include <array>
#include <cstdint>

namespace clrlab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// SplitMix64 finalizer; mixes a root seed into a Philox key.
std::uint64_t splitmix64(std::uint64_t x);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t root_seed, std::uint64_t stream_index);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();

  std::uint64_t root_seed() const { return root_; }
  std::uint64_t stream_index() const { return stream_; }

 private:
  void refill();

  std::uint64_t root_, stream_;
  PhiloxKey key_{};
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace clrlab
