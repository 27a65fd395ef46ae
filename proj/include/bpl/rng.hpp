#pragma once

#include <cstdint>
#include <random>

namespace bpl {

/// Identifies one reproducible random stream: replica streams are derived
/// from the master seed by a splitmix64 hash of the stream id, so any
/// (seed, stream) pair yields the same path on every platform.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Standard-normal stream: mt19937_64 driven through the Wichura (AS 241)
/// inverse normal CDF. Both pieces are fixed by the standard / by published
/// coefficients, which keeps paths bitwise reproducible across platforms.
class NormalStream {
 public:
  explicit NormalStream(RngSpec spec)
      : eng_(splitmix64(spec.master_seed + 0x9E3779B97F4A7C15ULL * (spec.stream_id + 1))) {}

  /// uniform on (0,1), never 0 or 1
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
  }

  double gaussian();

 private:
  std::mt19937_64 eng_;
};

/// Inverse of the standard normal CDF (Wichura's PPND16, ~1e-15 accurate).
double inverse_normal_cdf(double p);

}  // namespace bpl
