#pragma once

#include <cmath>
#include <cstdint>

// Counter-based stream RNG following the Philox4x64-10 construction.
// A stream is addressed by (seed, stream_id) and draws are a pure function of
// that address plus a draw counter, so replicas can run on any worker in any
// order and still produce identical values.

namespace lpp {

namespace detail {
inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}
}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key0_(seed), key1_(stream_id) {}

  std::uint64_t next_u64() {
    if (lane_ == 4) {
      fill_block();
      lane_ = 0;
    }
    return block_[lane_++];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double exponential(double rate) { return exp_from_uniform(uniform01(), rate); }

  static double exp_from_uniform(double u, double rate) {
    return -std::log1p(-u) / rate;
  }

 private:
  void fill_block() {
    std::uint64_t c0 = counter_++, c1 = 0, c2 = 0, c3 = 0;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0, lo0, hi1, lo1;
      detail::mulhilo64(kMul0, c0, hi0, lo0);
      detail::mulhilo64(kMul1, c2, hi1, lo1);
      const std::uint64_t n0 = hi1 ^ c1 ^ k0;
      const std::uint64_t n1 = lo1;
      const std::uint64_t n2 = hi0 ^ c3 ^ k1;
      const std::uint64_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    block_[0] = c0;
    block_[1] = c1;
    block_[2] = c2;
    block_[3] = c3;
  }

  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

  std::uint64_t key0_, key1_;
  std::uint64_t counter_ = 0;
  std::uint64_t block_[4] = {};
  int lane_ = 4;
};

// SplitMix64 finalizer; used for seed namespacing.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return mix64(master ^ mix64(tag ^ 0x517CC1B727220A95ull));
}

// Stream slots consumed per replica: bulk field, I boundary, J boundary, spare.
inline constexpr std::uint64_t kStreamsPerReplica = 4;

inline RngStream replica_stream(std::uint64_t derived_seed, std::int64_t replica,
                                std::uint64_t slot) {
  return RngStream(derived_seed,
                   static_cast<std::uint64_t>(replica) * kStreamsPerReplica + slot);
}

}  // namespace lpp
