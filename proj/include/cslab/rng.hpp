#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cslab {

// Splittable 64-bit generator in the SplitMix64 family (Steele, Lea, Flood
// 2014). A stream is fully determined by (master_seed, stream_id): both are
// hashed into a starting state and an odd per-stream increment, so streams
// can be created on any thread in any order and still replay exactly.
//
// Gaussian variates use the basic Box-Muller transform on two 53-bit
// uniforms; the second variate of each pair is cached. No other transform is
// ever used, so output only depends on libm's log/sqrt/cos/sin.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;
  double gaussian() noexcept;

  // Child stream with a derived id; does not advance this stream.
  RandomStream split(std::uint64_t index) const;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  std::uint64_t gamma_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

// 64-bit finalizer used for seed derivation (MurmurHash3 fmix64 variant).
std::uint64_t mix64(std::uint64_t z) noexcept;

// Combines two ids into one; used to name per-trial / per-path streams.
std::uint64_t combine_ids(std::uint64_t a, std::uint64_t b) noexcept;

std::vector<double> gaussian_vector(RandomStream& stream, std::size_t len);
void fill_gaussian(RandomStream& stream, std::span<double> out);

// Discretized standard Wiener process on [0, 1] with m uniform steps.
struct WienerPath {
  std::vector<double> increments;  // W(t_{k+1}) - W(t_k), each N(0, 1/m)

  std::size_t steps() const noexcept { return increments.size(); }
  // W(t_k) for k in [0, m]; W(0) == 0.
  double at(std::size_t k) const;
  // All m+1 partial sums W(t_0..t_m).
  std::vector<double> cumulative() const;
};

WienerPath wiener_path(RandomStream& stream, std::size_t m);

}  // namespace cslab
