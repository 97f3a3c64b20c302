#include "cslab/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "cslab/error.hpp"

namespace cslab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix_gamma(std::uint64_t z) noexcept {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  z = (z ^ (z >> 33)) | 1ULL;
  // Increments with too few bit transitions produce visibly correlated
  // output; SplittableRandom applies the same fix.
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xAAAAAAAAAAAAAAAAULL;
  return z;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t combine_ids(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a + kGolden * (mix64(b) | 1ULL));
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  const std::uint64_t key = mix64(master_seed + kGolden) ^ mix64(stream_id * kGolden + 0x632BE59BD9B4E019ULL);
  state_ = mix64(key);
  gamma_ = mix_gamma(key + kGolden);
}

std::uint64_t RandomStream::next_u64() noexcept {
  state_ += gamma_;
  return mix64(state_);
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t RandomStream::uniform_index(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection.
  u128 m = static_cast<u128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::gaussian() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

RandomStream RandomStream::split(std::uint64_t index) const {
  return RandomStream(master_seed_, combine_ids(stream_id_, index));
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RandomStream(master_seed, stream_id);
}

std::vector<double> gaussian_vector(RandomStream& stream, std::size_t len) {
  require(len > 0, ErrorCode::kEmptyRequest, "gaussian_vector: len must be >= 1");
  std::vector<double> out(len);
  fill_gaussian(stream, out);
  return out;
}

void fill_gaussian(RandomStream& stream, std::span<double> out) {
  for (double& v : out) v = stream.gaussian();
}

double WienerPath::at(std::size_t k) const {
  require(k <= increments.size(), ErrorCode::kIndexRange, "WienerPath::at: k exceeds step count");
  double w = 0.0;
  for (std::size_t i = 0; i < k; ++i) w += increments[i];
  return w;
}

std::vector<double> WienerPath::cumulative() const {
  std::vector<double> w(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) w[i + 1] = w[i] + increments[i];
  return w;
}

WienerPath wiener_path(RandomStream& stream, std::size_t m) {
  require(m > 0, ErrorCode::kEmptyRequest, "wiener_path: m must be >= 1");
  WienerPath path;
  path.increments.resize(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (double& inc : path.increments) inc = scale * stream.gaussian();
  return path;
}

}  // namespace cslab
