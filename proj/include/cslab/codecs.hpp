#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cslab/ppoly.hpp"

namespace cslab {

inline constexpr std::uint64_t kDefaultCapacity = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kMaterializeThreshold = std::uint64_t{1} << 16;

enum class SignalClass { kBall, kSparse, kPiecewisePoly };

std::string to_string(SignalClass cls);
SignalClass signal_class_from_string(const std::string& name);

// Serializable codec description: {class, n, k, N, Q, rho, delta, cap}.
// For piecewise polynomials rho is the amplitude bound.
struct CodecDescriptor {
  SignalClass cls = SignalClass::kBall;
  std::size_t n = 1;
  std::size_t k = 1;
  std::size_t max_degree = 0;       // N
  std::size_t max_breakpoints = 0;  // Q
  double rho = 1.0;
  double delta = 0.1;
  std::uint64_t cap = kDefaultCapacity;
  std::size_t bits = 0;             // piecewise polynomials only; 0 = calibrated

  bool operator==(const CodecDescriptor&) const = default;
};

// Per-coordinate uniform grid on B_2^n(rho): spacing delta/sqrt(n) and
// ceil(rho*sqrt(n)/delta) steps each side of zero. Codeword index is the
// mixed-radix number of the per-coordinate level digits, coordinate 0 most
// significant; digit j maps to (j - steps) * spacing.
class GridCodec {
 public:
  GridCodec(std::size_t n, double rho, double delta, std::uint64_t cap = kDefaultCapacity);

  std::size_t dim() const noexcept { return n_; }
  double rho() const noexcept { return rho_; }
  double delta() const noexcept { return delta_; }
  double spacing() const noexcept { return spacing_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t levels() const noexcept { return levels_; }
  std::uint64_t size() const noexcept { return size_; }
  double rate_bits() const noexcept { return rate_bits_; }
  double level_value(std::uint64_t digit) const noexcept {
    return (static_cast<double>(digit) - static_cast<double>(steps_)) * spacing_;
  }

  std::uint64_t encode(std::span<const double> x) const;
  std::vector<double> decode(std::uint64_t index) const;

  // Visits codewords lo..hi-1 in index order. The callback receives
  // (index, coordinates, values, first_changed) where first_changed is the
  // first position whose coordinate or value differs from the previous visit.
  template <class F>
  void for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const;

 private:
  std::size_t n_;
  double rho_;
  double delta_;
  double spacing_;
  std::uint64_t steps_;
  std::uint64_t levels_;
  std::uint64_t size_;
  double rate_bits_;
  std::vector<std::size_t> coords_;
};

// Union over all C(n, k) supports of a k-dimensional grid codec with spacing
// delta/sqrt(k). Index = support_rank * levels^k + inner, supports ranked in
// lexicographic order; lower-sparsity points occur once per support.
class SparseCodec {
 public:
  SparseCodec(std::size_t n, std::size_t k, double rho, double delta, std::uint64_t cap = kDefaultCapacity);

  std::size_t dim() const noexcept { return n_; }
  std::size_t sparsity() const noexcept { return k_; }
  double rho() const noexcept { return rho_; }
  double delta() const noexcept { return delta_; }
  double spacing() const noexcept { return spacing_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t levels() const noexcept { return levels_; }
  std::uint64_t support_count() const noexcept { return supports_; }
  std::uint64_t size() const noexcept { return size_; }
  double rate_bits() const noexcept { return rate_bits_; }
  double level_value(std::uint64_t digit) const noexcept {
    return (static_cast<double>(digit) - static_cast<double>(steps_)) * spacing_;
  }

  std::uint64_t encode(std::span<const double> x) const;
  std::vector<double> decode(std::uint64_t index) const;

  std::vector<std::size_t> support(std::uint64_t rank) const;
  std::uint64_t support_rank(std::span<const std::size_t> support) const;

  template <class F>
  void for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const;

 private:
  std::size_t n_;
  std::size_t k_;
  double rho_;
  double delta_;
  double spacing_;
  std::uint64_t steps_;
  std::uint64_t levels_;
  std::uint64_t inner_;
  std::uint64_t supports_;
  std::uint64_t size_;
  double rate_bits_;
};

// Explicit, materialized codebook. Encoding is a brute-force nearest search.
class ListCodec {
 public:
  ListCodec(std::vector<std::vector<double>> codewords, double delta);

  std::size_t dim() const noexcept { return n_; }
  double delta() const noexcept { return delta_; }
  std::uint64_t size() const noexcept { return codewords_.size(); }
  double rate_bits() const noexcept;
  const std::vector<double>& codeword(std::uint64_t index) const;

  std::uint64_t encode(std::span<const double> x) const;
  std::vector<double> decode(std::uint64_t index) const { return codeword(index); }

  template <class F>
  void for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const;

 private:
  std::size_t n_;
  double delta_;
  std::vector<std::vector<double>> codewords_;
  std::vector<std::size_t> coords_;
};

using FiniteCodec = std::variant<GridCodec, SparseCodec, ListCodec>;

std::size_t codec_dim(const FiniteCodec& codec);
std::uint64_t codec_size(const FiniteCodec& codec);
double codec_rate(const FiniteCodec& codec);
double codec_delta(const FiniteCodec& codec);
std::uint64_t encode(const FiniteCodec& codec, std::span<const double> x);
std::vector<double> decode(const FiniteCodec& codec, std::uint64_t index);
// All codewords in index order; refuses codebooks above kMaterializeThreshold
// unless a larger limit is passed.
std::vector<std::vector<double>> materialize(const FiniteCodec& codec, std::uint64_t limit = kMaterializeThreshold);

// Codes for P_N^Q(amplitude). A codeword holds Q breakpoints, each one of
// 2^b dyadic positions j/2^b (j = 1..2^b; position 1 means "unused"), and
// (N+1)(Q+1) coefficients in the per-piece orthonormal Legendre basis, each
// one of 2^b cell centres on [-amplitude, amplitude]. Every scalar gets the
// same b bits, so rate = b * (Q + (N+1)(Q+1)).
//
// When bits == 0, b is the smallest value whose design distortion
//   sqrt(Q * 2 A^2 2^-b + (N+1)(Q+1) * A^2 4^-b)
// is <= delta: the first term bounds misplaced mass around each snapped
// breakpoint, the second the coefficient rounding.
class PpolyCodec {
 public:
  PpolyCodec(std::size_t max_degree, std::size_t max_breakpoints, double amplitude, double delta,
             std::size_t bits = 0, std::uint64_t cap = kDefaultCapacity);

  std::size_t max_degree() const noexcept { return degree_; }
  std::size_t max_breakpoints() const noexcept { return breaks_; }
  double amplitude() const noexcept { return amplitude_; }
  double delta() const noexcept { return delta_; }
  std::size_t bits() const noexcept { return bits_; }
  std::uint64_t levels() const noexcept { return levels_; }
  std::size_t scalar_count() const noexcept { return breaks_ + (degree_ + 1) * (breaks_ + 1); }
  std::uint64_t size() const noexcept { return size_; }
  double rate_bits() const noexcept { return static_cast<double>(bits_ * scalar_count()); }
  double design_distortion() const noexcept { return design_distortion(bits_); }
  double design_distortion(std::size_t bits) const noexcept;

  double breakpoint_position(std::uint64_t digit) const noexcept {
    return static_cast<double>(digit + 1) / static_cast<double>(levels_);
  }
  double coefficient_value(std::uint64_t digit) const noexcept {
    return -amplitude_ + (static_cast<double>(digit) + 0.5) * (2.0 * amplitude_ / static_cast<double>(levels_));
  }

  void check_member(const PiecewisePolynomial& f) const;
  std::uint64_t encode(const PiecewisePolynomial& f) const;
  PiecewisePolynomial decode(std::uint64_t index) const;

  // Visits decoded codewords lo..hi-1 in index order.
  template <class F>
  void for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const;

 private:
  PiecewisePolynomial assemble(std::span<const std::uint64_t> digits) const;

  std::size_t degree_;
  std::size_t breaks_;
  double amplitude_;
  double delta_;
  std::size_t bits_;
  std::uint64_t levels_;
  std::uint64_t size_;
};

using AnyCodec = std::variant<GridCodec, SparseCodec, PpolyCodec>;

AnyCodec build_codec(const CodecDescriptor& desc);
double codec_rate(const AnyCodec& codec);

GridCodec build_grid_codec(std::size_t n, double rho, double delta, std::uint64_t cap = kDefaultCapacity);
SparseCodec build_sparse_codec(std::size_t n, std::size_t k, double rho, double delta,
                               std::uint64_t cap = kDefaultCapacity);
PpolyCodec build_ppoly_codec(std::size_t max_degree, std::size_t max_breakpoints, double amplitude, double delta,
                             std::size_t basis_resolution = 0, std::uint64_t cap = kDefaultCapacity);

struct RateDistortionPoint {
  double delta = 0.0;
  double rate_bits = 0.0;
  double alpha_hat = 0.0;  // rate / log2(1/delta); NaN when delta >= 1
  bool available = true;
  std::string note;
};

std::vector<RateDistortionPoint> rd_profile(const CodecDescriptor& base, std::span<const double> deltas);

// Volume-packing lower bound n*log2(1/delta) for B_2^n(1); 0 when delta >= 1.
double entropy_lower_bound(std::size_t n, double delta);

// Saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

// ---------------------------------------------------------------------------

template <class F>
void GridCodec::for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const {
  if (hi > size_) hi = size_;
  if (lo >= hi) return;
  std::vector<std::uint64_t> digit(n_);
  std::vector<double> value(n_);
  std::uint64_t rem = lo;
  for (std::size_t j = n_; j-- > 0;) {
    digit[j] = rem % levels_;
    rem /= levels_;
    value[j] = level_value(digit[j]);
  }
  std::size_t first_changed = 0;
  for (std::uint64_t idx = lo;;) {
    visit(idx, std::span<const std::size_t>(coords_), std::span<const double>(value), first_changed);
    if (++idx == hi) break;
    for (std::size_t j = n_; j-- > 0;) {
      first_changed = j;
      if (++digit[j] < levels_) {
        value[j] = level_value(digit[j]);
        break;
      }
      digit[j] = 0;
      value[j] = level_value(0);
    }
  }
}

template <class F>
void SparseCodec::for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const {
  if (hi > size_) hi = size_;
  if (lo >= hi) return;
  std::vector<std::size_t> supp = support(lo / inner_);
  std::vector<std::uint64_t> digit(k_);
  std::vector<double> value(k_);
  std::uint64_t rem = lo % inner_;
  for (std::size_t j = k_; j-- > 0;) {
    digit[j] = rem % levels_;
    rem /= levels_;
    value[j] = level_value(digit[j]);
  }
  std::size_t first_changed = 0;
  for (std::uint64_t idx = lo;;) {
    visit(idx, std::span<const std::size_t>(supp), std::span<const double>(value), first_changed);
    if (++idx == hi) break;
    bool carried_out = true;
    for (std::size_t j = k_; j-- > 0;) {
      first_changed = j;
      if (++digit[j] < levels_) {
        value[j] = level_value(digit[j]);
        carried_out = false;
        break;
      }
      digit[j] = 0;
      value[j] = level_value(0);
    }
    if (carried_out) {
      // Next lexicographic combination.
      std::size_t i = k_;
      while (i-- > 0) {
        if (supp[i] < n_ - k_ + i) break;
      }
      ++supp[i];
      for (std::size_t j = i + 1; j < k_; ++j) supp[j] = supp[j - 1] + 1;
      first_changed = 0;
    }
  }
}

template <class F>
void ListCodec::for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const {
  if (hi > size()) hi = size();
  for (std::uint64_t idx = lo; idx < hi; ++idx)
    visit(idx, std::span<const std::size_t>(coords_), std::span<const double>(codewords_[idx]), std::size_t{0});
}

template <class F>
void PpolyCodec::for_each(std::uint64_t lo, std::uint64_t hi, F&& visit) const {
  if (hi > size_) hi = size_;
  const std::size_t scalars = scalar_count();
  std::vector<std::uint64_t> digits(scalars);
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    std::uint64_t rem = idx;
    for (std::size_t j = scalars; j-- > 0;) {
      digits[j] = rem % levels_;
      rem /= levels_;
    }
    visit(idx, assemble(digits));
  }
}

}  // namespace cslab
