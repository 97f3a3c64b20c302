#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cslab/ppoly.hpp"
#include "cslab/rng.hpp"

namespace cslab {

// d x n matrix with i.i.d. N(0,1) entries, drawn in row-major order from a
// fresh stream. A column-major copy is kept for the solver's column sums.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble(std::size_t d, std::size_t n, std::vector<double> row_major, std::uint64_t master_seed = 0,
                      std::uint64_t stream_id = 0);

  std::size_t rows() const noexcept { return d_; }
  std::size_t cols() const noexcept { return n_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return row_major_[i * n_ + j]; }
  std::span<const double> row_major() const noexcept { return row_major_; }
  std::span<const double> column(std::size_t j) const noexcept { return {col_major_.data() + j * d_, d_}; }

 private:
  std::size_t d_;
  std::size_t n_;
  std::vector<double> row_major_;
  std::vector<double> col_major_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

MeasurementEnsemble sample_ensemble(std::size_t d, std::size_t n, RandomStream stream);
MeasurementEnsemble sample_ensemble(std::size_t d, std::size_t n, std::uint64_t master_seed, std::uint64_t stream_id);

std::vector<double> measure(const MeasurementEnsemble& ensemble, std::span<const double> x);

enum class NoiseKind { kNone, kBounded, kGaussian };
enum class BoundedShape { kWorstAligned, kRandomDirection };

std::string to_string(NoiseKind kind);
std::string to_string(BoundedShape shape);

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double level = 0.0;  // zeta for bounded noise, sigma for Gaussian noise
  BoundedShape shape = BoundedShape::kRandomDirection;

  static NoiseModel none() { return {}; }
  static NoiseModel bounded(double zeta, BoundedShape shape) { return {NoiseKind::kBounded, zeta, shape}; }
  static NoiseModel gaussian(double sigma) { return {NoiseKind::kGaussian, sigma, BoundedShape::kRandomDirection}; }

  void validate() const;
};

// Adds noise to y. Bounded worst-aligned noise needs `direction` (it is
// normalized here); a zero direction falls back to the first unit vector.
std::vector<double> apply_noise(std::span<const double> y, const NoiseModel& model, RandomStream& stream,
                                std::optional<std::span<const double>> direction = std::nullopt);

inline constexpr std::size_t kDefaultWienerSteps = 4096;

// d independent Wiener paths on a shared m-step grid. Path i is drawn from
// the stream split(i) of the ensemble's stream.
class WienerEnsemble {
 public:
  WienerEnsemble(std::vector<WienerPath> paths, std::uint64_t master_seed = 0, std::uint64_t stream_id = 0);

  std::size_t rows() const noexcept { return paths_.size(); }
  std::size_t steps() const noexcept { return steps_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  const WienerPath& path(std::size_t i) const { return paths_.at(i); }
  // W_i(t_k), k in [0, m].
  std::span<const double> cumulative(std::size_t i) const noexcept { return {cumulative_.data() + i * (steps_ + 1), steps_ + 1}; }

 private:
  std::vector<WienerPath> paths_;
  std::size_t steps_;
  std::vector<double> cumulative_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

WienerEnsemble sample_wiener_ensemble(std::size_t d, std::size_t m, RandomStream stream);
WienerEnsemble sample_wiener_ensemble(std::size_t d, std::size_t m, std::uint64_t master_seed, std::uint64_t stream_id);

// Ito sums y_i = sum_k f(s_k) (W_i(t_{k+1}) - W_i(t_k)) with tag point s_k the
// cell midpoint. Functions that are piecewise constant with breakpoints on
// the grid use W_i differences directly; both routes are exact for them.
std::vector<double> measure_analog(const WienerEnsemble& ensemble, const PiecewisePolynomial& f);
void measure_analog_into(const WienerEnsemble& ensemble, const PiecewisePolynomial& f, std::span<double> out);

// Same sum for an arbitrary integrand sampled at the cell midpoints.
std::vector<double> measure_analog_samples(const WienerEnsemble& ensemble, std::span<const double> midpoint_values);

// True when f is piecewise constant with every breakpoint a multiple of 1/m.
bool grid_aligned_constant(const PiecewisePolynomial& f, std::size_t m);

}  // namespace cslab
