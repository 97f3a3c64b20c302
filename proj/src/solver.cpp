#include "cslab/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "cslab/error.hpp"

namespace cslab {

namespace {

struct Best {
  double residual2 = std::numeric_limits<double>::infinity();
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

  void offer(double r2, std::uint64_t idx) noexcept {
    if (r2 < residual2 || (r2 == residual2 && idx < index)) {
      residual2 = r2;
      index = idx;
    }
  }
};

// Runs scan(lo, hi) -> Best over `partitions` contiguous ranges and folds the
// partial results by (residual, index).
template <class Scan>
Best partitioned_scan(std::uint64_t size, ScanOptions options, Scan&& scan) {
  const std::uint64_t parts = std::max<std::uint64_t>(1, std::min<std::uint64_t>(options.partitions, size));
  std::vector<Best> partial(parts);
  auto bounds = [&](std::uint64_t p) { return size / parts * p + std::min(p, size % parts); };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(options.threads, parts));
  if (workers == 1) {
    for (std::uint64_t p = 0; p < parts; ++p) partial[p] = scan(bounds(p), bounds(p + 1));
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t p = w; p < parts; p += workers) partial[p] = scan(bounds(p), bounds(p + 1));
      });
  }
  Best best;
  for (const Best& b : partial) best.offer(b.residual2, b.index);
  return best;
}

// Prefix accumulators acc[j] = sum_{l<j} a_{coord_l} * value_l, so a visit
// that only changes trailing positions reuses the shared prefix. The order of
// additions is the same as a from-scratch sum.
template <class Codec>
Best scan_finite(const Codec& codec, const MeasurementEnsemble& ensemble, std::span<const double> y,
                 std::uint64_t lo, std::uint64_t hi) {
  const std::size_t d = ensemble.rows();
  std::vector<double> acc;
  Best best;
  codec.for_each(lo, hi,
                 [&](std::uint64_t idx, std::span<const std::size_t> coords, std::span<const double> values,
                     std::size_t first_changed) {
                   const std::size_t terms = coords.size();
                   if (acc.size() != (terms + 1) * d) {
                     acc.assign((terms + 1) * d, 0.0);
                     first_changed = 0;
                   }
                   for (std::size_t j = first_changed; j < terms; ++j) {
                     const double* prev = acc.data() + j * d;
                     double* next = acc.data() + (j + 1) * d;
                     const auto col = ensemble.column(coords[j]);
                     const double v = values[j];
                     for (std::size_t i = 0; i < d; ++i) next[i] = prev[i] + col[i] * v;
                   }
                   const double* ac = acc.data() + terms * d;
                   double r2 = 0.0;
                   for (std::size_t i = 0; i < d; ++i) {
                     const double diff = y[i] - ac[i];
                     r2 += diff * diff;
                   }
                   best.offer(r2, idx);
                 });
  return best;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

double residual_norm(std::span<const double> y, const MeasurementEnsemble& ensemble, std::span<const double> c) {
  require(c.size() == ensemble.cols() && y.size() == ensemble.rows(), ErrorCode::kDimension,
          "residual_norm: dimension mismatch");
  const std::size_t d = ensemble.rows();
  std::vector<double> acc(d, 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto col = ensemble.column(j);
    for (std::size_t i = 0; i < d; ++i) acc[i] = acc[i] + col[i] * c[j];
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) r2 += (y[i] - acc[i]) * (y[i] - acc[i]);
  return std::sqrt(r2);
}

RecoveryResult csp_recover(std::span<const double> y, const MeasurementEnsemble& ensemble, const FiniteCodec& codec,
                           std::optional<std::span<const double>> truth, ScanOptions options) {
  const auto start = std::chrono::steady_clock::now();
  require(y.size() == ensemble.rows(), ErrorCode::kDimension, "csp_recover: measurement length does not match d");
  require(codec_dim(codec) == ensemble.cols(), ErrorCode::kDimension,
          "csp_recover: codec dimension does not match ensemble columns");
  if (truth) require(truth->size() == ensemble.cols(), ErrorCode::kDimension, "csp_recover: truth length mismatch");
  const std::uint64_t size = codec_size(codec);

  const Best best = std::visit(
      [&](const auto& c) {
        return partitioned_scan(size, options,
                                [&](std::uint64_t lo, std::uint64_t hi) { return scan_finite(c, ensemble, y, lo, hi); });
      },
      codec);

  RecoveryResult result;
  result.chosen_index = best.index;
  result.reconstruction = decode(codec, best.index);
  result.residual = std::sqrt(best.residual2);
  if (truth) result.error_l2 = distance(result.reconstruction, *truth);
  result.candidates_scanned = size;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

AnalogRecoveryResult csp_recover_analog(std::span<const double> y, const WienerEnsemble& ensemble,
                                        const PpolyCodec& codec, const PiecewisePolynomial* truth,
                                        ScanOptions options) {
  const auto start = std::chrono::steady_clock::now();
  require(ensemble.rows() >= 1, ErrorCode::kParameter, "csp_recover_analog: d must be >= 1");
  require(y.size() == ensemble.rows(), ErrorCode::kDimension, "csp_recover_analog: measurement length does not match d");
  // Codeword breakpoints are dyadic with b bits; they sit on the m-step grid
  // only when 2^b divides m.
  const std::size_t m = ensemble.steps();
  require(codec.max_breakpoints() == 0 || m % codec.levels() == 0, ErrorCode::kGridMismatch,
          "csp_recover_analog: codec breakpoint grid is not a subgrid of the Wiener discretization");

  const std::uint64_t size = codec.size();
  const std::size_t d = ensemble.rows();
  const Best best = partitioned_scan(size, options, [&](std::uint64_t lo, std::uint64_t hi) {
    Best local;
    std::vector<double> ac(d);
    codec.for_each(lo, hi, [&](std::uint64_t idx, const PiecewisePolynomial& c) {
      measure_analog_into(ensemble, c, ac);
      double r2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) r2 += (y[i] - ac[i]) * (y[i] - ac[i]);
      local.offer(r2, idx);
    });
    return local;
  });

  AnalogRecoveryResult result;
  result.chosen_index = best.index;
  result.reconstruction = codec.decode(best.index);
  result.residual = std::sqrt(best.residual2);
  if (truth) result.error_l2 = l2_distance(result.reconstruction, *truth);
  result.candidates_scanned = size;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cslab
