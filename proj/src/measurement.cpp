#include "cslab/measurement.hpp"

#include <cmath>

#include "cslab/error.hpp"

namespace cslab {

MeasurementEnsemble::MeasurementEnsemble(std::size_t d, std::size_t n, std::vector<double> row_major,
                                         std::uint64_t master_seed, std::uint64_t stream_id)
    : d_(d), n_(n), row_major_(std::move(row_major)), master_seed_(master_seed), stream_id_(stream_id) {
  require(d >= 1, ErrorCode::kParameter, "measurement ensemble: d must be >= 1");
  require(n >= 1, ErrorCode::kParameter, "measurement ensemble: n must be >= 1");
  require(row_major_.size() == d * n, ErrorCode::kDimension, "measurement ensemble: entry count is not d*n");
  col_major_.resize(d * n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) col_major_[j * d + i] = row_major_[i * n + j];
}

MeasurementEnsemble sample_ensemble(std::size_t d, std::size_t n, RandomStream stream) {
  require(d >= 1, ErrorCode::kParameter, "sample_ensemble: d must be >= 1");
  require(n >= 1, ErrorCode::kParameter, "sample_ensemble: n must be >= 1");
  const std::uint64_t seed = stream.master_seed();
  const std::uint64_t id = stream.stream_id();
  return MeasurementEnsemble(d, n, gaussian_vector(stream, d * n), seed, id);
}

MeasurementEnsemble sample_ensemble(std::size_t d, std::size_t n, std::uint64_t master_seed, std::uint64_t stream_id) {
  return sample_ensemble(d, n, derive_stream(master_seed, stream_id));
}

std::vector<double> measure(const MeasurementEnsemble& ensemble, std::span<const double> x) {
  require(x.size() == ensemble.cols(), ErrorCode::kDimension, "measure: signal length does not match ensemble");
  std::vector<double> y(ensemble.rows(), 0.0);
  const auto a = ensemble.row_major();
  const std::size_t n = ensemble.cols();
  for (std::size_t i = 0; i < y.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a[i * n + j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone: return "none";
    case NoiseKind::kBounded: return "bounded";
    case NoiseKind::kGaussian: return "gaussian";
  }
  return "unknown";
}

std::string to_string(BoundedShape shape) {
  return shape == BoundedShape::kWorstAligned ? "worst_aligned" : "random_direction";
}

void NoiseModel::validate() const {
  require(std::isfinite(level) && level >= 0.0, ErrorCode::kParameter, "noise model: level must be finite and >= 0");
}

std::vector<double> apply_noise(std::span<const double> y, const NoiseModel& model, RandomStream& stream,
                                std::optional<std::span<const double>> direction) {
  model.validate();
  std::vector<double> out(y.begin(), y.end());
  if (model.kind == NoiseKind::kNone || model.level == 0.0) {
    if (model.kind == NoiseKind::kBounded && model.shape == BoundedShape::kWorstAligned)
      require(direction.has_value(), ErrorCode::kParameter, "apply_noise: worst_aligned noise needs a direction");
    return out;
  }
  if (model.kind == NoiseKind::kGaussian) {
    for (double& v : out) v += model.level * stream.gaussian();
    return out;
  }
  std::vector<double> u(y.size(), 0.0);
  if (model.shape == BoundedShape::kWorstAligned) {
    require(direction.has_value(), ErrorCode::kParameter, "apply_noise: worst_aligned noise needs a direction");
    require(direction->size() == y.size(), ErrorCode::kDimension, "apply_noise: direction length mismatch");
    u.assign(direction->begin(), direction->end());
  } else {
    fill_gaussian(stream, u);
  }
  double norm = 0.0;
  for (double v : u) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0 || !std::isfinite(norm)) {
    std::fill(u.begin(), u.end(), 0.0);
    if (!u.empty()) u[0] = 1.0;
    norm = 1.0;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += model.level * (u[i] / norm);
  return out;
}

WienerEnsemble::WienerEnsemble(std::vector<WienerPath> paths, std::uint64_t master_seed, std::uint64_t stream_id)
    : paths_(std::move(paths)), master_seed_(master_seed), stream_id_(stream_id) {
  require(!paths_.empty(), ErrorCode::kParameter, "Wiener ensemble: d must be >= 1");
  steps_ = paths_.front().steps();
  require(steps_ >= 1, ErrorCode::kParameter, "Wiener ensemble: m must be >= 1");
  cumulative_.reserve(paths_.size() * (steps_ + 1));
  for (const auto& p : paths_) {
    require(p.steps() == steps_, ErrorCode::kGridMismatch, "Wiener ensemble: paths have different step counts");
    const auto w = p.cumulative();
    cumulative_.insert(cumulative_.end(), w.begin(), w.end());
  }
}

WienerEnsemble sample_wiener_ensemble(std::size_t d, std::size_t m, RandomStream stream) {
  require(d >= 1, ErrorCode::kParameter, "sample_wiener_ensemble: d must be >= 1");
  std::vector<WienerPath> paths;
  paths.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto child = stream.split(i);
    paths.push_back(wiener_path(child, m));
  }
  return WienerEnsemble(std::move(paths), stream.master_seed(), stream.stream_id());
}

WienerEnsemble sample_wiener_ensemble(std::size_t d, std::size_t m, std::uint64_t master_seed,
                                      std::uint64_t stream_id) {
  return sample_wiener_ensemble(d, m, derive_stream(master_seed, stream_id));
}

bool grid_aligned_constant(const PiecewisePolynomial& f, std::size_t m) {
  for (std::size_t p = 0; p < f.piece_count(); ++p) {
    const auto c = f.coefficients(p);
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] != 0.0) return false;
  }
  const double scale = static_cast<double>(m);
  for (double b : f.breakpoints()) {
    const double k = b * scale;
    if (k != std::floor(k)) return false;
  }
  return true;
}

void measure_analog_into(const WienerEnsemble& ensemble, const PiecewisePolynomial& f, std::span<double> out) {
  require(out.size() == ensemble.rows(), ErrorCode::kDimension, "measure_analog: output length mismatch");
  const std::size_t m = ensemble.steps();
  if (grid_aligned_constant(f, m)) {
    std::vector<std::size_t> ends;
    ends.reserve(f.piece_count());
    for (double b : f.breakpoints()) ends.push_back(static_cast<std::size_t>(b * static_cast<double>(m)));
    ends.push_back(m);
    for (std::size_t i = 0; i < ensemble.rows(); ++i) {
      const auto w = ensemble.cumulative(i);
      double acc = 0.0;
      std::size_t start = 0;
      for (std::size_t p = 0; p < ends.size(); ++p) {
        acc += f.coefficients(p)[0] * (w[ends[p]] - w[start]);
        start = ends[p];
      }
      out[i] = acc;
    }
    return;
  }
  std::vector<double> values(m);
  for (std::size_t k = 0; k < m; ++k) values[k] = f((static_cast<double>(k) + 0.5) / static_cast<double>(m));
  for (std::size_t i = 0; i < ensemble.rows(); ++i) {
    const auto& inc = ensemble.path(i).increments;
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += values[k] * inc[k];
    out[i] = acc;
  }
}

std::vector<double> measure_analog(const WienerEnsemble& ensemble, const PiecewisePolynomial& f) {
  std::vector<double> y(ensemble.rows());
  measure_analog_into(ensemble, f, y);
  return y;
}

std::vector<double> measure_analog_samples(const WienerEnsemble& ensemble, std::span<const double> midpoint_values) {
  require(midpoint_values.size() == ensemble.steps(), ErrorCode::kGridMismatch,
          "measure_analog_samples: sample count must equal the ensemble's step count");
  std::vector<double> y(ensemble.rows(), 0.0);
  for (std::size_t i = 0; i < ensemble.rows(); ++i) {
    const auto& inc = ensemble.path(i).increments;
    double acc = 0.0;
    for (std::size_t k = 0; k < inc.size(); ++k) acc += midpoint_values[k] * inc[k];
    y[i] = acc;
  }
  return y;
}

}  // namespace cslab
