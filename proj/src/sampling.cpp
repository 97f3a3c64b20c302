#include "cslab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cslab/error.hpp"

namespace cslab {

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Uniform on (0, 1): redraws the single value 0.
double open_uniform(RandomStream& stream) {
  double u = stream.uniform();
  while (u == 0.0) u = stream.uniform();
  return u;
}

}  // namespace

std::vector<double> sample_ball(std::size_t n, double rho, RandomStream& stream) {
  require(n >= 1, ErrorCode::kParameter, "sample_ball: n must be >= 1");
  require(rho >= 0.0, ErrorCode::kParameter, "sample_ball: rho must be >= 0");
  std::vector<double> x = gaussian_vector(stream, n);
  double len = norm2(x);
  while (len == 0.0) {
    x = gaussian_vector(stream, n);
    len = norm2(x);
  }
  const double radius = rho * std::pow(stream.uniform(), 1.0 / static_cast<double>(n));
  for (double& v : x) v *= radius / len;
  // Rounding can leave the product a hair above rho.
  const double out = norm2(x);
  if (out > rho && out > 0.0)
    for (double& v : x) v *= rho / out;
  return x;
}

std::vector<std::size_t> sample_support(std::size_t n, std::size_t k, RandomStream& stream) {
  require(k >= 1 && k <= n, ErrorCode::kParameter, "sample_support: need 1 <= k <= n");
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t j = 0; j < k; ++j) std::swap(all[j], all[j + stream.uniform_index(n - j)]);
  std::vector<std::size_t> out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sample_sparse(std::size_t n, std::size_t k, double rho, RandomStream& stream) {
  const auto supp = sample_support(n, k, stream);
  const auto inner = sample_ball(k, rho, stream);
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) x[supp[j]] = inner[j];
  return x;
}

PiecewisePolynomial sample_ppoly(std::size_t max_degree, std::size_t max_breakpoints, double amplitude,
                                 RandomStream& stream) {
  require(amplitude > 0.0, ErrorCode::kParameter, "sample_ppoly: amplitude must be positive");
  std::vector<double> bps;
  while (bps.size() < max_breakpoints) {
    bps.clear();
    for (std::size_t q = 0; q < max_breakpoints; ++q) bps.push_back(open_uniform(stream));
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  }
  const double scale = amplitude / static_cast<double>(max_degree + 1);
  std::vector<std::vector<double>> coeffs(max_breakpoints + 1, std::vector<double>(max_degree + 1));
  for (auto& piece : coeffs)
    for (double& c : piece) c = scale * (2.0 * stream.uniform() - 1.0);
  return PiecewisePolynomial(std::move(bps), std::move(coeffs));
}

std::vector<double> sample_member(const FiniteCodec& codec, RandomStream& stream) {
  if (const auto* g = std::get_if<GridCodec>(&codec)) return sample_ball(g->dim(), g->rho(), stream);
  if (const auto* s = std::get_if<SparseCodec>(&codec))
    return sample_sparse(s->dim(), s->sparsity(), s->rho(), stream);
  return sample_codeword(codec, stream);
}

std::vector<double> sample_codeword(const FiniteCodec& codec, RandomStream& stream) {
  return decode(codec, stream.uniform_index(codec_size(codec)));
}

std::vector<double> sample_voronoi_corner(const FiniteCodec& codec, RandomStream& stream) {
  const std::uint64_t index = stream.uniform_index(codec_size(codec));
  std::vector<double> x = decode(codec, index);
  double half = 0.0;
  double rho = 0.0;
  std::vector<std::size_t> active;
  if (const auto* g = std::get_if<GridCodec>(&codec)) {
    half = 0.5 * g->spacing();
    rho = g->rho();
    active.resize(g->dim());
    std::iota(active.begin(), active.end(), std::size_t{0});
  } else if (const auto* s = std::get_if<SparseCodec>(&codec)) {
    half = 0.5 * s->spacing();
    rho = s->rho();
    // Stay on one support so the result is still k-sparse.
    const std::uint64_t inner = s->size() / s->support_count();
    active = s->support(index / inner);
  } else {
    return x;
  }
  for (std::size_t j : active) x[j] += (stream.next_u64() >> 63) != 0 ? half : -half;
  const double len = norm2(x);
  if (len > rho)
    for (double& v : x) v *= rho / len;
  return x;
}

DistortionAudit audit_distortion(const FiniteCodec& codec, std::size_t samples, RandomStream& stream) {
  DistortionAudit out;
  out.samples = samples;
  double total = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto x = sample_member(codec, stream);
    const auto c = decode(codec, encode(codec, x));
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
    const double e = std::sqrt(s);
    out.max_distortion = std::max(out.max_distortion, e);
    total += e;
  }
  if (samples > 0) out.mean_distortion = total / static_cast<double>(samples);
  return out;
}

DistortionAudit audit_distortion(const PpolyCodec& codec, std::size_t samples, RandomStream& stream) {
  DistortionAudit out;
  out.samples = samples;
  double total = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto f = sample_ppoly(codec.max_degree(), codec.max_breakpoints(), codec.amplitude(), stream);
    const double e = l2_distance(f, codec.decode(codec.encode(f)));
    out.max_distortion = std::max(out.max_distortion, e);
    total += e;
  }
  if (samples > 0) out.mean_distortion = total / static_cast<double>(samples);
  return out;
}

}  // namespace cslab
