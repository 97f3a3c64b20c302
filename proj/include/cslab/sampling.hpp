#pragma once

#include <cstddef>
#include <vector>

#include "cslab/codecs.hpp"
#include "cslab/ppoly.hpp"
#include "cslab/rng.hpp"

namespace cslab {

// Uniform on B_2^n(rho): a normalized Gaussian direction times rho * U^(1/n).
std::vector<double> sample_ball(std::size_t n, double rho, RandomStream& stream);

// Uniform k-subset of [0, n) in increasing order.
std::vector<std::size_t> sample_support(std::size_t n, std::size_t k, RandomStream& stream);

// Uniform support, then the ball sampler on its k coordinates.
std::vector<double> sample_sparse(std::size_t n, std::size_t k, double rho, RandomStream& stream);

// Q sorted uniform breakpoints and Legendre coefficients uniform on
// [-A/(N+1), A/(N+1)], so |f| <= A everywhere.
PiecewisePolynomial sample_ppoly(std::size_t max_degree, std::size_t max_breakpoints, double amplitude,
                                 RandomStream& stream);

// A class member drawn with the sampler matching the codec.
std::vector<double> sample_member(const FiniteCodec& codec, RandomStream& stream);

// A uniformly chosen codeword.
std::vector<double> sample_codeword(const FiniteCodec& codec, RandomStream& stream);

// A corner of a random codeword's Voronoi cell (every active coordinate
// shifted by half a grid step), pulled back into the ball when needed.
std::vector<double> sample_voronoi_corner(const FiniteCodec& codec, RandomStream& stream);

struct DistortionAudit {
  std::size_t samples = 0;
  double max_distortion = 0.0;
  double mean_distortion = 0.0;
};

// Encodes `samples` class members and measures the reconstruction error.
DistortionAudit audit_distortion(const FiniteCodec& codec, std::size_t samples, RandomStream& stream);
DistortionAudit audit_distortion(const PpolyCodec& codec, std::size_t samples, RandomStream& stream);

}  // namespace cslab
