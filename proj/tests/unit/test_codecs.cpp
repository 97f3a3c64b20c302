#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "cslab/codecs.hpp"
#include "cslab/error.hpp"
#include "cslab/sampling.hpp"

using namespace cslab;

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Independent nearest-codeword search: decode every index.
std::uint64_t brute_nearest(const FiniteCodec& codec, const std::vector<double>& x) {
  std::uint64_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < codec_size(codec); ++i) {
    const double d = dist(decode(codec, i), x);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST(GridCodec, SmallPlaneInstance) {
  const GridCodec g = build_grid_codec(2, 1.0, 0.5);
  EXPECT_EQ(g.levels(), 7u);
  EXPECT_EQ(g.size(), 49u);
  EXPECT_NEAR(g.rate_bits(), std::log2(49.0), 1e-12);
  EXPECT_NEAR(g.rate_bits(), 5.615, 5e-4);
  const double spacing = 0.5 / std::sqrt(2.0);
  EXPECT_NEAR(g.spacing(), spacing, 1e-15);
  // Worst case sits at a cell corner: sqrt(2) * spacing / 2 = 0.25.
  const std::vector<double> corner{spacing / 2.0 + 1e-12, -spacing / 2.0 + 1e-12};
  EXPECT_NEAR(dist(corner, g.decode(g.encode(corner))), 0.25, 1e-9);
  EXPECT_LE(0.25, 0.5);
}

TEST(GridCodec, EncodeMatchesRoundingAndBruteForce) {
  const FiniteCodec g = build_grid_codec(2, 1.0, 0.5);
  const std::vector<double> x{0.2, -0.2};
  const auto c = decode(g, encode(g, x));
  const double s = 0.5 / std::sqrt(2.0);
  EXPECT_NEAR(c[0], s * std::round(0.2 / s), 1e-15);
  EXPECT_NEAR(c[1], -s, 1e-15);
  EXPECT_NEAR(c[0], 0.35355, 1e-5);
  EXPECT_EQ(encode(g, x), brute_nearest(g, x));
}

TEST(GridCodec, CanonicalOrderInOneDimension) {
  const GridCodec g = build_grid_codec(1, 1.0, 1.0);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_NEAR(g.rate_bits(), std::log2(3.0), 1e-15);
  EXPECT_EQ(g.decode(0), std::vector<double>{-1.0});
  EXPECT_EQ(g.decode(1), std::vector<double>{0.0});
  EXPECT_EQ(g.decode(2), std::vector<double>{1.0});
}

TEST(GridCodec, MixedRadixOrderCoordinateZeroMostSignificant) {
  const GridCodec g = build_grid_codec(2, 1.0, 0.5);
  const double s = g.spacing();
  EXPECT_NEAR(g.decode(0)[0], -3 * s, 1e-15);
  EXPECT_NEAR(g.decode(1)[1], -2 * s, 1e-15);
  EXPECT_NEAR(g.decode(7)[0], -2 * s, 1e-15);
}

TEST(GridCodec, RateWithinCoveringBound) {
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
    for (double delta : {0.5, 0.1, 0.01}) {
      for (double rho : {1.0, 2.5}) {
        if (delta > rho * std::sqrt(static_cast<double>(n))) continue;
        const double levels = 2.0 * std::ceil(rho * std::sqrt(static_cast<double>(n)) / delta) + 1.0;
        if (static_cast<double>(n) * std::log2(levels) > 63.0) continue;  // index would not fit in 64 bits
        const GridCodec g(n, rho, delta, std::numeric_limits<std::uint64_t>::max());
        const double nn = static_cast<double>(n);
        EXPECT_LE(g.rate_bits(), 0.5 * nn * std::log2(nn) + nn * std::log2(rho / delta) + 3.0 * nn)
            << "n=" << n << " delta=" << delta << " rho=" << rho;
      }
    }
  }
}

TEST(GridCodec, CapacityErrorNamesRequiredCap) {
  try {
    build_grid_codec(6, 1.0, 0.01);
    FAIL() << "expected capacity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacity);
    EXPECT_NE(std::string(e.what()).find("cap"), std::string::npos);
  }
}

TEST(GridCodec, ParameterErrors) {
  EXPECT_EQ(code_of([] { build_grid_codec(0, 1.0, 0.1); }), ErrorCode::kParameter);
  EXPECT_EQ(code_of([] { build_grid_codec(2, 1.0, 0.0); }), ErrorCode::kParameter);
  EXPECT_EQ(code_of([] { build_grid_codec(2, 1.0, 1.5); }), ErrorCode::kParameter);
}

TEST(GridCodec, DomainAndRangeErrors) {
  const GridCodec g = build_grid_codec(2, 1.0, 0.5);
  EXPECT_EQ(code_of([&] { g.encode(std::vector<double>{1.0, 1.0}); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([&] { g.encode(std::vector<double>{0.1}); }), ErrorCode::kDimension);
  EXPECT_EQ(code_of([&] { g.decode(49); }), ErrorCode::kIndexRange);
}

TEST(SparseCodec, SmallInstance) {
  const SparseCodec s = build_sparse_codec(4, 1, 1.0, 0.5);
  EXPECT_EQ(s.size(), 20u);
  EXPECT_LE(s.rate_bits(), std::log2(20.0) + 1e-12);
  EXPECT_NEAR(std::log2(20.0), 4.322, 5e-4);
}

TEST(SparseCodec, RateWithinCoveringBound) {
  for (std::size_t n : {4u, 8u, 16u}) {
    for (std::size_t k : {1u, 2u}) {
      for (double delta : {0.5, 0.1, 0.05}) {
        const SparseCodec s(n, k, 1.0, delta, std::numeric_limits<std::uint64_t>::max());
        const double kk = static_cast<double>(k);
        const double bound =
            std::log2(static_cast<double>(binomial(n, k))) + kk * std::log2(std::sqrt(kk) / delta) + 3.0 * kk;
        EXPECT_LE(s.rate_bits(), bound) << "n=" << n << " k=" << k << " delta=" << delta;
      }
    }
  }
}

TEST(SparseCodec, SampledSparseSignalsWithinDelta) {
  const FiniteCodec s = build_sparse_codec(10, 2, 1.0, 0.2);
  RandomStream rs(12, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_sparse(10, 2, 1.0, rs);
    EXPECT_LE(dist(x, decode(s, encode(s, x))), 0.2);
  }
}

TEST(SparseCodec, GridSignalsAreFixedPoints) {
  const SparseCodec s = build_sparse_codec(6, 2, 1.0, 0.3);
  std::vector<double> x(6, 0.0);
  x[1] = s.level_value(s.steps() + 2);
  x[4] = s.level_value(s.steps() - 1);
  EXPECT_EQ(dist(x, s.decode(s.encode(x))), 0.0);
}

TEST(SparseCodec, Errors) {
  EXPECT_EQ(code_of([] { build_sparse_codec(3, 4, 1.0, 0.5); }), ErrorCode::kParameter);
  const SparseCodec s = build_sparse_codec(4, 1, 1.0, 0.5);
  EXPECT_EQ(code_of([&] { s.encode(std::vector<double>{0.1, 0.1, 0.0, 0.0}); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([&] { s.encode(std::vector<double>{2.0, 0.0, 0.0, 0.0}); }), ErrorCode::kDomain);
}

TEST(SparseCodec, SupportRankingRoundTrips) {
  const SparseCodec s(7, 3, 1.0, 0.9);
  EXPECT_EQ(s.support_count(), 35u);
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t r = 0; r < s.support_count(); ++r) {
    const auto supp = s.support(r);
    EXPECT_EQ(s.support_rank(supp), r);
    EXPECT_TRUE(std::is_sorted(supp.begin(), supp.end()));
    seen.insert(supp);
  }
  EXPECT_EQ(seen.size(), 35u);
  EXPECT_EQ(s.support(0), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(s.support(34), (std::vector<std::size_t>{4, 5, 6}));
}

// Grid codebooks are duplicate-free; sparse codebooks repeat lower-sparsity
// points once per support and nothing else.
TEST(Codebooks, EnumerationIsBijectiveUpToDocumentedDuplicates) {
  const FiniteCodec g = build_grid_codec(3, 1.0, 0.6);
  std::set<std::vector<double>> grid_words;
  for (const auto& c : materialize(g)) grid_words.insert(c);
  EXPECT_EQ(grid_words.size(), codec_size(g));

  const SparseCodec s = build_sparse_codec(5, 2, 1.0, 0.5);
  std::size_t zeros = 0;
  std::set<std::vector<double>> sparse_words;
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    const auto c = s.decode(i);
    bool all_zero = true;
    for (double v : c) all_zero = all_zero && v == 0.0;
    zeros += all_zero ? 1 : 0;
    sparse_words.insert(c);
  }
  EXPECT_EQ(zeros, binomial(5, 2));
  const std::uint64_t L = s.levels();
  // Distinct: the zero vector, 1-sparse points (5 coords x (L-1) values), and
  // exactly-2-sparse points.
  const std::uint64_t distinct = 1 + 5 * (L - 1) + binomial(5, 2) * (L - 1) * (L - 1);
  EXPECT_EQ(sparse_words.size(), distinct);
}

TEST(Codebooks, DecodeEncodeIdempotentOnCodewords) {
  const FiniteCodec g = build_grid_codec(2, 1.0, 0.5);
  std::size_t inside = 0;
  for (std::uint64_t i = 0; i < codec_size(g); ++i) {
    const auto c = decode(g, i);
    if (std::hypot(c[0], c[1]) > 1.0) continue;  // corner codewords sit outside the ball
    EXPECT_EQ(encode(g, c), i);
    ++inside;
  }
  EXPECT_GT(inside, 20u);
  const FiniteCodec s = build_sparse_codec(4, 2, 1.0, 0.6);
  for (std::uint64_t i = 0; i < codec_size(s); ++i) {
    const auto c = decode(s, i);
    double sq = 0.0;
    for (double v : c) sq += v * v;
    if (sq > 1.0) continue;
    EXPECT_EQ(decode(s, encode(s, c)), c);
  }
}

TEST(Codebooks, IndexSurvivesDecimalSerialization) {
  const FiniteCodec g = build_grid_codec(3, 1.0, 0.2);
  for (std::uint64_t i : {std::uint64_t{0}, std::uint64_t{123}, codec_size(g) - 1}) {
    const std::string text = std::to_string(i);
    EXPECT_EQ(decode(g, std::stoull(text)), decode(g, i));
  }
}

TEST(Codebooks, ForEachVisitsDecodedCodewordsInOrder) {
  const SparseCodec s = build_sparse_codec(5, 2, 1.0, 0.5);
  std::uint64_t expect = 7;
  s.for_each(7, 200, [&](std::uint64_t idx, std::span<const std::size_t> coords, std::span<const double> values,
                         std::size_t) {
    EXPECT_EQ(idx, expect++);
    std::vector<double> dense(5, 0.0);
    for (std::size_t j = 0; j < coords.size(); ++j) dense[coords[j]] = values[j];
    EXPECT_EQ(dense, s.decode(idx));
  });
  EXPECT_EQ(expect, 200u);
}

TEST(Covering, ThousandClassMembersWithinDelta) {
  RandomStream rs(99, 1);
  const FiniteCodec g = build_grid_codec(3, 1.0, 0.25);
  const FiniteCodec s = build_sparse_codec(8, 2, 1.0, 0.1);
  for (int i = 0; i < 1000; ++i) {
    const auto x = sample_ball(3, 1.0, rs);
    ASSERT_LE(dist(x, decode(g, encode(g, x))), 0.25);
    const auto y = sample_sparse(8, 2, 1.0, rs);
    ASSERT_LE(dist(y, decode(s, encode(s, y))), 0.1);
  }
}

TEST(Covering, ExhaustiveOverFineLatticeInSmallDimension) {
  // Every point of a fine lattice inside B_2^2(1).
  const GridCodec g = build_grid_codec(2, 1.0, 0.3);
  double worst = 0.0;
  for (int i = -200; i <= 200; ++i) {
    for (int j = -200; j <= 200; ++j) {
      const std::vector<double> x{i / 200.0, j / 200.0};
      if (x[0] * x[0] + x[1] * x[1] > 1.0) continue;
      worst = std::max(worst, dist(x, g.decode(g.encode(x))));
    }
  }
  EXPECT_LE(worst, 0.3);
}

TEST(NearestCodeword, EncodeEqualsBruteForce) {
  RandomStream rs(4096, 2);
  const std::vector<FiniteCodec> grids{FiniteCodec(build_grid_codec(2, 1.0, 0.5)),
                                       FiniteCodec(build_grid_codec(3, 1.0, 0.3)),
                                       FiniteCodec(build_grid_codec(1, 2.0, 0.01))};
  for (const auto& g : grids) {
    ASSERT_LE(codec_size(g), 4096u);
    for (int i = 0; i < 100; ++i) {
      const auto x = sample_member(g, rs);
      EXPECT_EQ(encode(g, x), brute_nearest(g, x));
    }
  }
  const FiniteCodec s = build_sparse_codec(6, 2, 1.0, 0.4);
  ASSERT_LE(codec_size(s), 4096u);
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_member(s, rs);
    // Duplicates make index comparison meaningless; compare distances.
    EXPECT_NEAR(dist(x, decode(s, encode(s, x))), dist(x, decode(s, brute_nearest(s, x))), 1e-12);
  }
}

TEST(RateDistortion, MonotoneAndAboveEntropyBound) {
  const std::vector<double> deltas{0.9, 0.5, 0.2, 0.1, 0.05, 0.01, 0.001};
  CodecDescriptor grid;
  grid.cls = SignalClass::kBall;
  grid.n = 2;
  grid.cap = std::uint64_t{1} << 40;
  CodecDescriptor sparse = grid;
  sparse.cls = SignalClass::kSparse;
  sparse.n = 10;
  sparse.k = 2;
  for (const auto& desc : {grid, sparse}) {
    const auto pts = rd_profile(desc, deltas);
    ASSERT_EQ(pts.size(), deltas.size());
    for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GE(pts[i].rate_bits, pts[i - 1].rate_bits);
  }
  for (const auto& p : rd_profile(grid, deltas)) EXPECT_GE(p.rate_bits, entropy_lower_bound(2, p.delta));
}

TEST(RateDistortion, AlphaHatFormula) {
  CodecDescriptor grid;
  grid.n = 2;
  grid.cap = std::uint64_t{1} << 40;
  const std::vector<double> deltas{1e-4};
  const auto pts = rd_profile(grid, deltas);
  const double expected = 2.0 * std::log2(2.0 * std::ceil(std::sqrt(2.0) * 1e4) + 1.0) / std::log2(1e4);
  EXPECT_NEAR(pts[0].alpha_hat, expected, 1e-12);
  EXPECT_NEAR(pts[0].alpha_hat, 2.23, 0.01);
}

TEST(RateDistortion, GridAlphaHatAtLeastN) {
  for (std::size_t n : {1u, 2u, 3u}) {
    CodecDescriptor grid;
    grid.n = n;
    grid.cap = std::numeric_limits<std::uint64_t>::max();
    const std::vector<double> deltas{0.9, 0.5, 0.1, 0.01, 1e-3};
    for (const auto& p : rd_profile(grid, deltas)) EXPECT_GE(p.alpha_hat, static_cast<double>(n));
  }
}

TEST(RateDistortion, SparseAlphaHatApproachesK) {
  CodecDescriptor sparse;
  sparse.cls = SignalClass::kSparse;
  sparse.n = 64;
  sparse.k = 2;
  sparse.cap = std::numeric_limits<std::uint64_t>::max();
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  const auto pts = rd_profile(sparse, deltas);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ASSERT_TRUE(pts[i].available);
    // log2(C(64,2) * levels^2) / log2(1/delta), levels = 2 ceil(sqrt(2)/delta) + 1
    const double levels = 2.0 * std::ceil(std::sqrt(2.0) / deltas[i]) + 1.0;
    const double expect = std::log2(2016.0 * levels * levels) / std::log2(1.0 / deltas[i]);
    EXPECT_NEAR(pts[i].alpha_hat, expect, 1e-9);
    EXPECT_GT(pts[i].alpha_hat, 2.0);
    if (i > 0) {
      EXPECT_LT(pts[i].alpha_hat, pts[i - 1].alpha_hat);
    }
  }
  // The leading terms vanish like 1/log2(1/delta); the limit is k.
  const double tail = (std::log2(2016.0) + 2.0 * std::log2(2.0 * std::sqrt(2.0))) / std::log2(1e5);
  EXPECT_NEAR(pts.back().alpha_hat - 2.0, tail, 0.01);
}

TEST(RateDistortion, CapacityFailureMarksPointUnavailable) {
  CodecDescriptor grid;
  grid.n = 4;
  const std::vector<double> deltas{0.5, 1e-4};
  const auto pts = rd_profile(grid, deltas);
  EXPECT_TRUE(pts[0].available);
  EXPECT_FALSE(pts[1].available);
  EXPECT_NE(pts[1].note.find("cap"), std::string::npos);
}

TEST(EntropyBound, Values) {
  EXPECT_DOUBLE_EQ(entropy_lower_bound(2, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(entropy_lower_bound(5, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy_lower_bound(3, 0.25), 6.0);
  EXPECT_GE(build_grid_codec(2, 1.0, 0.5).rate_bits(), entropy_lower_bound(2, 0.5));
}

TEST(PpolyCodec, ConstantsReduceToOneDimensionalGrid) {
  const PpolyCodec c = build_ppoly_codec(0, 0, 1.0, 0.05);
  EXPECT_EQ(c.scalar_count(), 1u);
  EXPECT_EQ(c.size(), std::uint64_t{1} << c.bits());
  const double half = 1.0 / static_cast<double>(c.levels());  // half of 2A / 2^b
  double worst = 0.0;
  for (int i = -1000; i <= 1000; ++i) {
    const auto f = PiecewisePolynomial::constant(i / 1000.0);
    worst = std::max(worst, l2_distance(f, c.decode(c.encode(f))));
  }
  EXPECT_LE(worst, half + 1e-12);
  EXPECT_GE(worst, 0.99 * half);
  EXPECT_LE(worst, 0.05);
}

TEST(PpolyCodec, DistortionAuditOneBreakpoint) {
  const PpolyCodec c = build_ppoly_codec(0, 1, 1.0, 0.1);
  RandomStream rs(5, 5);
  const DistortionAudit audit = audit_distortion(c, 200, rs);
  EXPECT_EQ(audit.samples, 200u);
  EXPECT_LE(audit.max_distortion, 0.1);
}

TEST(PpolyCodec, DistortionAuditHigherDegree) {
  const PpolyCodec c(2, 1, 1.0, 0.3, 0, std::numeric_limits<std::uint64_t>::max());
  RandomStream rs(6, 6);
  EXPECT_LE(audit_distortion(c, 200, rs).max_distortion, 0.3);
}

TEST(PpolyCodec, HalvingDeltaAddsOneBitPerScalarWithoutBreakpoints) {
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
  for (double delta : {0.1, 0.03, 0.007}) {
    const PpolyCodec a(2, 0, 1.0, delta, 0, big);
    const PpolyCodec b(2, 0, 1.0, delta / 2.0, 0, big);
    EXPECT_DOUBLE_EQ(b.rate_bits() - a.rate_bits(), static_cast<double>(a.scalar_count()));
  }
}

TEST(PpolyCodec, RateScalesWithDegreeAndBreakpoints) {
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
  const PpolyCodec c(1, 1, 1.0, 0.2, 0, big);
  EXPECT_EQ(c.scalar_count(), 1u + 2u * 2u);
  EXPECT_EQ(c.bits(), 6u);
  EXPECT_DOUBLE_EQ(c.rate_bits(), static_cast<double>(c.bits() * c.scalar_count()));
  EXPECT_LE(c.design_distortion(), 0.2);
  EXPECT_GT(c.design_distortion(c.bits() - 1), 0.2);
}

TEST(PpolyCodec, ExplicitResolutionOverridesCalibration) {
  const PpolyCodec c = build_ppoly_codec(0, 0, 1.0, 0.05, 3);
  EXPECT_EQ(c.bits(), 3u);
  EXPECT_EQ(c.size(), 8u);
}

TEST(PpolyCodec, RejectsNonMembers) {
  const PpolyCodec c = build_ppoly_codec(0, 1, 1.0, 0.1);
  EXPECT_EQ(code_of([&] { c.encode(PiecewisePolynomial({0.2, 0.6}, {{0.1}, {0.2}, {0.3}})); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([&] { c.encode(PiecewisePolynomial({}, {{0.1, 0.1}})); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([&] { c.encode(PiecewisePolynomial::constant(1.5)); }), ErrorCode::kDomain);
}

TEST(PpolyCodec, CodewordsRoundTrip) {
  const PpolyCodec c = build_ppoly_codec(0, 1, 1.0, 0.5, 3);
  RandomStream rs(8, 8);
  int members = 0;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t idx = rs.uniform_index(c.size());
    const PiecewisePolynomial f = c.decode(idx);
    // Short pieces scale the orthonormal coefficient up; those leave the class.
    if (f.sup_norm_estimate() > 1.0) continue;
    ++members;
    EXPECT_LE(l2_distance(f, c.decode(c.encode(f))), 1e-12);
  }
  EXPECT_GT(members, 10);
}
