#include "cslab/codecs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cslab/error.hpp"

namespace cslab {

namespace {

constexpr double kRadiusSlack = 1e-12;

std::string describe_count(double log2_size) {
  std::ostringstream os;
  os.precision(6);
  if (log2_size < 63.0)
    os << static_cast<std::uint64_t>(std::llround(std::exp2(log2_size)));
  else
    os << "2^" << log2_size;
  return os.str();
}

// levels^count, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t count) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < count; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
    out *= base;
  }
  return out;
}

void enforce_cap(std::optional<std::uint64_t> size, double log2_size, std::uint64_t cap, const char* who) {
  if (!size || *size > cap) {
    std::ostringstream os;
    os << who << ": codebook needs " << describe_count(log2_size) << " codewords but the capacity cap is " << cap
       << "; raise cap to at least " << describe_count(log2_size);
    fail(ErrorCode::kCapacity, os.str());
  }
}

std::uint64_t steps_for(double rho, double delta, std::size_t dim) {
  const double ratio = rho * std::sqrt(static_cast<double>(dim)) / delta;
  // Absorb rounding in ratios that are integers in exact arithmetic.
  return static_cast<std::uint64_t>(std::ceil(ratio * (1.0 - 4.0 * std::numeric_limits<double>::epsilon())));
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_ball(std::span<const double> x, std::size_t n, double rho, const char* who) {
  require(x.size() == n, ErrorCode::kDimension, std::string(who) + ": signal length does not match codec dimension");
  for (double v : x) require(std::isfinite(v), ErrorCode::kDomain, std::string(who) + ": non-finite signal entry");
  require(norm2(x) <= rho * (1.0 + kRadiusSlack), ErrorCode::kDomain,
          std::string(who) + ": signal lies outside the l2 ball of radius rho");
}

std::uint64_t round_to_digit(double value, double spacing, std::uint64_t steps, std::uint64_t levels) {
  // Half-way ties go to the lower level, i.e. the smaller codeword index.
  const double q = std::ceil(value / spacing - 0.5) + static_cast<double>(steps);
  return static_cast<std::uint64_t>(std::clamp(q, 0.0, static_cast<double>(levels - 1)));
}

}  // namespace

std::string to_string(SignalClass cls) {
  switch (cls) {
    case SignalClass::kBall: return "ball";
    case SignalClass::kSparse: return "sparse";
    case SignalClass::kPiecewisePoly: return "ppoly";
  }
  return "unknown";
}

SignalClass signal_class_from_string(const std::string& name) {
  if (name == "ball" || name == "grid") return SignalClass::kBall;
  if (name == "sparse") return SignalClass::kSparse;
  if (name == "ppoly" || name == "piecewise_poly") return SignalClass::kPiecewisePoly;
  fail(ErrorCode::kConfig, "unknown codec class '" + name + "' (expected ball, sparse or ppoly)");
}

__extension__ using u128 = unsigned __int128;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out = out * (n - k + i) / i;
    if (out > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(out);
}

// --- GridCodec --------------------------------------------------------------

GridCodec::GridCodec(std::size_t n, double rho, double delta, std::uint64_t cap)
    : n_(n), rho_(rho), delta_(delta) {
  require(n >= 1, ErrorCode::kParameter, "grid codec: n must be >= 1");
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::kParameter, "grid codec: rho must be positive");
  require(delta > 0.0 && delta <= rho * std::sqrt(static_cast<double>(n)), ErrorCode::kParameter,
          "grid codec: delta must satisfy 0 < delta <= rho*sqrt(n)");
  spacing_ = delta / std::sqrt(static_cast<double>(n));
  steps_ = steps_for(rho, delta, n);
  levels_ = 2 * steps_ + 1;
  rate_bits_ = static_cast<double>(n) * std::log2(static_cast<double>(levels_));
  const auto size = checked_power(levels_, n);
  enforce_cap(size, rate_bits_, cap, "grid codec");
  size_ = *size;
  coords_.resize(n);
  std::iota(coords_.begin(), coords_.end(), std::size_t{0});
}

std::uint64_t GridCodec::encode(std::span<const double> x) const {
  check_ball(x, n_, rho_, "grid codec encode");
  std::uint64_t index = 0;
  for (double v : x) index = index * levels_ + round_to_digit(v, spacing_, steps_, levels_);
  return index;
}

std::vector<double> GridCodec::decode(std::uint64_t index) const {
  require(index < size_, ErrorCode::kIndexRange, "grid codec decode: index out of range");
  std::vector<double> out(n_);
  for (std::size_t j = n_; j-- > 0;) {
    out[j] = level_value(index % levels_);
    index /= levels_;
  }
  return out;
}

// --- SparseCodec ------------------------------------------------------------

SparseCodec::SparseCodec(std::size_t n, std::size_t k, double rho, double delta, std::uint64_t cap)
    : n_(n), k_(k), rho_(rho), delta_(delta) {
  require(k >= 1, ErrorCode::kParameter, "sparse codec: k must be >= 1");
  require(k <= n, ErrorCode::kParameter, "sparse codec: k must not exceed n");
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::kParameter, "sparse codec: rho must be positive");
  require(delta > 0.0 && delta <= rho * std::sqrt(static_cast<double>(k)), ErrorCode::kParameter,
          "sparse codec: delta must satisfy 0 < delta <= rho*sqrt(k)");
  spacing_ = delta / std::sqrt(static_cast<double>(k));
  steps_ = steps_for(rho, delta, k);
  levels_ = 2 * steps_ + 1;
  supports_ = binomial(n, k);
  double log2_supports = 0.0;
  for (std::size_t i = 1; i <= k; ++i)
    log2_supports += std::log2(static_cast<double>(n - k + i)) - std::log2(static_cast<double>(i));
  rate_bits_ = log2_supports + static_cast<double>(k) * std::log2(static_cast<double>(levels_));
  const auto inner = checked_power(levels_, k);
  std::optional<std::uint64_t> size;
  if (inner && supports_ != std::numeric_limits<std::uint64_t>::max() &&
      supports_ <= std::numeric_limits<std::uint64_t>::max() / *inner)
    size = supports_ * *inner;
  enforce_cap(size, rate_bits_, cap, "sparse codec");
  inner_ = *inner;
  size_ = *size;
  // Exact when the count fits; keeps log2 C(n,k) free of accumulated error.
  rate_bits_ = std::log2(static_cast<double>(size_));
}

std::vector<std::size_t> SparseCodec::support(std::uint64_t rank) const {
  require(rank < supports_, ErrorCode::kIndexRange, "sparse codec: support rank out of range");
  std::vector<std::size_t> out;
  out.reserve(k_);
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < k_; ++pos) {
    for (std::size_t e = next;; ++e) {
      const std::uint64_t count = binomial(n_ - e - 1, k_ - pos - 1);
      if (rank < count) {
        out.push_back(e);
        next = e + 1;
        break;
      }
      rank -= count;
    }
  }
  return out;
}

std::uint64_t SparseCodec::support_rank(std::span<const std::size_t> supp) const {
  require(supp.size() == k_, ErrorCode::kParameter, "sparse codec: support has wrong size");
  std::uint64_t rank = 0;
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < k_; ++pos) {
    require(supp[pos] >= next && supp[pos] < n_, ErrorCode::kParameter, "sparse codec: support must be increasing");
    for (std::size_t e = next; e < supp[pos]; ++e) rank += binomial(n_ - e - 1, k_ - pos - 1);
    next = supp[pos] + 1;
  }
  return rank;
}

std::uint64_t SparseCodec::encode(std::span<const double> x) const {
  check_ball(x, n_, rho_, "sparse codec encode");
  const auto nonzeros = static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v != 0.0; }));
  require(nonzeros <= k_, ErrorCode::kDomain, "sparse codec encode: signal has more than k nonzero entries");
  std::vector<std::size_t> order(n_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a]) > std::abs(x[b]); });
  std::vector<std::size_t> supp(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_));
  std::sort(supp.begin(), supp.end());
  std::uint64_t inner = 0;
  for (std::size_t j : supp) inner = inner * levels_ + round_to_digit(x[j], spacing_, steps_, levels_);
  return support_rank(supp) * inner_ + inner;
}

std::vector<double> SparseCodec::decode(std::uint64_t index) const {
  require(index < size_, ErrorCode::kIndexRange, "sparse codec decode: index out of range");
  const auto supp = support(index / inner_);
  std::uint64_t inner = index % inner_;
  std::vector<double> out(n_, 0.0);
  for (std::size_t j = k_; j-- > 0;) {
    out[supp[j]] = level_value(inner % levels_);
    inner /= levels_;
  }
  return out;
}

// --- ListCodec --------------------------------------------------------------

ListCodec::ListCodec(std::vector<std::vector<double>> codewords, double delta)
    : delta_(delta), codewords_(std::move(codewords)) {
  require(!codewords_.empty(), ErrorCode::kEmptyRequest, "list codec: empty codebook");
  n_ = codewords_.front().size();
  require(n_ >= 1, ErrorCode::kParameter, "list codec: zero-length codewords");
  for (const auto& c : codewords_)
    require(c.size() == n_, ErrorCode::kDimension, "list codec: codewords differ in length");
  coords_.resize(n_);
  std::iota(coords_.begin(), coords_.end(), std::size_t{0});
}

double ListCodec::rate_bits() const noexcept { return std::log2(static_cast<double>(codewords_.size())); }

const std::vector<double>& ListCodec::codeword(std::uint64_t index) const {
  require(index < codewords_.size(), ErrorCode::kIndexRange, "list codec: index out of range");
  return codewords_[index];
}

std::uint64_t ListCodec::encode(std::span<const double> x) const {
  require(x.size() == n_, ErrorCode::kDimension, "list codec encode: dimension mismatch");
  std::uint64_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < codewords_.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < n_; ++j) d2 += (x[j] - codewords_[i][j]) * (x[j] - codewords_[i][j]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

// --- FiniteCodec helpers ------------------------------------------------------

std::size_t codec_dim(const FiniteCodec& codec) {
  return std::visit([](const auto& c) { return c.dim(); }, codec);
}
std::uint64_t codec_size(const FiniteCodec& codec) {
  return std::visit([](const auto& c) { return c.size(); }, codec);
}
double codec_rate(const FiniteCodec& codec) {
  return std::visit([](const auto& c) { return c.rate_bits(); }, codec);
}
double codec_delta(const FiniteCodec& codec) {
  return std::visit([](const auto& c) { return c.delta(); }, codec);
}
std::uint64_t encode(const FiniteCodec& codec, std::span<const double> x) {
  return std::visit([&](const auto& c) { return c.encode(x); }, codec);
}
std::vector<double> decode(const FiniteCodec& codec, std::uint64_t index) {
  return std::visit([&](const auto& c) { return c.decode(index); }, codec);
}

std::vector<std::vector<double>> materialize(const FiniteCodec& codec, std::uint64_t limit) {
  const std::uint64_t size = codec_size(codec);
  require(size <= limit, ErrorCode::kCapacity, "materialize: codebook larger than the materialization limit");
  std::vector<std::vector<double>> out;
  out.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) out.push_back(decode(codec, i));
  return out;
}

// --- PpolyCodec -------------------------------------------------------------

PpolyCodec::PpolyCodec(std::size_t max_degree, std::size_t max_breakpoints, double amplitude, double delta,
                       std::size_t bits, std::uint64_t cap)
    : degree_(max_degree), breaks_(max_breakpoints), amplitude_(amplitude), delta_(delta) {
  require(amplitude > 0.0 && std::isfinite(amplitude), ErrorCode::kParameter,
          "piecewise-polynomial codec: amplitude must be positive");
  require(delta > 0.0 && delta < amplitude, ErrorCode::kParameter,
          "piecewise-polynomial codec: delta must satisfy 0 < delta < amplitude");
  if (bits == 0) {
    bits = 1;
    while (design_distortion(bits) > delta) {
      ++bits;
      require(bits < 63, ErrorCode::kCapacity, "piecewise-polynomial codec: delta unreachable below 63 bits per scalar");
    }
  }
  require(bits < 63, ErrorCode::kParameter, "piecewise-polynomial codec: bits per scalar must be < 63");
  bits_ = bits;
  levels_ = std::uint64_t{1} << bits_;
  const double total_bits = rate_bits();
  std::optional<std::uint64_t> size;
  if (total_bits < 64.0) size = std::uint64_t{1} << static_cast<unsigned>(bits_ * scalar_count());
  enforce_cap(size, total_bits, cap, "piecewise-polynomial codec");
  size_ = *size;
}

double PpolyCodec::design_distortion(std::size_t bits) const noexcept {
  const double a2 = amplitude_ * amplitude_;
  const double h = std::exp2(-static_cast<double>(bits));
  const double breakpoint_term = static_cast<double>(breaks_) * 2.0 * a2 * h;
  const double coefficient_term = static_cast<double>((degree_ + 1) * (breaks_ + 1)) * a2 * h * h;
  return std::sqrt(breakpoint_term + coefficient_term);
}

void PpolyCodec::check_member(const PiecewisePolynomial& f) const {
  require(f.breakpoints().size() <= breaks_, ErrorCode::kDomain,
          "piecewise-polynomial codec: signal has more than Q breakpoints");
  for (std::size_t p = 0; p < f.piece_count(); ++p)
    require(f.coefficients(p).size() <= degree_ + 1, ErrorCode::kDomain,
            "piecewise-polynomial codec: piece degree exceeds N");
  require(f.sup_norm_estimate() <= amplitude_ * (1.0 + 1e-9), ErrorCode::kDomain,
          "piecewise-polynomial codec: |f| exceeds the amplitude bound");
}

std::uint64_t PpolyCodec::encode(const PiecewisePolynomial& f) const {
  check_member(f);
  const std::size_t scalars = scalar_count();
  std::vector<std::uint64_t> digits(scalars);
  const double levels = static_cast<double>(levels_);
  for (std::size_t i = 0; i < breaks_; ++i) {
    if (i < f.breakpoints().size()) {
      const double j = std::clamp(std::round(f.breakpoints()[i] * levels), 1.0, levels);
      digits[i] = static_cast<std::uint64_t>(j) - 1;
    } else {
      digits[i] = levels_ - 1;
    }
  }
  std::sort(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(breaks_));

  const auto rule = gauss_legendre(degree_ + f.max_degree() / 2 + 2);
  std::vector<double> basis(degree_ + 1);
  const double cell = 2.0 * amplitude_ / levels;
  std::size_t slot = breaks_;
  for (std::size_t p = 0; p <= breaks_; ++p) {
    const double a = p == 0 ? 0.0 : breakpoint_position(digits[p - 1]);
    const double b = p == breaks_ ? 1.0 : breakpoint_position(digits[p]);
    const double len = b - a;
    if (len <= 0.0) {
      for (std::size_t i = 0; i <= degree_; ++i) digits[slot++] = levels_ / 2;
      continue;
    }
    // Project f onto the orthonormal basis sqrt((2i+1)/len) P_i(u) of [a, b],
    // integrating piecewise between f's own breakpoints.
    std::vector<double> cuts{a};
    for (double t : f.breakpoints())
      if (t > a && t < b) cuts.push_back(t);
    cuts.push_back(b);
    std::vector<double> proj(degree_ + 1, 0.0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double lo = cuts[s];
      const double hi = cuts[s + 1];
      const std::size_t piece = f.piece_at(0.5 * (lo + hi));
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
        const double w = 0.5 * (hi - lo) * rule.weights[q] * f.evaluate_on_piece(piece, t);
        legendre_values(2.0 * (t - a) / len - 1.0, basis);
        for (std::size_t i = 0; i <= degree_; ++i) proj[i] += w * basis[i];
      }
    }
    for (std::size_t i = 0; i <= degree_; ++i) {
      const double coeff = proj[i] * std::sqrt((2.0 * static_cast<double>(i) + 1.0) / len);
      const double q = std::floor((coeff + amplitude_) / cell);
      digits[slot++] = static_cast<std::uint64_t>(std::clamp(q, 0.0, levels - 1.0));
    }
  }
  std::uint64_t index = 0;
  for (std::uint64_t d : digits) index = index * levels_ + d;
  return index;
}

PiecewisePolynomial PpolyCodec::assemble(std::span<const std::uint64_t> digits) const {
  std::vector<double> positions(breaks_);
  for (std::size_t i = 0; i < breaks_; ++i) positions[i] = breakpoint_position(digits[i]);
  std::sort(positions.begin(), positions.end());
  std::vector<double> cuts;
  std::vector<std::vector<double>> blocks;
  for (std::size_t p = 0; p <= breaks_; ++p) {
    const double a = p == 0 ? 0.0 : positions[p - 1];
    const double b = p == breaks_ ? 1.0 : positions[p];
    const double len = b - a;
    if (len <= 0.0) continue;
    std::vector<double> coeffs(degree_ + 1);
    for (std::size_t i = 0; i <= degree_; ++i)
      coeffs[i] = coefficient_value(digits[breaks_ + p * (degree_ + 1) + i]) *
                  std::sqrt((2.0 * static_cast<double>(i) + 1.0) / len);
    if (!blocks.empty()) cuts.push_back(a);
    blocks.push_back(std::move(coeffs));
  }
  return PiecewisePolynomial(std::move(cuts), std::move(blocks));
}

PiecewisePolynomial PpolyCodec::decode(std::uint64_t index) const {
  require(index < size_, ErrorCode::kIndexRange, "piecewise-polynomial codec decode: index out of range");
  std::vector<std::uint64_t> digits(scalar_count());
  for (std::size_t j = digits.size(); j-- > 0;) {
    digits[j] = index % levels_;
    index /= levels_;
  }
  return assemble(digits);
}

// --- construction and profiling --------------------------------------------

GridCodec build_grid_codec(std::size_t n, double rho, double delta, std::uint64_t cap) {
  return GridCodec(n, rho, delta, cap);
}

SparseCodec build_sparse_codec(std::size_t n, std::size_t k, double rho, double delta, std::uint64_t cap) {
  return SparseCodec(n, k, rho, delta, cap);
}

PpolyCodec build_ppoly_codec(std::size_t max_degree, std::size_t max_breakpoints, double amplitude, double delta,
                             std::size_t basis_resolution, std::uint64_t cap) {
  return PpolyCodec(max_degree, max_breakpoints, amplitude, delta, basis_resolution, cap);
}

AnyCodec build_codec(const CodecDescriptor& desc) {
  switch (desc.cls) {
    case SignalClass::kBall: return GridCodec(desc.n, desc.rho, desc.delta, desc.cap);
    case SignalClass::kSparse: return SparseCodec(desc.n, desc.k, desc.rho, desc.delta, desc.cap);
    case SignalClass::kPiecewisePoly:
      return PpolyCodec(desc.max_degree, desc.max_breakpoints, desc.rho, desc.delta, desc.bits, desc.cap);
  }
  fail(ErrorCode::kParameter, "build_codec: unknown class");
}

double codec_rate(const AnyCodec& codec) {
  return std::visit([](const auto& c) { return c.rate_bits(); }, codec);
}

std::vector<RateDistortionPoint> rd_profile(const CodecDescriptor& base, std::span<const double> deltas) {
  require(!deltas.empty(), ErrorCode::kEmptyRequest, "rd_profile: empty delta list");
  for (double d : deltas) require(d > 0.0, ErrorCode::kParameter, "rd_profile: every delta must be positive");
  std::vector<RateDistortionPoint> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    RateDistortionPoint point;
    point.delta = delta;
    CodecDescriptor desc = base;
    desc.delta = delta;
    try {
      point.rate_bits = codec_rate(build_codec(desc));
      point.alpha_hat = delta < 1.0 ? point.rate_bits / std::log2(1.0 / delta) : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error& e) {
      point.available = false;
      point.rate_bits = std::numeric_limits<double>::quiet_NaN();
      point.alpha_hat = std::numeric_limits<double>::quiet_NaN();
      point.note = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

double entropy_lower_bound(std::size_t n, double delta) {
  require(delta > 0.0, ErrorCode::kParameter, "entropy_lower_bound: delta must be positive");
  if (delta >= 1.0) return 0.0;
  return static_cast<double>(n) * std::log2(1.0 / delta);
}

}  // namespace cslab
