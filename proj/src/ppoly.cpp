#include "cslab/ppoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cslab/error.hpp"

namespace cslab {

PiecewisePolynomial::PiecewisePolynomial() : coefficients_{{0.0}} {}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<double>> coefficients)
    : breakpoints_(std::move(breakpoints)), coefficients_(std::move(coefficients)) {
  require(coefficients_.size() == breakpoints_.size() + 1, ErrorCode::kParameter,
          "PiecewisePolynomial: need exactly one coefficient block per piece");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    require(b > 0.0 && b < 1.0, ErrorCode::kDomain, "PiecewisePolynomial: breakpoints must lie in (0, 1)");
    require(i == 0 || breakpoints_[i - 1] < b, ErrorCode::kDomain,
            "PiecewisePolynomial: breakpoints must be strictly increasing");
  }
  for (const auto& c : coefficients_)
    require(!c.empty(), ErrorCode::kParameter, "PiecewisePolynomial: empty coefficient block");
}

PiecewisePolynomial PiecewisePolynomial::constant(double value) { return PiecewisePolynomial({}, {{value}}); }

std::size_t PiecewisePolynomial::max_degree() const noexcept {
  std::size_t deg = 0;
  for (const auto& c : coefficients_) deg = std::max(deg, c.size() - 1);
  return deg;
}

std::size_t PiecewisePolynomial::piece_at(double t) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
}

double PiecewisePolynomial::evaluate_on_piece(std::size_t piece, double t) const noexcept {
  const double a = piece_begin(piece);
  const double b = piece_end(piece);
  const double u = 2.0 * (t - a) / (b - a) - 1.0;
  const auto& c = coefficients_[piece];
  // Clenshaw-free direct recurrence; degrees here are small.
  double p_prev = 1.0;
  double sum = c[0];
  if (c.size() == 1) return sum;
  double p_cur = u;
  sum += c[1] * p_cur;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const double p_next = ((2.0 * i + 1.0) * u * p_cur - i * p_prev) / (i + 1.0);
    p_prev = p_cur;
    p_cur = p_next;
    sum += c[i + 1] * p_cur;
  }
  return sum;
}

double PiecewisePolynomial::operator()(double t) const noexcept { return evaluate_on_piece(piece_at(t), t); }

double PiecewisePolynomial::sup_norm_estimate(std::size_t samples_per_piece) const {
  double sup = 0.0;
  const std::size_t s = std::max<std::size_t>(samples_per_piece, 2);
  for (std::size_t p = 0; p < piece_count(); ++p) {
    const double a = piece_begin(p);
    const double b = piece_end(p);
    for (std::size_t j = 0; j <= s; ++j) {
      const double t = a + (b - a) * static_cast<double>(j) / static_cast<double>(s);
      sup = std::max(sup, std::abs(evaluate_on_piece(p, t)));
    }
  }
  return sup;
}

Quadrature gauss_legendre(std::size_t n) {
  require(n >= 1, ErrorCode::kParameter, "gauss_legendre: need at least one node");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.nodes[n - 1 - i] = x;
    q.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

void legendre_values(double u, std::span<double> out) noexcept {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = u;
  for (std::size_t i = 1; i + 1 < out.size(); ++i)
    out[i + 1] = ((2.0 * i + 1.0) * u * out[i] - i * out[i - 1]) / (i + 1.0);
}

namespace {

std::vector<double> merged_breaks(const PiecewisePolynomial& f, const PiecewisePolynomial& g) {
  std::vector<double> cuts{0.0, 1.0};
  cuts.insert(cuts.end(), f.breakpoints().begin(), f.breakpoints().end());
  cuts.insert(cuts.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

template <class Integrand>
double integrate_merged(const PiecewisePolynomial& f, const PiecewisePolynomial& g, Integrand&& h) {
  const auto cuts = merged_breaks(f, g);
  const auto rule = gauss_legendre(std::max(f.max_degree(), g.max_degree()) + 1);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    const double mid = 0.5 * (a + b);
    const std::size_t pf = f.piece_at(mid);
    const std::size_t pg = g.piece_at(mid);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = mid + 0.5 * (b - a) * rule.nodes[j];
      acc += rule.weights[j] * h(f.evaluate_on_piece(pf, t), g.evaluate_on_piece(pg, t));
    }
    total += 0.5 * (b - a) * acc;
  }
  return total;
}

}  // namespace

double l2_inner(const PiecewisePolynomial& f, const PiecewisePolynomial& g) {
  return integrate_merged(f, g, [](double a, double b) { return a * b; });
}

double l2_norm(const PiecewisePolynomial& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }

double l2_distance(const PiecewisePolynomial& f, const PiecewisePolynomial& g) {
  return std::sqrt(integrate_merged(f, g, [](double a, double b) { return (a - b) * (a - b); }));
}

}  // namespace cslab
