#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cslab {

// Piecewise polynomial on [0, 1]. Piece p covers [b_{p-1}, b_p) with b_{-1} = 0
// and b_{Q} = 1; on that piece the function is sum_i c_i P_i(u) where P_i is
// the Legendre polynomial and u maps the piece affinely onto [-1, 1].
class PiecewisePolynomial {
 public:
  PiecewisePolynomial();
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<std::vector<double>> coefficients);

  static PiecewisePolynomial constant(double value);

  std::size_t piece_count() const noexcept { return coefficients_.size(); }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> coefficients(std::size_t piece) const { return coefficients_.at(piece); }
  double piece_begin(std::size_t piece) const noexcept { return piece == 0 ? 0.0 : breakpoints_[piece - 1]; }
  double piece_end(std::size_t piece) const noexcept {
    return piece + 1 == coefficients_.size() ? 1.0 : breakpoints_[piece];
  }
  std::size_t max_degree() const noexcept;
  std::size_t piece_at(double t) const noexcept;

  double operator()(double t) const noexcept;
  double evaluate_on_piece(std::size_t piece, double t) const noexcept;

  // max |f| over a dense grid of each piece (endpoints included).
  double sup_norm_estimate(std::size_t samples_per_piece = 64) const;

  bool operator==(const PiecewisePolynomial&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> coefficients_;
};

struct Quadrature {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule; exact for polynomials of degree <= 2n - 1.
Quadrature gauss_legendre(std::size_t n);

// P_0(u)..P_{out.size()-1}(u) by the three-term recurrence.
void legendre_values(double u, std::span<double> out) noexcept;

double l2_inner(const PiecewisePolynomial& f, const PiecewisePolynomial& g);
double l2_norm(const PiecewisePolynomial& f);
double l2_distance(const PiecewisePolynomial& f, const PiecewisePolynomial& g);

}  // namespace cslab
