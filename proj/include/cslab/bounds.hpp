#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cslab/measurement.hpp"

namespace cslab {

// Rates are in bits (log2); exponents are natural logarithms throughout.

enum class TheoremId {
  kT3,   // weak, noiseless
  kC4,   // weak, noiseless, eta form
  kT5,   // weak, bounded noise
  kC6,   // weak, bounded noise with zeta = delta, eta form
  kT6,   // weak, Gaussian noise, coarse
  kT7,   // weak, Gaussian noise, fine
  kT8,   // strong, noiseless
  kC9,   // strong, noiseless, eta form
  kT9,   // strong, bounded noise
  kC11,  // strong, bounded noise with zeta = delta, eta form
  kT10,  // strong, Gaussian noise, coarse
  kT11,  // strong, Gaussian noise, fine
  kT14,  // analog, noiseless
};

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);
const std::vector<TheoremId>& all_theorems();
bool is_strong(TheoremId id);

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct BoundInputs {
  double r = kUnset;      // rate, bits
  double delta = kUnset;  // code distortion
  std::size_t d = 0;
  std::size_t n = 0;
  double sigma = 0.0;
  double zeta = 0.0;
  double eta = kUnset;
  double epsilon = kUnset;
  double epsilon_prime = kUnset;
  double tau = kUnset;
  double tau1 = kUnset;
  double tau2 = kUnset;
  double tau3 = kUnset;
  double tau_prime = kUnset;
  double t = kUnset;
  double gamma = kUnset;

  // sqrt(log2(1/(e*delta)))
  double beta() const;
};

struct BoundEvaluation {
  TheoremId theorem = TheoremId::kT3;
  double error_bound = 0.0;
  double failure_probability = 1.0;  // clamped to [0, 1]
  double raw_failure = 1.0;
};

enum class TailSide { kLower, kUpper };

// Lower: P(chi2_d < d(1-tau)) <= exp((d/2)(tau + ln(1-tau))), tau in (0,1).
// Upper: P(chi2_d > d(1+tau)) <= exp(-(d/2)(tau - ln(1+tau))), tau > 0.
double chi2_tail(std::size_t d, double tau, TailSide side);

struct SingularValueTail {
  double threshold = 0.0;  // sqrt(d) + sqrt(n) + t sqrt(d)
  double tail = 1.0;       // exp(-d t^2 / 2)
};

SingularValueTail singular_value_tail(std::size_t n, std::size_t d, double t);

BoundEvaluation evaluate_bound(TheoremId id, const BoundInputs& inputs);

struct OptimizeResult {
  bool feasible = false;
  BoundInputs inputs;         // best feasible point, or the seed when infeasible
  BoundEvaluation evaluation;
  double best_failure = 1.0;  // smallest failure probability seen on the grid
  BoundInputs seed;           // hand-picked starting point
};

struct ParameterGrid {
  std::size_t points_per_decade = 20;
};

// Minimizes error_bound over the theorem's free parameters subject to
// failure_probability <= target_failure by exhaustive search on a fixed
// logarithmic grid. The seed point is evaluated first and wins ties.
OptimizeResult optimize_free_params(TheoremId id, const BoundInputs& fixed, double target_failure,
                                    ParameterGrid grid = {});

// Free parameters at their hand-picked values: tau1 = 3, tau2 (or tau) from
// the eta/epsilon choice when those are set, otherwise 0.75; t = 1.
BoundInputs seed_free_params(TheoremId id, const BoundInputs& fixed);

struct RateModel {
  enum class Kind { kFiniteDim, kPolylog, kPowerlaw };
  Kind kind = Kind::kFiniteDim;
  double coefficient = 1.0;  // alpha, or c
  double smoothness = 1.0;   // beta of the power law

  static RateModel finite_dim(double alpha) { return {Kind::kFiniteDim, alpha, 1.0}; }
  static RateModel polylog(double c) { return {Kind::kPolylog, c, 1.0}; }
  static RateModel powerlaw(double c, double smoothness) { return {Kind::kPowerlaw, c, smoothness}; }

  // alpha*log2(1/delta), c*log2(1/delta)^2 or c*(1/delta)^(1/beta).
  double rate(double delta) const;
};

enum class Regime { kWeak, kStrong };

// eta * r / log2(1/(e delta)), doubled in the strong regime (before ceil).
double measurement_budget_real(double rate_bits, double delta, double eta, Regime regime);
std::size_t measurement_budget(double rate_bits, double delta, double eta, Regime regime);
std::size_t measurement_budget(const RateModel& model, double delta, double eta, Regime regime);

struct IndistinguishablePair {
  std::vector<double> x1;  // the larger-norm half
  std::vector<double> x2;
  double beta = 1.0;       // ||beta x1||_2 == 1
  std::vector<std::size_t> columns;
};

// Two k-sparse vectors with disjoint supports and A x1 == A x2, built from a
// null vector of d+1 columns of A. Requires d <= 2k-1 and d+1 <= n.
IndistinguishablePair construct_indistinguishable_pair(const MeasurementEnsemble& ensemble, std::size_t k);

}  // namespace cslab
