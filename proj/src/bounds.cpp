#include "cslab/bounds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cslab/error.hpp"

namespace cslab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Checker {
  TheoremId id;

  void operator()(bool ok, const char* symbol, const char* rule) const {
    if (!ok)
      fail(ErrorCode::kParameter, to_string(id) + ": parameter " + symbol + " out of range (" + rule + ")");
  }
  double set(double v, const char* symbol) const {
    (*this)(!std::isnan(v), symbol, "must be set");
    return v;
  }
};

// log2(1/(e delta))
double log2_inv_e_delta(double delta) { return std::log2(1.0 / (std::numbers::e * delta)); }
// ln(1/(e delta))
double ln_inv_e_delta(double delta) { return -1.0 - std::log(delta); }

double lower_exponent(double d, double tau) { return 0.5 * d * (tau + std::log1p(-tau)); }
double upper_exponent(double d, double tau) { return -0.5 * d * (tau - std::log1p(tau)); }

BoundEvaluation finish(TheoremId id, double error, double raw_failure) {
  BoundEvaluation out;
  out.theorem = id;
  out.error_bound = error;
  out.raw_failure = raw_failure;
  out.failure_probability = std::clamp(std::isnan(raw_failure) ? 1.0 : raw_failure, 0.0, 1.0);
  return out;
}

// Shared by the eta-form corollaries: delta in (0, 1/e), eta > 1 and the
// hypothesis eta / ln(1/(e delta)) < epsilon.
void check_eta_form(const Checker& check, const BoundInputs& in, double epsilon, const char* eps_name, bool strict) {
  check(in.delta > 0.0 && ln_inv_e_delta(in.delta) > 0.0, "delta", "0 < delta < 1/e");
  check(in.eta > 1.0, "eta", "eta > 1");
  const double limit = in.eta / ln_inv_e_delta(in.delta);
  check(strict ? epsilon > limit : epsilon >= limit, eps_name, "must exceed eta / ln(1/(e delta))");
}

double resolve_d(const Checker& check, const BoundInputs& in, double eta_factor) {
  if (in.d > 0) return static_cast<double>(in.d);
  check(!std::isnan(in.eta), "d", "d must be >= 1 (or eta set to derive it)");
  check(ln_inv_e_delta(in.delta) > 0.0, "delta", "0 < delta < 1/e");
  return eta_factor * in.eta * in.r / log2_inv_e_delta(in.delta);
}

}  // namespace

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::kT3: return "T3";
    case TheoremId::kC4: return "C4";
    case TheoremId::kT5: return "T5";
    case TheoremId::kC6: return "C6";
    case TheoremId::kT6: return "T6";
    case TheoremId::kT7: return "T7";
    case TheoremId::kT8: return "T8";
    case TheoremId::kC9: return "C9";
    case TheoremId::kT9: return "T9";
    case TheoremId::kC11: return "C11";
    case TheoremId::kT10: return "T10";
    case TheoremId::kT11: return "T11";
    case TheoremId::kT14: return "T14";
  }
  return "?";
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids{TheoremId::kT3, TheoremId::kC4,  TheoremId::kT5,  TheoremId::kC6,
                                          TheoremId::kT6, TheoremId::kT7,  TheoremId::kT8,  TheoremId::kC9,
                                          TheoremId::kT9, TheoremId::kC11, TheoremId::kT10, TheoremId::kT11,
                                          TheoremId::kT14};
  return ids;
}

TheoremId theorem_from_string(const std::string& name) {
  for (TheoremId id : all_theorems())
    if (to_string(id) == name) return id;
  fail(ErrorCode::kConfig, "unknown theorem id '" + name + "'");
}

bool is_strong(TheoremId id) {
  switch (id) {
    case TheoremId::kT8:
    case TheoremId::kC9:
    case TheoremId::kT9:
    case TheoremId::kC11:
    case TheoremId::kT10:
    case TheoremId::kT11: return true;
    default: return false;
  }
}

double BoundInputs::beta() const { return std::sqrt(log2_inv_e_delta(delta)); }

double chi2_tail(std::size_t d, double tau, TailSide side) {
  require(d >= 1, ErrorCode::kParameter, "chi2_tail: d must be >= 1");
  const double dd = static_cast<double>(d);
  if (side == TailSide::kLower) {
    require(tau > 0.0 && tau < 1.0, ErrorCode::kParameter, "chi2_tail: lower tail needs tau in (0, 1)");
    return std::exp(lower_exponent(dd, tau));
  }
  require(tau > 0.0 && std::isfinite(tau), ErrorCode::kParameter, "chi2_tail: upper tail needs tau > 0");
  return std::exp(upper_exponent(dd, tau));
}

SingularValueTail singular_value_tail(std::size_t n, std::size_t d, double t) {
  require(t >= 0.0, ErrorCode::kParameter, "singular_value_tail: t must be >= 0");
  const double sd = std::sqrt(static_cast<double>(d));
  return {sd + std::sqrt(static_cast<double>(n)) + t * sd, std::exp(-0.5 * static_cast<double>(d) * t * t)};
}

BoundEvaluation evaluate_bound(TheoremId id, const BoundInputs& in) {
  const Checker check{id};
  const double r = check.set(in.r, "r");
  const double delta = check.set(in.delta, "delta");
  check(r >= 0.0, "r", "r >= 0");
  check(delta > 0.0, "delta", "delta > 0");
  check(in.sigma >= 0.0, "sigma", "sigma >= 0");
  check(in.zeta >= 0.0, "zeta", "zeta >= 0");

  switch (id) {
    case TheoremId::kT3:
    case TheoremId::kT5:
    case TheoremId::kT14: {
      const double tau1 = check.set(in.tau1, "tau1");
      const double tau2 = check.set(in.tau2, "tau2");
      check(tau1 > 0.0, "tau1", "tau1 > 0");
      check(tau2 > 0.0 && tau2 < 1.0, "tau2", "0 < tau2 < 1");
      check(in.d >= 1, "d", "d >= 1");
      const double d = static_cast<double>(in.d);
      double error = delta * std::sqrt((1.0 + tau1) / (1.0 - tau2));
      if (id == TheoremId::kT5) error += 2.0 * in.zeta / std::sqrt((1.0 - tau2) * d);
      const double fail = std::exp(r * kLn2 + lower_exponent(d, tau2)) + std::exp(upper_exponent(d, tau1));
      return finish(id, error, fail);
    }
    case TheoremId::kC4:
    case TheoremId::kC6: {
      const double eps = check.set(in.epsilon, "epsilon");
      check.set(in.eta, "eta");
      check_eta_form(check, in, eps, "epsilon", true);
      check(in.d >= 1, "d", "d >= 1");
      const double d = static_cast<double>(in.d);
      const double expo = 1.0 - (1.0 + eps) / in.eta;
      double theta = 2.0 * std::exp(-(1.0 + eps) / in.eta);
      if (id == TheoremId::kC4) return finish(id, theta * std::pow(delta, expo), std::exp(-0.8 * d) + std::exp(-0.3 * eps * r));
      // zeta = delta in this form.
      theta += 2.0 / std::sqrt(d);
      return finish(id, theta * std::pow(delta, expo), std::exp(-0.5 * d) + std::exp(-0.3 * eps * r));
    }
    case TheoremId::kT6: {
      const double tau1 = check.set(in.tau1, "tau1");
      const double tau2 = check.set(in.tau2, "tau2");
      const double tau3 = check.set(in.tau3, "tau3");
      check(tau1 >= 0.0, "tau1", "tau1 >= 0");
      check(tau2 > 0.0 && tau2 < 1.0, "tau2", "0 < tau2 < 1");
      check(tau3 >= 0.0, "tau3", "tau3 >= 0");
      check(in.d >= 1, "d", "d >= 1");
      const double d = static_cast<double>(in.d);
      const double error = (delta * std::sqrt(1.0 + tau1) + 2.0 * in.sigma * std::sqrt(1.0 + tau3)) / std::sqrt(1.0 - tau2);
      const double fail = std::exp(r * kLn2 + lower_exponent(d, tau2)) + std::exp(upper_exponent(d, tau1)) +
                          std::exp(upper_exponent(d, tau3));
      return finish(id, error, fail);
    }
    case TheoremId::kT7: {
      const double eps = check.set(in.epsilon_prime, "epsilon_prime");
      check(ln_inv_e_delta(delta) > 0.0, "delta", "0 < delta < 1/e");
      double eta = in.eta;
      if (std::isnan(eta)) {
        check(in.d >= 1, "eta", "eta must be set (or d to derive it)");
        check(r > 0.0, "r", "r > 0 to derive eta from d");
        eta = static_cast<double>(in.d) * log2_inv_e_delta(delta) / r;
      }
      BoundInputs with_eta = in;
      with_eta.eta = eta;
      check_eta_form(check, with_eta, eps, "epsilon_prime", false);
      const double l2 = log2_inv_e_delta(delta);
      const double beta = std::sqrt(l2);
      const double s = in.sigma;
      const double se = std::sqrt(eta);
      const double lead = std::pow(std::numbers::e * delta, -(1.0 + eps) / eta);
      const double error = lead * (2.0 * s * beta / se +
                                   std::sqrt(4.0 * s * s * beta * beta / eta + 2.0 * delta * delta + 4.0 * s * delta / se));
      const double fail = 2.0 * std::exp(-0.15 * eta * r / l2) + std::exp(-r / l2) + std::exp(-0.3 * r) +
                          std::exp(-0.3 * eps * r);
      return finish(id, error, fail);
    }
    case TheoremId::kT8:
    case TheoremId::kT9:
    case TheoremId::kT10:
    case TheoremId::kT11: {
      const double tau = check.set(in.tau, "tau");
      const double t = check.set(in.t, "t");
      check(tau > 0.0 && tau < 1.0, "tau", "0 < tau < 1");
      check(in.n >= 1, "n", "n >= 1");
      check(in.d >= 1, "d", "d >= 1");
      const double d = static_cast<double>(in.d);
      const double n = static_cast<double>(in.n);
      const double union_pairs = std::exp(2.0 * r * kLn2 + lower_exponent(d, tau));
      const double sv = std::exp(-0.5 * d * t * t);
      const double c = std::sqrt(n / d) + (1.0 + t);
      if (id == TheoremId::kT8) {
        check(t >= 0.0, "t", "t >= 0");
        return finish(id, 2.0 * delta / std::sqrt(1.0 - tau) * c, sv + union_pairs);
      }
      if (id == TheoremId::kT9) {
        check(t >= 0.0, "t", "t >= 0");
        return finish(id, 2.0 * c * delta / std::sqrt(1.0 - tau) + 2.0 * in.zeta / std::sqrt(d * (1.0 - tau)),
                      sv + union_pairs);
      }
      if (id == TheoremId::kT10) {
        const double tp = check.set(in.tau_prime, "tau_prime");
        check(t >= 0.0, "t", "t >= 0");
        check(tp >= 0.0, "tau_prime", "tau_prime >= 0");
        const double error = (2.0 * c * delta + 2.0 * in.sigma * std::sqrt(1.0 + tp)) / std::sqrt(1.0 - tau);
        return finish(id, error, union_pairs + sv + std::exp(upper_exponent(d, tp)));
      }
      const double gamma = check.set(in.gamma, "gamma");
      check(t > 0.0, "t", "t > 0");
      check(gamma > 0.0, "gamma", "gamma > 0");
      const double error =
          (2.0 * (std::sqrt(n) + (t + 1.0) * std::sqrt(d)) * delta + 2.0 * gamma * in.sigma) / std::sqrt((1.0 - tau) * d) +
          delta;
      const double fail = sv + std::exp(2.0 * r * kLn2 - 0.5 * gamma * gamma) + union_pairs;
      return finish(id, error, fail);
    }
    case TheoremId::kC9:
    case TheoremId::kC11: {
      const double eps = check.set(in.epsilon, "epsilon");
      check.set(in.eta, "eta");
      check_eta_form(check, in, eps, "epsilon", true);
      check(in.n >= 1, "n", "n >= 1");
      const double d = resolve_d(check, in, 2.0);
      const double n = static_cast<double>(in.n);
      double theta = 2.0 * (std::sqrt(n / d) + 2.0);
      // zeta = delta in the noisy eta form.
      if (id == TheoremId::kC11) theta += 2.0 / std::sqrt(d);
      return finish(id, theta * std::pow(delta, 1.0 - (1.0 + eps) / in.eta),
                    std::exp(-0.5 * d) + std::exp(-0.6 * eps * r));
    }
  }
  fail(ErrorCode::kParameter, "evaluate_bound: unknown theorem");
}

// --- free-parameter search ----------------------------------------------------

BoundInputs seed_free_params(TheoremId id, const BoundInputs& fixed) {
  BoundInputs seed = fixed;
  const bool eta_form = !std::isnan(fixed.eta) && !std::isnan(fixed.epsilon) && fixed.delta > 0.0 &&
                        ln_inv_e_delta(fixed.delta) > 0.0;
  switch (id) {
    case TheoremId::kT3:
    case TheoremId::kT5:
    case TheoremId::kT6:
    case TheoremId::kT14:
      seed.tau1 = 3.0;
      seed.tau2 = eta_form ? 1.0 - std::pow(std::numbers::e * fixed.delta, 2.0 * (1.0 + fixed.epsilon) / fixed.eta) : 0.75;
      if (id == TheoremId::kT6) seed.tau3 = 3.0;
      break;
    case TheoremId::kT8:
    case TheoremId::kT9:
    case TheoremId::kT10:
    case TheoremId::kT11:
      seed.t = 1.0;
      seed.tau = eta_form ? 1.0 - std::pow(fixed.delta, 2.0 * (1.0 + fixed.epsilon) / fixed.eta) : 0.75;
      if (id == TheoremId::kT10) seed.tau_prime = 3.0;
      if (id == TheoremId::kT11)
        seed.gamma = std::sqrt(2.0 * (2.0 * std::max(0.0, fixed.r) * kLn2 + std::log(100.0)));
      break;
    case TheoremId::kC4:
    case TheoremId::kC6:
    case TheoremId::kC9:
    case TheoremId::kC11:
      if (std::isnan(seed.epsilon) && !std::isnan(fixed.eta) && ln_inv_e_delta(fixed.delta) > 0.0)
        seed.epsilon = 2.0 * fixed.eta / ln_inv_e_delta(fixed.delta);
      break;
    case TheoremId::kT7:
      if (std::isnan(seed.epsilon_prime) && !std::isnan(fixed.eta) && ln_inv_e_delta(fixed.delta) > 0.0)
        seed.epsilon_prime = 2.0 * fixed.eta / ln_inv_e_delta(fixed.delta);
      break;
  }
  return seed;
}

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
  std::vector<double> out;
  const double decades = std::log10(hi / lo);
  const auto count = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade)));
  for (std::size_t i = 0; i <= count; ++i)
    out.push_back(lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(count)));
  return out;
}

std::vector<double> unit_interval_grid(std::size_t per_decade) {
  auto small = log_grid(1e-6, 0.5, per_decade);
  std::vector<double> out = small;
  for (double v : small) out.push_back(1.0 - v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> positive_grid(std::size_t per_decade, bool include_zero) {
  auto out = log_grid(1e-3, 1e3, per_decade);
  if (include_zero) out.insert(out.begin(), 0.0);
  return out;
}

struct Axis {
  double BoundInputs::*field;
  std::vector<double> values;
};

std::vector<Axis> free_axes(TheoremId id, const BoundInputs& fixed, std::size_t ppd) {
  switch (id) {
    case TheoremId::kT3:
    case TheoremId::kT5:
    case TheoremId::kT14:
      return {{&BoundInputs::tau1, positive_grid(ppd, false)}, {&BoundInputs::tau2, unit_interval_grid(ppd)}};
    case TheoremId::kT6:
      return {{&BoundInputs::tau1, positive_grid(ppd, true)},
              {&BoundInputs::tau2, unit_interval_grid(ppd)},
              {&BoundInputs::tau3, positive_grid(ppd, true)}};
    case TheoremId::kT8:
    case TheoremId::kT9:
      return {{&BoundInputs::tau, unit_interval_grid(ppd)}, {&BoundInputs::t, positive_grid(ppd, true)}};
    case TheoremId::kT10:
      return {{&BoundInputs::tau, unit_interval_grid(ppd)},
              {&BoundInputs::t, positive_grid(ppd, true)},
              {&BoundInputs::tau_prime, positive_grid(ppd, true)}};
    case TheoremId::kT11:
      return {{&BoundInputs::tau, unit_interval_grid(ppd)},
              {&BoundInputs::t, positive_grid(ppd, false)},
              {&BoundInputs::gamma, positive_grid(ppd, false)}};
    case TheoremId::kC4:
    case TheoremId::kC6:
    case TheoremId::kC9:
    case TheoremId::kC11:
    case TheoremId::kT7: {
      std::vector<double> eps;
      double eta = fixed.eta;
      if (std::isnan(eta) && id == TheoremId::kT7 && fixed.d > 0 && fixed.r > 0.0)
        eta = static_cast<double>(fixed.d) * log2_inv_e_delta(fixed.delta) / fixed.r;
      if (!std::isnan(eta) && fixed.delta > 0.0 && ln_inv_e_delta(fixed.delta) > 0.0) {
        const double limit = eta / ln_inv_e_delta(fixed.delta);
        if (id == TheoremId::kT7) eps.push_back(limit);
        for (double g : log_grid(1e-4, 1e3, ppd)) eps.push_back(limit * (1.0 + g));
      }
      return {{id == TheoremId::kT7 ? &BoundInputs::epsilon_prime : &BoundInputs::epsilon, eps}};
    }
  }
  return {};
}

}  // namespace

OptimizeResult optimize_free_params(TheoremId id, const BoundInputs& fixed, double target_failure, ParameterGrid grid) {
  require(grid.points_per_decade >= 1, ErrorCode::kParameter, "optimize_free_params: grid needs >= 1 point per decade");
  OptimizeResult result;
  result.seed = seed_free_params(id, fixed);
  result.inputs = result.seed;
  result.best_failure = 1.0;
  bool have_any = false;
  bool have_feasible = false;

  auto consider = [&](const BoundInputs& candidate) {
    BoundEvaluation ev;
    try {
      ev = evaluate_bound(id, candidate);
    } catch (const Error&) {
      return;
    }
    if (!have_any || ev.failure_probability < result.best_failure) result.best_failure = ev.failure_probability;
    if (!have_any) result.evaluation = ev;
    have_any = true;
    const bool ok = target_failure > 0.0 && ev.failure_probability <= target_failure;
    if (ok && (!have_feasible || ev.error_bound < result.evaluation.error_bound)) {
      have_feasible = true;
      result.inputs = candidate;
      result.evaluation = ev;
    }
  };

  consider(result.seed);
  const auto axes = free_axes(id, fixed, grid.points_per_decade);
  std::vector<std::size_t> pos(axes.size(), 0);
  bool empty = axes.empty();
  for (const auto& a : axes) empty = empty || a.values.empty();
  while (!empty) {
    BoundInputs candidate = fixed;
    for (std::size_t a = 0; a < axes.size(); ++a) candidate.*(axes[a].field) = axes[a].values[pos[a]];
    consider(candidate);
    std::size_t a = axes.size();
    while (a-- > 0) {
      if (++pos[a] < axes[a].values.size()) break;
      pos[a] = 0;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  require(have_any, ErrorCode::kParameter,
          "optimize_free_params: fixed inputs are invalid for " + to_string(id));
  result.feasible = have_feasible;
  return result;
}

// --- measurement budgets ----------------------------------------------------

double RateModel::rate(double delta) const {
  require(delta > 0.0 && delta < 1.0, ErrorCode::kParameter, "rate model: delta must be in (0, 1)");
  const double l = std::log2(1.0 / delta);
  switch (kind) {
    case Kind::kFiniteDim: return coefficient * l;
    case Kind::kPolylog: return coefficient * l * l;
    case Kind::kPowerlaw:
      require(smoothness > 0.0, ErrorCode::kParameter, "rate model: smoothness must be positive");
      return coefficient * std::pow(1.0 / delta, 1.0 / smoothness);
  }
  return 0.0;
}

double measurement_budget_real(double rate_bits, double delta, double eta, Regime regime) {
  require(delta > 0.0 && delta < 1.0, ErrorCode::kParameter, "measurement_budget: delta must be in (0, 1)");
  require(ln_inv_e_delta(delta) > 0.0, ErrorCode::kParameter,
          "measurement_budget: delta must be below 1/e so that log2(1/(e delta)) > 0");
  require(eta > 1.0, ErrorCode::kParameter, "measurement_budget: eta must exceed 1");
  require(rate_bits >= 0.0, ErrorCode::kParameter, "measurement_budget: rate must be >= 0");
  const double factor = regime == Regime::kStrong ? 2.0 : 1.0;
  return factor * eta * rate_bits / log2_inv_e_delta(delta);
}

std::size_t measurement_budget(double rate_bits, double delta, double eta, Regime regime) {
  return static_cast<std::size_t>(std::ceil(measurement_budget_real(rate_bits, delta, eta, regime)));
}

std::size_t measurement_budget(const RateModel& model, double delta, double eta, Regime regime) {
  return measurement_budget(model.rate(delta), delta, eta, regime);
}

// --- indistinguishable pair ---------------------------------------------------

IndistinguishablePair construct_indistinguishable_pair(const MeasurementEnsemble& ensemble, std::size_t k) {
  const std::size_t d = ensemble.rows();
  const std::size_t n = ensemble.cols();
  require(k >= 1, ErrorCode::kParameter, "construct_indistinguishable_pair: k must be >= 1");
  require(d <= 2 * k - 1, ErrorCode::kParameter, "construct_indistinguishable_pair: needs d <= 2k - 1");
  require(d + 1 <= n, ErrorCode::kParameter, "construct_indistinguishable_pair: needs d + 1 <= n");

  double frob = 0.0;
  for (double v : ensemble.row_major()) frob += v * v;
  frob = std::sqrt(frob);

  const std::size_t picked = d + 1;
  const std::size_t first_half = (picked + 1) / 2;
  std::vector<std::size_t> cols(picked);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  RandomStream fallback(0x5EEDC0DEULL, 0);

  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXd sub(d, picked);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < picked; ++j) sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ensemble(i, cols[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeFullV);
    const Eigen::VectorXd c = svd.matrixV().col(static_cast<Eigen::Index>(picked - 1));

    std::vector<double> x1(n, 0.0);
    std::vector<double> x2(n, 0.0);
    double n1 = 0.0;
    double n2 = 0.0;
    for (std::size_t j = 0; j < picked; ++j) {
      const double v = c(static_cast<Eigen::Index>(j));
      if (j < first_half) {
        x1[cols[j]] = v;
        n1 += v * v;
      } else {
        x2[cols[j]] = -v;
        n2 += v * v;
      }
    }
    const double residual = (sub * c).norm();
    if (n1 > 1e-24 && n2 > 1e-24 && residual <= 1e-12 * std::max(frob, 1.0)) {
      if (n1 < n2) {
        std::swap(x1, x2);
        std::swap(n1, n2);
      }
      IndistinguishablePair out;
      out.beta = 1.0 / std::sqrt(n1);
      out.x1 = std::move(x1);
      out.x2 = std::move(x2);
      out.columns = cols;
      return out;
    }
    // Degenerate selection: draw a fresh set of d+1 distinct columns.
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t j = 0; j < picked; ++j) std::swap(all[j], all[j + fallback.uniform_index(n - j)]);
    cols.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(picked));
    std::sort(cols.begin(), cols.end());
  }
  fail(ErrorCode::kDomain, "construct_indistinguishable_pair: every column selection was rank-degenerate");
}

}  // namespace cslab
