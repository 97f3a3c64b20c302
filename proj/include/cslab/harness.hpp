#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cslab/bounds.hpp"
#include "cslab/codecs.hpp"
#include "cslab/measurement.hpp"

namespace cslab {

enum class RegimeKind { kWeak, kStrong, kAnalog };
enum class SignalSource { kClass, kCodebook };
enum class SweepAxis { kNone, kD, kDelta, kSigma, kZeta, kReplicate };

std::string to_string(RegimeKind regime);
std::string to_string(SignalSource source);
std::string to_string(SweepAxis axis);

struct BudgetRule {
  double eta = 2.0;
  double epsilon = kUnset;
};

struct OutputPaths {
  std::string csv;
  std::string svg;
  std::string points;
  bool log_scale = false;
};

struct ExperimentConfig {
  CodecDescriptor codec;
  RegimeKind regime = RegimeKind::kWeak;
  NoiseModel noise;
  std::optional<std::size_t> d;
  std::optional<BudgetRule> budget;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<TheoremId> theorem;
  // Overrides for tau, tau1, tau2, tau3, tau_prime, t, gamma, eta, epsilon,
  // epsilon_prime; anything not given starts from seed_free_params.
  std::map<std::string, double> bound_params;
  SignalSource signal_source = SignalSource::kClass;
  std::size_t panel_size = 200;
  std::size_t wiener_steps = kDefaultWienerSteps;
  std::size_t threads = 1;
  std::size_t partitions = 0;  // 0: one per thread
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> axis_values;
  std::vector<double> deltas;  // rd-profile
  OutputPaths output;
  bool timing = false;  // wall_ms stays 0 unless set, keeping CSVs byte-stable

  void validate() const;
};

// Parses the JSON config; unknown keys at any level are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

bool theorem_compatible(TheoremId id, RegimeKind regime, NoiseKind noise);

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t point = 0;
  double axis_value = 0.0;
  std::uint64_t ensemble_seed = 0;  // stream id of A (or the Wiener paths)
  std::uint64_t signal_seed = 0;    // stream id of x_o
  std::size_t n = 0;
  std::size_t d = 0;
  double rate_bits = 0.0;
  double delta = 0.0;
  NoiseModel noise;
  double error_l2 = 0.0;
  double residual = 0.0;
  double bound_error = 0.0;
  double bound_fail_prob = 1.0;
  bool within_bound = true;
  double wall_ms = 0.0;
};

struct PointSummary {
  std::size_t point = 0;
  double axis_value = 0.0;
  std::size_t d = 0;
  double rate_bits = 0.0;
  double delta = 0.0;
  NoiseModel noise;
  double bound_error = 0.0;
  double bound_fail_prob = 1.0;
  std::size_t records = 0;
  // Weak and analog: fraction of trials above the bound. Strong: 1 when the
  // panel maximum exceeds the bound, else 0.
  double exceed_rate = 0.0;
  double mean_error = 0.0;
  double max_error = 0.0;
  bool ok = true;
  std::string note;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::vector<PointSummary> points;
};

// Resolved per-point settings.
struct PointSettings {
  std::size_t index = 0;
  double axis_value = 0.0;
  CodecDescriptor codec;
  NoiseModel noise;
  std::size_t d = 0;
};

std::vector<PointSettings> sweep_points(const ExperimentConfig& config);

// One trial of sweep point 0 (or the only point). In the strong regime the
// trial index selects a panel member and the point's shared A is rebuilt.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial_index);

SweepResult run_sweep(const ExperimentConfig& config);

// Bound at the resolved point, with free parameters from the config.
BoundEvaluation point_bound(const ExperimentConfig& config, const PointSettings& point, double rate_bits);
BoundInputs point_bound_inputs(const ExperimentConfig& config, const PointSettings& point, double rate_bits);

std::string records_csv(const SweepResult& sweep);
std::string points_csv(const SweepResult& sweep);
std::string sweep_svg(const SweepResult& sweep);
void emit_svg(const SweepResult& sweep, const std::string& path);

std::string rd_profile_csv(const CodecDescriptor& codec, const std::vector<RateDistortionPoint>& points,
                           std::uint64_t master_seed);

}  // namespace cslab
