#include "cslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <variant>

#include "cslab/error.hpp"
#include "cslab/sampling.hpp"
#include "cslab/solver.hpp"

namespace cslab {

namespace {

// Purpose tags for derived stream ids.
constexpr std::uint64_t kEnsembleTag = 0x01;
constexpr std::uint64_t kSharedEnsembleTag = 0x02;
constexpr std::uint64_t kSignalTag = 0x03;
constexpr std::uint64_t kPanelTag = 0x04;
constexpr std::uint64_t kNoiseTag = 0x05;

std::uint64_t stream_id(std::uint64_t tag, std::uint64_t a) { return combine_ids(tag, a); }
std::uint64_t stream_id(std::uint64_t tag, std::uint64_t a, std::uint64_t b) {
  return combine_ids(combine_ids(tag, a), b);
}

// Runs fn(0..count-1) on up to `threads` workers. Errors are rethrown for
// the lowest failing index so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct PointContext {
  PointSettings settings;
  std::optional<FiniteCodec> finite;
  std::optional<PpolyCodec> ppoly;
  std::size_t n = 0;
  double rate = 0.0;
  double delta = 0.0;
  double bound_error = std::numeric_limits<double>::infinity();
  double bound_fail = 1.0;
  // Strong regime only.
  std::uint64_t shared_id = 0;
  std::optional<MeasurementEnsemble> shared;
  std::size_t panel = 0;
};

PointContext make_context(const ExperimentConfig& config, const PointSettings& settings) {
  PointContext ctx;
  ctx.settings = settings;
  AnyCodec codec = build_codec(settings.codec);
  if (auto* p = std::get_if<PpolyCodec>(&codec)) {
    ctx.ppoly = std::move(*p);
    ctx.rate = ctx.ppoly->rate_bits();
    ctx.delta = ctx.ppoly->delta();
  } else if (auto* g = std::get_if<GridCodec>(&codec)) {
    ctx.finite = FiniteCodec(std::move(*g));
  } else {
    ctx.finite = FiniteCodec(std::get<SparseCodec>(std::move(codec)));
  }
  if (ctx.finite) {
    ctx.n = codec_dim(*ctx.finite);
    ctx.rate = codec_rate(*ctx.finite);
    ctx.delta = codec_delta(*ctx.finite);
  }
  if (ctx.settings.d == 0) {
    require(config.budget.has_value(), ErrorCode::kConfig, "no d and no budget rule");
    const Regime regime = config.regime == RegimeKind::kStrong ? Regime::kStrong : Regime::kWeak;
    ctx.settings.d = measurement_budget(ctx.rate, ctx.delta, config.budget->eta, regime);
  }
  if (config.theorem) {
    const BoundEvaluation ev = point_bound(config, ctx.settings, ctx.rate);
    ctx.bound_error = ev.error_bound;
    ctx.bound_fail = ev.failure_probability;
  }
  if (config.regime == RegimeKind::kStrong) {
    ctx.shared_id = stream_id(kSharedEnsembleTag, settings.index);
    ctx.shared = sample_ensemble(ctx.settings.d, ctx.n, config.master_seed, ctx.shared_id);
    const std::uint64_t size = codec_size(*ctx.finite);
    ctx.panel = config.signal_source == SignalSource::kCodebook && size <= config.panel_size
                    ? static_cast<std::size_t>(size)
                    : config.panel_size;
  }
  return ctx;
}

// Panel member i: every codeword when the codebook fits, then alternating
// Voronoi corners and class samples; larger codebooks contribute a quarter
// random codewords and a quarter Voronoi corners.
std::vector<double> panel_member(const ExperimentConfig& config, const PointContext& ctx, std::size_t i,
                                 RandomStream& stream) {
  const FiniteCodec& codec = *ctx.finite;
  const std::uint64_t size = codec_size(codec);
  const std::size_t p = config.panel_size;
  if (size <= p && i < size) return decode(codec, i);
  if (config.signal_source == SignalSource::kCodebook) return sample_codeword(codec, stream);
  if (size <= p) return (i - size) % 2 == 0 ? sample_voronoi_corner(codec, stream) : sample_member(codec, stream);
  if (i < p / 4) return sample_codeword(codec, stream);
  if (i < p / 2) return sample_voronoi_corner(codec, stream);
  return sample_member(codec, stream);
}

ScanOptions scan_options(const ExperimentConfig& config) {
  ScanOptions opt;
  opt.partitions = config.partitions == 0 ? 1 : config.partitions;
  opt.threads = 1;
  return opt;
}

std::optional<std::span<const double>> noise_direction(const NoiseModel& noise, const std::vector<double>& y_clean,
                                                       std::vector<double>& scratch) {
  if (noise.kind != NoiseKind::kBounded || noise.shape != BoundedShape::kWorstAligned) return std::nullopt;
  // The adversary pushes the measurement toward the origin, i.e. toward the
  // zero codeword.
  scratch.resize(y_clean.size());
  for (std::size_t i = 0; i < y_clean.size(); ++i) scratch[i] = -y_clean[i];
  return std::span<const double>(scratch);
}

TrialRecord run_one(const ExperimentConfig& config, const PointContext& ctx, std::size_t trial) {
  const auto start = std::chrono::steady_clock::now();
  const PointSettings& s = ctx.settings;
  TrialRecord rec;
  rec.trial = trial;
  rec.point = s.index;
  rec.axis_value = s.axis_value;
  rec.n = ctx.n;
  rec.d = s.d;
  rec.rate_bits = ctx.rate;
  rec.delta = ctx.delta;
  rec.noise = s.noise;
  rec.bound_error = ctx.bound_error;
  rec.bound_fail_prob = ctx.bound_fail;

  RandomStream noise_stream(config.master_seed, stream_id(kNoiseTag, s.index, trial));
  std::vector<double> scratch;

  if (config.regime == RegimeKind::kAnalog) {
    const PpolyCodec& codec = *ctx.ppoly;
    rec.signal_seed = stream_id(kSignalTag, trial);
    rec.ensemble_seed = stream_id(kEnsembleTag, s.index, trial);
    RandomStream sig(config.master_seed, rec.signal_seed);
    const PiecewisePolynomial truth =
        config.signal_source == SignalSource::kCodebook
            ? codec.decode(sig.uniform_index(codec.size()))
            : sample_ppoly(codec.max_degree(), codec.max_breakpoints(), codec.amplitude(), sig);
    const WienerEnsemble ens = sample_wiener_ensemble(s.d, config.wiener_steps, config.master_seed, rec.ensemble_seed);
    const std::vector<double> clean = measure_analog(ens, truth);
    const std::vector<double> y = apply_noise(clean, s.noise, noise_stream, noise_direction(s.noise, clean, scratch));
    const AnalogRecoveryResult res = csp_recover_analog(y, ens, codec, &truth, scan_options(config));
    rec.error_l2 = *res.error_l2;
    rec.residual = res.residual;
  } else {
    const FiniteCodec& codec = *ctx.finite;
    std::vector<double> truth;
    std::optional<MeasurementEnsemble> own;
    const MeasurementEnsemble* ens = nullptr;
    if (config.regime == RegimeKind::kStrong) {
      rec.signal_seed = stream_id(kPanelTag, s.index, trial);
      rec.ensemble_seed = ctx.shared_id;
      RandomStream sig(config.master_seed, rec.signal_seed);
      truth = panel_member(config, ctx, trial, sig);
      ens = &*ctx.shared;
    } else {
      rec.signal_seed = stream_id(kSignalTag, trial);
      rec.ensemble_seed = stream_id(kEnsembleTag, s.index, trial);
      RandomStream sig(config.master_seed, rec.signal_seed);
      truth = config.signal_source == SignalSource::kCodebook ? sample_codeword(codec, sig) : sample_member(codec, sig);
      own = sample_ensemble(s.d, ctx.n, config.master_seed, rec.ensemble_seed);
      ens = &*own;
    }
    const std::vector<double> clean = measure(*ens, truth);
    const std::vector<double> y = apply_noise(clean, s.noise, noise_stream, noise_direction(s.noise, clean, scratch));
    const RecoveryResult res = csp_recover(y, *ens, codec, std::span<const double>(truth), scan_options(config));
    rec.error_l2 = *res.error_l2;
    rec.residual = res.residual;
  }
  rec.within_bound = rec.error_l2 <= rec.bound_error;
  if (config.timing)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::size_t task_count(const ExperimentConfig& config, const PointContext& ctx) {
  return config.regime == RegimeKind::kStrong ? ctx.panel : config.trials;
}

PointSummary summarize(const ExperimentConfig& config, const PointContext& ctx, const std::vector<TrialRecord>& rows) {
  PointSummary out;
  out.point = ctx.settings.index;
  out.axis_value = ctx.settings.axis_value;
  out.d = ctx.settings.d;
  out.rate_bits = ctx.rate;
  out.delta = ctx.delta;
  out.noise = ctx.settings.noise;
  out.bound_error = ctx.bound_error;
  out.bound_fail_prob = ctx.bound_fail;
  out.records = rows.size();
  std::size_t exceed = 0;
  double total = 0.0;
  for (const auto& r : rows) {
    exceed += r.within_bound ? 0 : 1;
    total += r.error_l2;
    out.max_error = std::max(out.max_error, r.error_l2);
  }
  if (!rows.empty()) {
    out.mean_error = total / static_cast<double>(rows.size());
    out.exceed_rate = config.regime == RegimeKind::kStrong ? (exceed > 0 ? 1.0 : 0.0)
                                                           : static_cast<double>(exceed) / static_cast<double>(rows.size());
  }
  return out;
}

}  // namespace

std::vector<PointSettings> sweep_points(const ExperimentConfig& config) {
  std::vector<PointSettings> out;
  const std::size_t count = config.axis == SweepAxis::kNone ? 1 : config.axis_values.size();
  for (std::size_t i = 0; i < count; ++i) {
    PointSettings p;
    p.index = i;
    p.codec = config.codec;
    p.noise = config.noise;
    p.d = config.d.value_or(0);
    if (config.axis != SweepAxis::kNone) {
      const double v = config.axis_values[i];
      p.axis_value = v;
      switch (config.axis) {
        case SweepAxis::kD: p.d = static_cast<std::size_t>(v); break;
        case SweepAxis::kDelta: p.codec.delta = v; break;
        case SweepAxis::kSigma:
        case SweepAxis::kZeta: p.noise.level = v; break;
        case SweepAxis::kReplicate:
        case SweepAxis::kNone: break;
      }
      // A budget rule follows the swept delta.
      if (config.axis == SweepAxis::kDelta && config.budget) p.d = 0;
    }
    if (config.budget && !config.d && config.axis != SweepAxis::kD) p.d = 0;
    out.push_back(p);
  }
  return out;
}

BoundInputs point_bound_inputs(const ExperimentConfig& config, const PointSettings& point, double rate_bits) {
  require(config.theorem.has_value(), ErrorCode::kConfig, "no theorem configured");
  BoundInputs in;
  in.r = rate_bits;
  in.delta = point.codec.delta;
  in.d = point.d;
  in.n = point.codec.cls == SignalClass::kPiecewisePoly ? 0 : point.codec.n;
  if (point.noise.kind == NoiseKind::kGaussian) in.sigma = point.noise.level;
  if (point.noise.kind == NoiseKind::kBounded) in.zeta = point.noise.level;
  if (config.budget) {
    in.eta = config.budget->eta;
    in.epsilon = config.budget->epsilon;
  }
  auto param = [&](const char* name, double& field) {
    if (auto it = config.bound_params.find(name); it != config.bound_params.end()) field = it->second;
  };
  param("eta", in.eta);
  param("epsilon", in.epsilon);
  param("epsilon_prime", in.epsilon_prime);
  in = seed_free_params(*config.theorem, in);
  param("tau", in.tau);
  param("tau1", in.tau1);
  param("tau2", in.tau2);
  param("tau3", in.tau3);
  param("tau_prime", in.tau_prime);
  param("t", in.t);
  param("gamma", in.gamma);
  return in;
}

BoundEvaluation point_bound(const ExperimentConfig& config, const PointSettings& point, double rate_bits) {
  return evaluate_bound(*config.theorem, point_bound_inputs(config, point, rate_bits));
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  config.validate();
  const PointContext ctx = make_context(config, sweep_points(config).front());
  require(trial_index < task_count(config, ctx), ErrorCode::kIndexRange, "run_trial: trial index out of range");
  return run_one(config, ctx, trial_index);
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult out;
  out.config = config;
  for (const PointSettings& settings : sweep_points(config)) {
    try {
      const PointContext ctx = make_context(config, settings);
      std::vector<TrialRecord> rows(task_count(config, ctx));
      parallel_for(rows.size(), config.threads, [&](std::size_t t) { rows[t] = run_one(config, ctx, t); });
      out.points.push_back(summarize(config, ctx, rows));
      out.records.insert(out.records.end(), rows.begin(), rows.end());
    } catch (const Error& e) {
      PointSummary failed;
      failed.point = settings.index;
      failed.axis_value = settings.axis_value;
      failed.d = settings.d;
      failed.delta = settings.codec.delta;
      failed.noise = settings.noise;
      failed.ok = false;
      failed.note = e.what();
      out.points.push_back(failed);
    }
  }
  return out;
}

}  // namespace cslab
