#include "cslab/cslab.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <utility>

#include "cslab/bounds.hpp"
#include "cslab/codecs.hpp"
#include "cslab/error.hpp"
#include "cslab/format.hpp"
#include "cslab/harness.hpp"
#include "cslab/measurement.hpp"
#include "cslab/solver.hpp"

struct cslab_config {
  cslab::ExperimentConfig value;
};
struct cslab_sweep {
  cslab::SweepResult value;
};
struct cslab_codec {
  cslab::FiniteCodec value;
};
struct cslab_ensemble {
  cslab::MeasurementEnsemble value;
};

namespace {

thread_local std::string g_last_error;

cslab_status to_status(cslab::ErrorCode code) {
  switch (code) {
    case cslab::ErrorCode::kParameter: return CSLAB_ERR_PARAMETER;
    case cslab::ErrorCode::kEmptyRequest: return CSLAB_ERR_EMPTY_REQUEST;
    case cslab::ErrorCode::kCapacity: return CSLAB_ERR_CAPACITY;
    case cslab::ErrorCode::kDomain: return CSLAB_ERR_DOMAIN;
    case cslab::ErrorCode::kDimension: return CSLAB_ERR_DIMENSION;
    case cslab::ErrorCode::kIndexRange: return CSLAB_ERR_INDEX_RANGE;
    case cslab::ErrorCode::kGridMismatch: return CSLAB_ERR_GRID_MISMATCH;
    case cslab::ErrorCode::kConfig: return CSLAB_ERR_CONFIG;
    case cslab::ErrorCode::kIo: return CSLAB_ERR_IO;
  }
  return CSLAB_ERR_INTERNAL;
}

template <class F>
cslab_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return CSLAB_OK;
  } catch (const cslab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CSLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CSLAB_ERR_INTERNAL;
  }
}

cslab_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return CSLAB_ERR_NULL_ARGUMENT;
}

#define CSLAB_REQUIRE_ARG(p) \
  if ((p) == nullptr) return null_argument(#p)

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double parse_number(std::string_view text, const std::string& key) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  cslab::require(res.ec == std::errc() && res.ptr == text.data() + text.size(), cslab::ErrorCode::kParameter,
                 "value for '" + key + "' is not a number");
  return v;
}

std::size_t parse_count(double v, const std::string& key) {
  cslab::require(v >= 0.0 && v == std::floor(v), cslab::ErrorCode::kParameter, key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

using Assignments = std::vector<std::pair<std::string, double>>;

Assignments parse_assignments(const char* text) {
  Assignments out;
  if (text == nullptr) return out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    cslab::require(eq != std::string_view::npos, cslab::ErrorCode::kParameter,
                   "assignment '" + std::string(item) + "' is not name=value");
    const std::string key(item.substr(0, eq));
    out.emplace_back(key, parse_number(item.substr(eq + 1), key));
  }
  return out;
}

double* field_of(cslab::BoundInputs& in, const std::string& key) {
  if (key == "r") return &in.r;
  if (key == "delta") return &in.delta;
  if (key == "sigma") return &in.sigma;
  if (key == "zeta") return &in.zeta;
  if (key == "eta") return &in.eta;
  if (key == "epsilon") return &in.epsilon;
  if (key == "epsilon_prime") return &in.epsilon_prime;
  if (key == "tau") return &in.tau;
  if (key == "tau1") return &in.tau1;
  if (key == "tau2") return &in.tau2;
  if (key == "tau3") return &in.tau3;
  if (key == "tau_prime") return &in.tau_prime;
  if (key == "t") return &in.t;
  if (key == "gamma") return &in.gamma;
  return nullptr;
}

bool is_free(const std::string& key) {
  return key == "tau" || key == "tau1" || key == "tau2" || key == "tau3" || key == "tau_prime" || key == "t" ||
         key == "gamma";
}

// Fixed inputs first, then the default free parameters, then explicit
// free-parameter assignments.
cslab::BoundInputs build_inputs(cslab::TheoremId id, const Assignments& assignments) {
  cslab::BoundInputs in;
  for (const auto& [key, value] : assignments) {
    if (key == "d") in.d = parse_count(value, key);
    else if (key == "n") in.n = parse_count(value, key);
    else if (!is_free(key)) {
      double* f = field_of(in, key);
      cslab::require(f != nullptr, cslab::ErrorCode::kParameter, "unknown bound input '" + key + "'");
      *f = value;
    }
  }
  in = cslab::seed_free_params(id, in);
  for (const auto& [key, value] : assignments)
    if (is_free(key)) *field_of(in, key) = value;
  return in;
}

std::string describe_inputs(const cslab::BoundInputs& in) {
  std::string s;
  auto add = [&](const char* name, double v) {
    if (std::isnan(v)) return;
    if (!s.empty()) s += ';';
    s += std::string(name) + '=' + cslab::format_double(v);
  };
  add("r", in.r);
  add("delta", in.delta);
  add("d", static_cast<double>(in.d));
  add("n", static_cast<double>(in.n));
  add("sigma", in.sigma);
  add("zeta", in.zeta);
  add("eta", in.eta);
  add("epsilon", in.epsilon);
  add("epsilon_prime", in.epsilon_prime);
  add("tau", in.tau);
  add("tau1", in.tau1);
  add("tau2", in.tau2);
  add("tau3", in.tau3);
  add("tau_prime", in.tau_prime);
  add("t", in.t);
  add("gamma", in.gamma);
  return s;
}

}  // namespace

extern "C" {

const char* cslab_version(void) { return "0.1.0"; }

const char* cslab_status_string(cslab_status status) {
  switch (status) {
    case CSLAB_OK: return "ok";
    case CSLAB_ERR_PARAMETER: return "parameter error";
    case CSLAB_ERR_EMPTY_REQUEST: return "empty request";
    case CSLAB_ERR_CAPACITY: return "capacity exceeded";
    case CSLAB_ERR_DOMAIN: return "domain error";
    case CSLAB_ERR_DIMENSION: return "dimension mismatch";
    case CSLAB_ERR_INDEX_RANGE: return "index out of range";
    case CSLAB_ERR_GRID_MISMATCH: return "grid mismatch";
    case CSLAB_ERR_CONFIG: return "configuration error";
    case CSLAB_ERR_IO: return "i/o error";
    case CSLAB_ERR_NULL_ARGUMENT: return "null argument";
    case CSLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cslab_last_error(void) { return g_last_error.c_str(); }

void cslab_string_free(char* s) { std::free(s); }

cslab_status cslab_config_parse(const char* json_text, cslab_config** out) {
  CSLAB_REQUIRE_ARG(json_text);
  CSLAB_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new cslab_config{cslab::parse_config(json_text)}; });
}

cslab_status cslab_config_load(const char* path, cslab_config** out) {
  CSLAB_REQUIRE_ARG(path);
  CSLAB_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new cslab_config{cslab::load_config(path)}; });
}

void cslab_config_free(cslab_config* config) { delete config; }

cslab_status cslab_config_set_seed(cslab_config* config, uint64_t master_seed) {
  CSLAB_REQUIRE_ARG(config);
  config->value.master_seed = master_seed;
  return CSLAB_OK;
}

cslab_status cslab_config_set_trials(cslab_config* config, size_t trials) {
  CSLAB_REQUIRE_ARG(config);
  return guarded([&] {
    cslab::require(trials >= 1, cslab::ErrorCode::kConfig, "trials must be >= 1");
    config->value.trials = trials;
  });
}

cslab_status cslab_config_set_threads(cslab_config* config, size_t threads) {
  CSLAB_REQUIRE_ARG(config);
  return guarded([&] {
    cslab::require(threads >= 1, cslab::ErrorCode::kConfig, "threads must be >= 1");
    config->value.threads = threads;
  });
}

cslab_status cslab_config_set_timing(cslab_config* config, int enabled) {
  CSLAB_REQUIRE_ARG(config);
  config->value.timing = enabled != 0;
  return CSLAB_OK;
}

cslab_status cslab_config_seed(const cslab_config* config, uint64_t* out) {
  CSLAB_REQUIRE_ARG(config);
  CSLAB_REQUIRE_ARG(out);
  *out = config->value.master_seed;
  return CSLAB_OK;
}

cslab_status cslab_config_output(const cslab_config* config, char** csv, char** svg, char** points) {
  CSLAB_REQUIRE_ARG(config);
  return guarded([&] {
    const auto& o = config->value.output;
    if (csv != nullptr) *csv = copy_out(o.csv);
    if (svg != nullptr) *svg = copy_out(o.svg);
    if (points != nullptr) *points = copy_out(o.points);
  });
}

cslab_status cslab_sweep_run(const cslab_config* config, cslab_sweep** out) {
  CSLAB_REQUIRE_ARG(config);
  CSLAB_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new cslab_sweep{cslab::run_sweep(config->value)}; });
}

void cslab_sweep_free(cslab_sweep* sweep) { delete sweep; }

cslab_status cslab_sweep_records_csv(const cslab_sweep* sweep, char** out) {
  CSLAB_REQUIRE_ARG(sweep);
  CSLAB_REQUIRE_ARG(out);
  return guarded([&] { *out = copy_out(cslab::records_csv(sweep->value)); });
}

cslab_status cslab_sweep_points_csv(const cslab_sweep* sweep, char** out) {
  CSLAB_REQUIRE_ARG(sweep);
  CSLAB_REQUIRE_ARG(out);
  return guarded([&] { *out = copy_out(cslab::points_csv(sweep->value)); });
}

cslab_status cslab_sweep_svg(const cslab_sweep* sweep, char** out) {
  CSLAB_REQUIRE_ARG(sweep);
  CSLAB_REQUIRE_ARG(out);
  return guarded([&] { *out = copy_out(cslab::sweep_svg(sweep->value)); });
}

cslab_status cslab_sweep_point_count(const cslab_sweep* sweep, size_t* out) {
  CSLAB_REQUIRE_ARG(sweep);
  CSLAB_REQUIRE_ARG(out);
  *out = sweep->value.points.size();
  return CSLAB_OK;
}

cslab_status cslab_sweep_point(const cslab_sweep* sweep, size_t index, double* axis_value, size_t* d,
                               double* exceed_rate, double* mean_error, double* max_error, double* bound_error,
                               double* bound_fail_prob, int* ok) {
  CSLAB_REQUIRE_ARG(sweep);
  return guarded([&] {
    cslab::require(index < sweep->value.points.size(), cslab::ErrorCode::kIndexRange, "sweep point index out of range");
    const auto& p = sweep->value.points[index];
    if (axis_value) *axis_value = p.axis_value;
    if (d) *d = p.d;
    if (exceed_rate) *exceed_rate = p.exceed_rate;
    if (mean_error) *mean_error = p.mean_error;
    if (max_error) *max_error = p.max_error;
    if (bound_error) *bound_error = p.bound_error;
    if (bound_fail_prob) *bound_fail_prob = p.bound_fail_prob;
    if (ok) *ok = p.ok ? 1 : 0;
  });
}

cslab_status cslab_rd_profile_csv(const cslab_config* config, const double* deltas, size_t count, char** out) {
  CSLAB_REQUIRE_ARG(config);
  CSLAB_REQUIRE_ARG(out);
  if (count > 0) CSLAB_REQUIRE_ARG(deltas);
  return guarded([&] {
    std::vector<double> list = count > 0 ? std::vector<double>(deltas, deltas + count) : config->value.deltas;
    cslab::require(!list.empty(), cslab::ErrorCode::kEmptyRequest, "rd-profile needs at least one delta");
    const auto points = cslab::rd_profile(config->value.codec, list);
    *out = copy_out(cslab::rd_profile_csv(config->value.codec, points, config->value.master_seed));
  });
}

cslab_status cslab_bounds_csv(const char* theorem, const char* assignments, char** out) {
  CSLAB_REQUIRE_ARG(out);
  return guarded([&] {
    const Assignments parsed = parse_assignments(assignments);
    const bool all = theorem == nullptr || std::strcmp(theorem, "all") == 0;
    std::vector<cslab::TheoremId> ids =
        all ? cslab::all_theorems() : std::vector<cslab::TheoremId>{cslab::theorem_from_string(theorem)};
    std::string csv = "theorem_id,inputs,error_bound,failure_probability\n";
    std::size_t rows = 0;
    for (cslab::TheoremId id : ids) {
      const cslab::BoundInputs in = build_inputs(id, parsed);
      cslab::BoundEvaluation ev;
      try {
        ev = cslab::evaluate_bound(id, in);
      } catch (const cslab::Error&) {
        if (!all) throw;
        continue;
      }
      csv += cslab::to_string(id) + ',' + describe_inputs(in) + ',' + cslab::format_double(ev.error_bound) + ',' +
             cslab::format_double(ev.failure_probability) + '\n';
      ++rows;
    }
    cslab::require(rows > 0, cslab::ErrorCode::kParameter, "no theorem accepts the given inputs");
    *out = copy_out(csv);
  });
}

cslab_status cslab_evaluate_bound(const char* theorem, const char* assignments, double* error_bound,
                                  double* failure_probability) {
  CSLAB_REQUIRE_ARG(theorem);
  return guarded([&] {
    const cslab::TheoremId id = cslab::theorem_from_string(theorem);
    const cslab::BoundEvaluation ev = cslab::evaluate_bound(id, build_inputs(id, parse_assignments(assignments)));
    if (error_bound) *error_bound = ev.error_bound;
    if (failure_probability) *failure_probability = ev.failure_probability;
  });
}

cslab_status cslab_measurement_budget(double rate_bits, double delta, double eta, int strong, size_t* d) {
  CSLAB_REQUIRE_ARG(d);
  return guarded([&] {
    *d = cslab::measurement_budget(rate_bits, delta, eta, strong ? cslab::Regime::kStrong : cslab::Regime::kWeak);
  });
}

cslab_status cslab_pair_csv(const cslab_config* config, char** out) {
  CSLAB_REQUIRE_ARG(config);
  CSLAB_REQUIRE_ARG(out);
  return guarded([&] {
    const auto& c = config->value;
    const std::size_t n = c.codec.n;
    const std::size_t k = c.codec.k;
    const std::size_t d = c.d.value_or(2 * k - 1);
    std::string csv = "# master_seed=" + cslab::format_uint(c.master_seed) + "\n";
    csv += "draw,ensemble_seed,n,k,d,beta,residual,frobenius,support_x1,support_x2\n";
    for (std::size_t draw = 0; draw < c.trials; ++draw) {
      const std::uint64_t id = cslab::combine_ids(0x06, draw);
      const auto ens = cslab::sample_ensemble(d, n, c.master_seed, id);
      const auto pair = cslab::construct_indistinguishable_pair(ens, k);
      std::vector<double> diff(n);
      for (std::size_t j = 0; j < n; ++j) diff[j] = pair.x1[j] - pair.x2[j];
      double res = 0.0;
      for (double v : cslab::measure(ens, diff)) res += v * v;
      double frob = 0.0;
      for (double v : ens.row_major()) frob += v * v;
      auto support = [&](const std::vector<double>& x) {
        std::string s;
        for (std::size_t j = 0; j < n; ++j)
          if (x[j] != 0.0) s += (s.empty() ? "" : " ") + cslab::format_uint(j);
        return s;
      };
      csv += cslab::format_uint(draw) + ',' + cslab::format_uint(id) + ',' + cslab::format_uint(n) + ',' +
             cslab::format_uint(k) + ',' + cslab::format_uint(d) + ',' + cslab::format_double(pair.beta) + ',' +
             cslab::format_double(std::sqrt(res)) + ',' + cslab::format_double(std::sqrt(frob)) + ',' +
             support(pair.x1) + ',' + support(pair.x2) + '\n';
    }
    *out = copy_out(csv);
  });
}

cslab_status cslab_codec_create(const char* json_descriptor, cslab_codec** out) {
  CSLAB_REQUIRE_ARG(json_descriptor);
  CSLAB_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    // Reuse the config parser so the codec block has one grammar.
    const std::string wrapped = std::string("{\"codec\":") + json_descriptor + ",\"d\":1}";
    cslab::ExperimentConfig cfg;
    try {
      cfg = cslab::parse_config(wrapped);
    } catch (const cslab::Error& e) {
      // The analog/ppoly pairing check is irrelevant here; report the rest.
      if (std::string(e.what()).find("analog") == std::string::npos) throw;
      cslab::fail(cslab::ErrorCode::kConfig, "cslab_codec_create supports the ball and sparse classes only");
    }
    cslab::AnyCodec codec = cslab::build_codec(cfg.codec);
    if (auto* g = std::get_if<cslab::GridCodec>(&codec)) *out = new cslab_codec{cslab::FiniteCodec(std::move(*g))};
    else *out = new cslab_codec{cslab::FiniteCodec(std::get<cslab::SparseCodec>(std::move(codec)))};
  });
}

void cslab_codec_free(cslab_codec* codec) { delete codec; }

cslab_status cslab_codec_info(const cslab_codec* codec, size_t* dim, uint64_t* size, double* rate_bits, double* delta) {
  CSLAB_REQUIRE_ARG(codec);
  if (dim) *dim = cslab::codec_dim(codec->value);
  if (size) *size = cslab::codec_size(codec->value);
  if (rate_bits) *rate_bits = cslab::codec_rate(codec->value);
  if (delta) *delta = cslab::codec_delta(codec->value);
  return CSLAB_OK;
}

cslab_status cslab_codec_encode(const cslab_codec* codec, const double* x, size_t len, uint64_t* index) {
  CSLAB_REQUIRE_ARG(codec);
  CSLAB_REQUIRE_ARG(x);
  CSLAB_REQUIRE_ARG(index);
  return guarded([&] { *index = cslab::encode(codec->value, std::span<const double>(x, len)); });
}

cslab_status cslab_codec_decode(const cslab_codec* codec, uint64_t index, double* out, size_t len) {
  CSLAB_REQUIRE_ARG(codec);
  CSLAB_REQUIRE_ARG(out);
  return guarded([&] {
    cslab::require(len == cslab::codec_dim(codec->value), cslab::ErrorCode::kDimension,
                   "decode: output length does not match the codec dimension");
    const auto c = cslab::decode(codec->value, index);
    std::copy(c.begin(), c.end(), out);
  });
}

cslab_status cslab_ensemble_sample(size_t d, size_t n, uint64_t master_seed, uint64_t stream_id,
                                   cslab_ensemble** out) {
  CSLAB_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new cslab_ensemble{cslab::sample_ensemble(d, n, master_seed, stream_id)}; });
}

void cslab_ensemble_free(cslab_ensemble* ensemble) { delete ensemble; }

cslab_status cslab_ensemble_measure(const cslab_ensemble* ensemble, const double* x, size_t n, double* y, size_t d) {
  CSLAB_REQUIRE_ARG(ensemble);
  CSLAB_REQUIRE_ARG(x);
  CSLAB_REQUIRE_ARG(y);
  return guarded([&] {
    cslab::require(d == ensemble->value.rows(), cslab::ErrorCode::kDimension, "measure: output length is not d");
    const auto out = cslab::measure(ensemble->value, std::span<const double>(x, n));
    std::copy(out.begin(), out.end(), y);
  });
}

cslab_status cslab_recover(const cslab_codec* codec, const cslab_ensemble* ensemble, const double* y, size_t d,
                           const double* truth, size_t threads, uint64_t* index, double* residual, double* error_l2) {
  CSLAB_REQUIRE_ARG(codec);
  CSLAB_REQUIRE_ARG(ensemble);
  CSLAB_REQUIRE_ARG(y);
  return guarded([&] {
    cslab::ScanOptions opt;
    opt.threads = threads == 0 ? 1 : threads;
    opt.partitions = opt.threads;
    std::optional<std::span<const double>> t;
    if (truth != nullptr) t = std::span<const double>(truth, cslab::codec_dim(codec->value));
    const auto res = cslab::csp_recover(std::span<const double>(y, d), ensemble->value, codec->value, t, opt);
    if (index) *index = res.chosen_index;
    if (residual) *residual = res.residual;
    if (error_l2) *error_l2 = res.error_l2.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

}  // extern "C"
