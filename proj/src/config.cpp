#include <nlohmann/json.hpp>

#include <cmath>
#include <set>

#include "cslab/error.hpp"
#include "cslab/format.hpp"
#include "cslab/harness.hpp"

namespace cslab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  require(obj.is_object(), ErrorCode::kConfig, where + " must be a JSON object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) fail(ErrorCode::kConfig, "unknown key '" + item.key() + "' in " + where);
}

double get_double(const json& v, const std::string& name) {
  require(v.is_number(), ErrorCode::kConfig, name + " must be a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& v, const std::string& name) {
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), ErrorCode::kConfig,
          name + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& v, const std::string& name) {
  require(v.is_string(), ErrorCode::kConfig, name + " must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& name) {
  require(v.is_boolean(), ErrorCode::kConfig, name + " must be true or false");
  return v.get<bool>();
}

std::vector<double> get_double_list(const json& v, const std::string& name) {
  require(v.is_array(), ErrorCode::kConfig, name + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_double(e, name + "[]"));
  return out;
}

CodecDescriptor parse_codec(const json& obj) {
  reject_unknown(obj, {"class", "n", "k", "N", "Q", "rho", "delta", "cap", "bits"}, "codec");
  CodecDescriptor c;
  require(obj.contains("class"), ErrorCode::kConfig, "codec.class is required");
  c.cls = signal_class_from_string(get_string(obj["class"], "codec.class"));
  if (obj.contains("n")) c.n = get_uint(obj["n"], "codec.n");
  if (obj.contains("k")) c.k = get_uint(obj["k"], "codec.k");
  if (obj.contains("N")) c.max_degree = get_uint(obj["N"], "codec.N");
  if (obj.contains("Q")) c.max_breakpoints = get_uint(obj["Q"], "codec.Q");
  if (obj.contains("rho")) c.rho = get_double(obj["rho"], "codec.rho");
  if (obj.contains("delta")) c.delta = get_double(obj["delta"], "codec.delta");
  if (obj.contains("cap")) c.cap = get_uint(obj["cap"], "codec.cap");
  if (obj.contains("bits")) c.bits = get_uint(obj["bits"], "codec.bits");
  return c;
}

NoiseModel parse_noise(const json& obj) {
  reject_unknown(obj, {"kind", "level", "shape"}, "noise");
  NoiseModel m;
  const std::string kind = obj.contains("kind") ? get_string(obj["kind"], "noise.kind") : "none";
  if (kind == "none") m.kind = NoiseKind::kNone;
  else if (kind == "bounded") m.kind = NoiseKind::kBounded;
  else if (kind == "gaussian") m.kind = NoiseKind::kGaussian;
  else fail(ErrorCode::kConfig, "noise.kind must be none, bounded or gaussian");
  if (obj.contains("level")) m.level = get_double(obj["level"], "noise.level");
  if (obj.contains("shape")) {
    const std::string shape = get_string(obj["shape"], "noise.shape");
    if (shape == "worst_aligned") m.shape = BoundedShape::kWorstAligned;
    else if (shape == "random_direction") m.shape = BoundedShape::kRandomDirection;
    else fail(ErrorCode::kConfig, "noise.shape must be worst_aligned or random_direction");
  }
  return m;
}

const std::set<std::string>& bound_param_names() {
  static const std::set<std::string> names{"tau", "tau1", "tau2", "tau3", "tau_prime",
                                           "t", "gamma", "eta", "epsilon", "epsilon_prime"};
  return names;
}

}  // namespace

std::string to_string(RegimeKind regime) {
  switch (regime) {
    case RegimeKind::kWeak: return "weak";
    case RegimeKind::kStrong: return "strong";
    case RegimeKind::kAnalog: return "analog";
  }
  return "?";
}

std::string to_string(SignalSource source) { return source == SignalSource::kClass ? "class" : "codebook"; }

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kD: return "d";
    case SweepAxis::kDelta: return "delta";
    case SweepAxis::kSigma: return "sigma";
    case SweepAxis::kZeta: return "zeta";
    case SweepAxis::kReplicate: return "replicate";
  }
  return "?";
}

bool theorem_compatible(TheoremId id, RegimeKind regime, NoiseKind noise) {
  if (regime == RegimeKind::kAnalog) return id == TheoremId::kT14 && noise == NoiseKind::kNone;
  if (id == TheoremId::kT14) return false;
  if (is_strong(id) != (regime == RegimeKind::kStrong)) return false;
  switch (id) {
    case TheoremId::kT3:
    case TheoremId::kC4:
    case TheoremId::kT8:
    case TheoremId::kC9: return noise == NoiseKind::kNone;
    case TheoremId::kT5:
    case TheoremId::kC6:
    case TheoremId::kT9:
    case TheoremId::kC11: return noise != NoiseKind::kGaussian;
    case TheoremId::kT6:
    case TheoremId::kT7:
    case TheoremId::kT10:
    case TheoremId::kT11: return noise != NoiseKind::kBounded;
    case TheoremId::kT14: return false;
  }
  return false;
}

void ExperimentConfig::validate() const {
  require(trials >= 1, ErrorCode::kConfig, "trials must be >= 1");
  require(threads >= 1, ErrorCode::kConfig, "threads must be >= 1");
  require(panel_size >= 1, ErrorCode::kConfig, "panel_size must be >= 1");
  require(wiener_steps >= 1, ErrorCode::kConfig, "wiener_steps must be >= 1");
  noise.validate();
  const bool analog = regime == RegimeKind::kAnalog;
  require(analog == (codec.cls == SignalClass::kPiecewisePoly), ErrorCode::kConfig,
          "the analog regime needs a ppoly codec, and ppoly codecs need the analog regime");
  if (budget) {
    require(budget->eta > 1.0, ErrorCode::kConfig, "budget.eta must exceed 1");
  }
  require(d.has_value() || budget.has_value() || axis == SweepAxis::kD, ErrorCode::kConfig,
          "set either d, a budget rule or a d sweep");
  if (d) require(*d >= 1, ErrorCode::kConfig, "d must be >= 1");
  if (theorem)
    require(theorem_compatible(*theorem, regime, noise.kind), ErrorCode::kConfig,
            "theorem " + to_string(*theorem) + " does not apply to the " + to_string(regime) + " regime with " +
                to_string(noise.kind) + " noise");
  for (const auto& [name, value] : bound_params)
    require(bound_param_names().count(name) > 0, ErrorCode::kConfig, "unknown bound parameter '" + name + "'");
  if (axis != SweepAxis::kNone) require(!axis_values.empty(), ErrorCode::kConfig, "sweep.values must be nonempty");
  if (axis == SweepAxis::kSigma)
    require(noise.kind == NoiseKind::kGaussian, ErrorCode::kConfig, "a sigma sweep needs gaussian noise");
  if (axis == SweepAxis::kZeta)
    require(noise.kind == NoiseKind::kBounded, ErrorCode::kConfig, "a zeta sweep needs bounded noise");
  for (double v : axis_values) {
    require(std::isfinite(v), ErrorCode::kConfig, "sweep values must be finite");
    if (axis == SweepAxis::kD || axis == SweepAxis::kReplicate)
      require(v >= 0.0 && v == std::floor(v), ErrorCode::kConfig, "sweep values for this axis must be integers");
    if (axis == SweepAxis::kD) require(v >= 1.0, ErrorCode::kConfig, "d sweep values must be >= 1");
    if (axis == SweepAxis::kDelta) require(v > 0.0, ErrorCode::kConfig, "delta sweep values must be positive");
    if (axis == SweepAxis::kSigma || axis == SweepAxis::kZeta)
      require(v >= 0.0, ErrorCode::kConfig, "noise sweep values must be >= 0");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"codec", "regime", "noise", "d", "budget", "trials", "master_seed", "theorem", "bound_params",
                  "signal_source", "panel_size", "wiener_steps", "threads", "partitions", "sweep", "deltas",
                  "output", "timing"},
                 "config");
  ExperimentConfig c;
  require(root.contains("codec"), ErrorCode::kConfig, "config.codec is required");
  c.codec = parse_codec(root["codec"]);
  if (root.contains("regime")) {
    const std::string r = get_string(root["regime"], "regime");
    if (r == "weak") c.regime = RegimeKind::kWeak;
    else if (r == "strong") c.regime = RegimeKind::kStrong;
    else if (r == "analog") c.regime = RegimeKind::kAnalog;
    else fail(ErrorCode::kConfig, "regime must be weak, strong or analog");
  }
  if (root.contains("noise")) c.noise = parse_noise(root["noise"]);
  if (root.contains("d")) c.d = get_uint(root["d"], "d");
  if (root.contains("budget")) {
    const json& b = root["budget"];
    reject_unknown(b, {"eta", "epsilon"}, "budget");
    BudgetRule rule;
    if (b.contains("eta")) rule.eta = get_double(b["eta"], "budget.eta");
    if (b.contains("epsilon")) rule.epsilon = get_double(b["epsilon"], "budget.epsilon");
    c.budget = rule;
  }
  if (root.contains("trials")) c.trials = get_uint(root["trials"], "trials");
  if (root.contains("master_seed")) c.master_seed = get_uint(root["master_seed"], "master_seed");
  if (root.contains("theorem")) c.theorem = theorem_from_string(get_string(root["theorem"], "theorem"));
  if (root.contains("bound_params")) {
    const json& p = root["bound_params"];
    reject_unknown(p, bound_param_names(), "bound_params");
    for (const auto& item : p.items()) c.bound_params[item.key()] = get_double(item.value(), "bound_params." + item.key());
  }
  if (root.contains("signal_source")) {
    const std::string s = get_string(root["signal_source"], "signal_source");
    if (s == "class") c.signal_source = SignalSource::kClass;
    else if (s == "codebook") c.signal_source = SignalSource::kCodebook;
    else fail(ErrorCode::kConfig, "signal_source must be class or codebook");
  }
  if (root.contains("panel_size")) c.panel_size = get_uint(root["panel_size"], "panel_size");
  if (root.contains("wiener_steps")) c.wiener_steps = get_uint(root["wiener_steps"], "wiener_steps");
  if (root.contains("threads")) c.threads = get_uint(root["threads"], "threads");
  if (root.contains("partitions")) c.partitions = get_uint(root["partitions"], "partitions");
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown(s, {"axis", "values"}, "sweep");
    require(s.contains("axis") && s.contains("values"), ErrorCode::kConfig, "sweep needs axis and values");
    const std::string axis = get_string(s["axis"], "sweep.axis");
    if (axis == "d") c.axis = SweepAxis::kD;
    else if (axis == "delta") c.axis = SweepAxis::kDelta;
    else if (axis == "sigma") c.axis = SweepAxis::kSigma;
    else if (axis == "zeta") c.axis = SweepAxis::kZeta;
    else if (axis == "replicate") c.axis = SweepAxis::kReplicate;
    else fail(ErrorCode::kConfig, "sweep.axis must be d, delta, sigma, zeta or replicate");
    c.axis_values = get_double_list(s["values"], "sweep.values");
  }
  if (root.contains("deltas")) c.deltas = get_double_list(root["deltas"], "deltas");
  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown(o, {"csv", "svg", "points", "log_scale"}, "output");
    if (o.contains("csv")) c.output.csv = get_string(o["csv"], "output.csv");
    if (o.contains("svg")) c.output.svg = get_string(o["svg"], "output.svg");
    if (o.contains("points")) c.output.points = get_string(o["points"], "output.points");
    if (o.contains("log_scale")) c.output.log_scale = get_bool(o["log_scale"], "output.log_scale");
  }
  if (root.contains("timing")) c.timing = get_bool(root["timing"], "timing");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

}  // namespace cslab
