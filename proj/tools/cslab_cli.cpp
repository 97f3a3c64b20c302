// Command-line front end. Talks to the library only through cslab.h.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cslab/cslab.h"

namespace fs = std::filesystem;

namespace {

struct CliError {
  int code;
  std::string message;
};

void check(cslab_status status, const std::string& context) {
  if (status != CSLAB_OK)
    throw CliError{static_cast<int>(status), context + ": " + cslab_status_string(status) + ": " + cslab_last_error()};
}

struct ConfigDeleter {
  void operator()(cslab_config* c) const { cslab_config_free(c); }
};
struct SweepDeleter {
  void operator()(cslab_sweep* s) const { cslab_sweep_free(s); }
};
using ConfigPtr = std::unique_ptr<cslab_config, ConfigDeleter>;
using SweepPtr = std::unique_ptr<cslab_sweep, SweepDeleter>;

std::string take(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  cslab_string_free(s);
  return out;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  if (config_required) opt->required();
  app->add_option("--seed", c.seed, "master seed (overrides the config)");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--trials", c.trials, "trial count (overrides the config)")->check(CLI::PositiveNumber);
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--timing", c.timing, "record wall-clock time per trial (makes CSVs run-dependent)");
}

ConfigPtr open_config(const Common& c, const std::string& fallback_json) {
  cslab_config* raw = nullptr;
  if (!c.config.empty()) check(cslab_config_load(c.config.c_str(), &raw), "loading " + c.config);
  else check(cslab_config_parse(fallback_json.c_str(), &raw), "built-in config");
  ConfigPtr cfg(raw);
  if (c.seed) check(cslab_config_set_seed(cfg.get(), *c.seed), "--seed");
  if (c.trials) check(cslab_config_set_trials(cfg.get(), *c.trials), "--trials");
  if (c.threads) check(cslab_config_set_threads(cfg.get(), *c.threads), "--threads");
  if (c.timing) check(cslab_config_set_timing(cfg.get(), 1), "--timing");
  return cfg;
}

// Config paths win; relative ones are placed under --out. Without either the
// result goes to stdout (empty return).
std::string resolve(const Common& c, const std::string& configured, const std::string& fallback) {
  std::string name = configured.empty() ? fallback : configured;
  if (c.out.empty()) return configured;
  fs::path p(name);
  if (p.is_relative()) p = fs::path(c.out) / p;
  return p.string();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw CliError{static_cast<int>(CSLAB_ERR_IO), "cannot write " + path};
  f << text;
  if (!f) throw CliError{static_cast<int>(CSLAB_ERR_IO), "write failed for " + path};
  std::cerr << "wrote " << path << "\n";
}

struct Outputs {
  std::string csv;
  std::string svg;
  std::string points;
};

Outputs config_outputs(const cslab_config* cfg) {
  char* csv = nullptr;
  char* svg = nullptr;
  char* points = nullptr;
  check(cslab_config_output(cfg, &csv, &svg, &points), "reading output paths");
  return {take(csv), take(svg), take(points)};
}

void print_summary(const cslab_sweep* sweep) {
  std::size_t count = 0;
  check(cslab_sweep_point_count(sweep, &count), "summary");
  for (std::size_t i = 0; i < count; ++i) {
    double axis = 0, exceed = 0, mean = 0, max = 0, bound = 0, fail = 0;
    std::size_t d = 0;
    int ok = 0;
    check(cslab_sweep_point(sweep, i, &axis, &d, &exceed, &mean, &max, &bound, &fail, &ok), "summary");
    if (!ok) {
      std::fprintf(stderr, "point %zu (axis %g): failed\n", i, axis);
      continue;
    }
    std::fprintf(stderr, "point %zu: axis=%g d=%zu mean_err=%.4g max_err=%.4g bound=%.4g exceed=%.4g fail_bound=%.4g\n",
                 i, axis, d, mean, max, bound, exceed, fail);
  }
}

void run_sweep_command(const Common& c, const std::string& fallback_json, const std::string& stem, bool full) {
  const ConfigPtr cfg = open_config(c, fallback_json);
  const Outputs outs = config_outputs(cfg.get());
  cslab_sweep* raw = nullptr;
  check(cslab_sweep_run(cfg.get(), &raw), stem);
  const SweepPtr sweep(raw);
  char* text = nullptr;
  check(cslab_sweep_records_csv(sweep.get(), &text), "csv");
  emit(resolve(c, outs.csv, stem + ".csv"), take(text));
  if (full && (!c.out.empty() || !outs.points.empty())) {
    check(cslab_sweep_points_csv(sweep.get(), &text), "points csv");
    emit(resolve(c, outs.points, stem + "_points.csv"), take(text));
  }
  if (full && (!c.out.empty() || !outs.svg.empty())) {
    check(cslab_sweep_svg(sweep.get(), &text), "svg");
    emit(resolve(c, outs.svg, stem + ".svg"), take(text));
  }
  print_summary(sweep.get());
}

const char* kAnalogDemo = R"({
  "codec": {"class": "ppoly", "N": 0, "Q": 0, "rho": 1.0, "delta": 0.05},
  "regime": "analog",
  "d": 8,
  "trials": 50,
  "master_seed": 1,
  "theorem": "T14",
  "bound_params": {"tau1": 3, "tau2": 0.75}
})";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compression-based compressed sensing laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cslab_version()));

  Common rd, rec, sw, bnd, pr, an;

  auto* rd_cmd = app.add_subcommand("rd-profile", "rate-distortion profile of the configured codec");
  add_common(rd_cmd, rd, true);
  std::vector<double> deltas;
  rd_cmd->add_option("--delta", deltas, "distortion targets (default: the config's deltas)");

  auto* rec_cmd = app.add_subcommand("recover", "Monte Carlo CSP recovery trials");
  add_common(rec_cmd, rec, true);

  auto* sw_cmd = app.add_subcommand("sweep", "parameter sweep with per-point summary and SVG");
  add_common(sw_cmd, sw, true);

  auto* b_cmd = app.add_subcommand("bounds", "evaluate error / failure bounds as CSV");
  add_common(b_cmd, bnd, false);
  std::string theorem = "all";
  std::vector<std::string> assignments;
  b_cmd->add_option("--theorem", theorem, "theorem id (T3, C4, ..., T14) or all");
  b_cmd->add_option("--set", assignments, "input assignment name=value (repeatable)");

  auto* p_cmd = app.add_subcommand("pair", "indistinguishable sparse pairs for random ensembles");
  add_common(p_cmd, pr, true);

  auto* a_cmd = app.add_subcommand("analog-demo", "CSP on Wiener-process measurements");
  add_common(a_cmd, an, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rd_cmd) {
      const ConfigPtr cfg = open_config(rd, "");
      char* text = nullptr;
      check(cslab_rd_profile_csv(cfg.get(), deltas.empty() ? nullptr : deltas.data(), deltas.size(), &text),
            "rd-profile");
      emit(resolve(rd, config_outputs(cfg.get()).csv, "rd_profile.csv"), take(text));
    } else if (*rec_cmd) {
      run_sweep_command(rec, "", "recover", false);
    } else if (*sw_cmd) {
      run_sweep_command(sw, "", "sweep", true);
    } else if (*b_cmd) {
      std::string joined;
      for (const auto& a : assignments) joined += (joined.empty() ? "" : ",") + a;
      char* text = nullptr;
      check(cslab_bounds_csv(theorem.c_str(), joined.c_str(), &text), "bounds");
      emit(bnd.out.empty() ? std::string() : (fs::path(bnd.out) / "bounds.csv").string(), take(text));
    } else if (*p_cmd) {
      const ConfigPtr cfg = open_config(pr, "");
      char* text = nullptr;
      check(cslab_pair_csv(cfg.get(), &text), "pair");
      emit(resolve(pr, config_outputs(cfg.get()).csv, "pair.csv"), take(text));
    } else if (*a_cmd) {
      run_sweep_command(an, kAnalogDemo, "analog", true);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code == 0 ? 1 : e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
