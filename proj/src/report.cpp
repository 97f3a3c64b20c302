#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "cslab/format.hpp"
#include "cslab/harness.hpp"

namespace cslab {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string describe_codec(const CodecDescriptor& c) {
  std::string s = "class=" + to_string(c.cls) + " n=" + format_uint(c.n) + " k=" + format_uint(c.k) +
                  " N=" + format_uint(c.max_degree) + " Q=" + format_uint(c.max_breakpoints) +
                  " rho=" + format_double(c.rho) + " delta=" + format_double(c.delta) + " cap=" + format_uint(c.cap);
  if (c.bits != 0) s += " bits=" + format_uint(c.bits);
  return s;
}

std::string metadata(const ExperimentConfig& c) {
  std::string s;
  s += "# master_seed=" + format_uint(c.master_seed) + "\n";
  s += "# regime=" + to_string(c.regime) + "\n";
  s += "# codec=" + describe_codec(c.codec) + "\n";
  s += "# noise=" + to_string(c.noise.kind) + " level=" + format_double(c.noise.level);
  if (c.noise.kind == NoiseKind::kBounded) s += " shape=" + to_string(c.noise.shape);
  s += "\n";
  s += "# theorem=" + (c.theorem ? to_string(*c.theorem) : std::string("none")) + "\n";
  for (const auto& [k, v] : c.bound_params) s += "# bound_param " + k + "=" + format_double(v) + "\n";
  if (c.budget) s += "# budget eta=" + format_double(c.budget->eta) + " epsilon=" + format_double(c.budget->epsilon) + "\n";
  s += "# axis=" + to_string(c.axis) + "\n";
  s += "# signal_source=" + to_string(c.signal_source) + "\n";
  if (c.regime == RegimeKind::kStrong) s += "# panel_size=" + format_uint(c.panel_size) + "\n";
  if (c.regime == RegimeKind::kAnalog) s += "# wiener_steps=" + format_uint(c.wiener_steps) + "\n";
  s += "# trials=" + format_uint(c.trials) + "\n";
  return s;
}

// Three significant digits, for axis labels.
std::string tick_label(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 3);
  return std::string(buf, res.ptr);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string records_csv(const SweepResult& sweep) {
  std::string s = metadata(sweep.config);
  s +=
      "trial,axis_value,ensemble_seed,signal_seed,n,d,rate_bits,delta,noise_kind,noise_level,error_l2,residual,"
      "bound_error,bound_fail_prob,within_bound,wall_ms\n";
  for (const TrialRecord& r : sweep.records) {
    s += format_uint(r.trial) + ',' + format_double(r.axis_value) + ',' + format_uint(r.ensemble_seed) + ',' +
         format_uint(r.signal_seed) + ',' + format_uint(r.n) + ',' + format_uint(r.d) + ',' +
         format_double(r.rate_bits) + ',' + format_double(r.delta) + ',' + to_string(r.noise.kind) + ',' +
         format_double(r.noise.level) + ',' + format_double(r.error_l2) + ',' + format_double(r.residual) + ',' +
         format_double(r.bound_error) + ',' + format_double(r.bound_fail_prob) + ',' + (r.within_bound ? "1" : "0") +
         ',' + format_double(r.wall_ms) + '\n';
  }
  return s;
}

std::string points_csv(const SweepResult& sweep) {
  std::string s = metadata(sweep.config);
  s +=
      "point,axis_value,d,rate_bits,delta,noise_kind,noise_level,records,exceed_rate,mean_error,max_error,"
      "bound_error,bound_fail_prob,status,note\n";
  for (const PointSummary& p : sweep.points) {
    s += format_uint(p.point) + ',' + format_double(p.axis_value) + ',' + format_uint(p.d) + ',' +
         format_double(p.rate_bits) + ',' + format_double(p.delta) + ',' + to_string(p.noise.kind) + ',' +
         format_double(p.noise.level) + ',' + format_uint(p.records) + ',' + format_double(p.exceed_rate) + ',' +
         format_double(p.mean_error) + ',' + format_double(p.max_error) + ',' + format_double(p.bound_error) + ',' +
         format_double(p.bound_fail_prob) + ',' + (p.ok ? "ok" : "failed") + ',' + csv_quote(p.note) + '\n';
  }
  return s;
}

std::string sweep_svg(const SweepResult& sweep) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 400.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 150.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  const bool log_y = sweep.config.output.log_scale;
  const bool has_axis = sweep.config.axis != SweepAxis::kNone;
  const bool has_bound = sweep.config.theorem.has_value();

  std::vector<const PointSummary*> pts;
  for (const auto& p : sweep.points)
    if (p.ok && p.records > 0) pts.push_back(&p);

  auto x_of = [&](const PointSummary& p) { return has_axis ? p.axis_value : static_cast<double>(p.point); };
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  auto take_y = [&](double v) {
    if (!std::isfinite(v) || (log_y && v <= 0.0)) return;
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  };
  for (const auto* p : pts) {
    xmin = std::min(xmin, x_of(*p));
    xmax = std::max(xmax, x_of(*p));
    take_y(p->mean_error);
    take_y(p->max_error);
    if (has_bound) take_y(p->bound_error);
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0;
  if (!std::isfinite(ymin)) ymin = log_y ? 1e-3 : 0.0, ymax = 1.0;
  if (!log_y) ymin = std::min(ymin, 0.0);
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) {
    if (log_y) ymin /= 10.0, ymax *= 10.0;
    else ymax = ymin + 1.0;
  }
  const double floor_y = ymin;
  auto ty = [&](double v) { return log_y ? std::log10(std::max(v, floor_y)) : v; };
  const double y0 = ty(ymin);
  const double y1 = ty(ymax);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return format_fixed(kLeft + (x - xmin) / (xmax - xmin) * plot_w, 2); };
  auto py = [&](double y) { return format_fixed(kTop + plot_h - (ty(y) - y0) / (y1 - y0) * plot_h, 2); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\" "
       "font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  const std::string title = "CSP recovery, " + to_string(sweep.config.regime) + " regime, " +
                            to_string(sweep.config.codec.cls) + " codec, seed " + format_uint(sweep.config.master_seed);
  s += "<text x=\"" + format_fixed(kLeft, 2) + "\" y=\"22\" font-size=\"13\">" + xml_escape(title) + "</text>\n";
  s += "<rect x=\"" + format_fixed(kLeft, 2) + "\" y=\"" + format_fixed(kTop, 2) + "\" width=\"" +
       format_fixed(plot_w, 2) + "\" height=\"" + format_fixed(plot_h, 2) + "\" fill=\"none\" stroke=\"#333\"/>\n";

  // Ticks: five on x, five on y (per decade when logarithmic).
  for (int i = 0; i <= 4; ++i) {
    const double x = xmin + (xmax - xmin) * i / 4.0;
    s += "<text x=\"" + px(x) + "\" y=\"" + format_fixed(kTop + plot_h + 16.0, 2) + "\" text-anchor=\"middle\">" +
         tick_label(x) + "</text>\n";
    const double yt = y0 + (y1 - y0) * i / 4.0;
    const double y = log_y ? std::pow(10.0, yt) : yt;
    s += "<text x=\"" + format_fixed(kLeft - 6.0, 2) + "\" y=\"" + py(y) + "\" text-anchor=\"end\">" + tick_label(y) +
         "</text>\n";
    s += "<line x1=\"" + format_fixed(kLeft, 2) + "\" x2=\"" + format_fixed(kLeft + plot_w, 2) + "\" y1=\"" + py(y) +
         "\" y2=\"" + py(y) + "\" stroke=\"#ddd\"/>\n";
  }
  s += "<text x=\"" + format_fixed(kLeft + plot_w / 2.0, 2) + "\" y=\"" + format_fixed(kHeight - 12.0, 2) +
       "\" text-anchor=\"middle\">" + xml_escape(has_axis ? to_string(sweep.config.axis) : std::string("point")) +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + format_fixed(kTop + plot_h / 2.0, 2) + "\" transform=\"rotate(-90 16 " +
       format_fixed(kTop + plot_h / 2.0, 2) + ")\" text-anchor=\"middle\">" +
       std::string(log_y ? "l2 error (log)" : "l2 error") + "</text>\n";

  struct Series {
    const char* name;
    const char* color;
    const char* dash;
    double PointSummary::*field;
  };
  std::vector<Series> series{{"mean error", "#1f77b4", "", &PointSummary::mean_error},
                             {"max error", "#ff7f0e", "", &PointSummary::max_error}};
  if (has_bound) series.push_back({"bound", "#000000", " stroke-dasharray=\"6 4\"", &PointSummary::bound_error});

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& ser = series[k];
    std::string path;
    for (const auto* p : pts) {
      const double v = p->*ser.field;
      if (!std::isfinite(v)) continue;
      path += (path.empty() ? "M" : " L") + px(x_of(*p)) + " " + py(v);
    }
    if (!path.empty())
      s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + ser.color + "\" stroke-width=\"1.5\"" + ser.dash +
           "/>\n";
    for (const auto* p : pts) {
      const double v = p->*ser.field;
      if (!std::isfinite(v)) continue;
      s += "<circle cx=\"" + px(x_of(*p)) + "\" cy=\"" + py(v) + "\" r=\"3\" fill=\"" + ser.color + "\"/>\n";
    }
    const double ly = kTop + 12.0 + 18.0 * static_cast<double>(k);
    s += "<line x1=\"" + format_fixed(kWidth - kRight + 12.0, 2) + "\" x2=\"" + format_fixed(kWidth - kRight + 36.0, 2) +
         "\" y1=\"" + format_fixed(ly, 2) + "\" y2=\"" + format_fixed(ly, 2) + "\" stroke=\"" + ser.color +
         "\" stroke-width=\"1.5\"" + ser.dash + "/>\n";
    s += "<text x=\"" + format_fixed(kWidth - kRight + 42.0, 2) + "\" y=\"" + format_fixed(ly + 4.0, 2) + "\">" +
         ser.name + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_svg(const SweepResult& sweep, const std::string& path) { write_text_file(path, sweep_svg(sweep)); }

std::string rd_profile_csv(const CodecDescriptor& codec, const std::vector<RateDistortionPoint>& points,
                           std::uint64_t master_seed) {
  std::string s = "# master_seed=" + format_uint(master_seed) + "\n# codec=" + describe_codec(codec) + "\n";
  for (const auto& p : points)
    if (!p.available) s += "# unavailable delta=" + format_double(p.delta) + ": " + p.note + "\n";
  s += "delta,rate_bits,alpha_hat\n";
  for (const auto& p : points) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s += format_double(p.delta) + ',' + format_double(p.available ? p.rate_bits : nan) + ',' +
         format_double(p.available ? p.alpha_hat : nan) + '\n';
  }
  return s;
}

}  // namespace cslab
