#include "epitaxy/cli/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace epitaxy::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

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

// Short label for axis ticks.
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double step = nice_step(hi - lo);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

std::vector<double> split_row(const std::string& line, std::size_t expected, std::size_t row) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string field =
        line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      std::ostringstream msg;
      msg << "profile csv row " << row << ": cannot parse '" << field << "'";
      throw ConfigError(msg.str());
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.size() != expected) {
    std::ostringstream msg;
    msg << "profile csv row " << row << ": expected " << expected << " fields, got "
        << values.size();
    throw ConfigError(msg.str());
  }
  return values;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const HeightProfile& height, std::span<const double> w) {
  if (!w.empty() && w.size() != height.size())
    throw ConfigError("profile_csv: w and height lengths differ");
  std::string out = kProfileHeader;
  out += '\n';
  for (std::size_t i = 0; i < height.size(); ++i) {
    const double r = height.radii[i];
    out += format_double(r) + ',' + format_double(w.empty() ? r * height.up[i] : w[i]) + ',' +
           format_double(height.u[i]) + ',' + format_double(height.up[i]) + ',' +
           format_double(height.upp[i]) + '\n';
  }
  return out;
}

std::string diagram_csv(const BifurcationDiagram& diagram) {
  auto field = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  std::string out = kDiagramHeader;
  out += '\n';
  for (const DiagramPoint& p : diagram.points) {
    out += format_double(p.lambda) + ',' + field(p.s_min) + ',' + field(p.s_mp) + ',' +
           field(p.energy_min) + ',' + field(p.energy_mp) + '\n';
  }
  return out;
}

HeightProfile parse_profile_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("profile csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kProfileHeader)
    throw ConfigError("profile csv header must be '" + std::string(kProfileHeader) + "'");

  HeightProfile h;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto v = split_row(line, 5, row);
    h.radii.push_back(v[0]);
    h.u.push_back(v[2]);
    h.up.push_back(v[3]);
    h.upp.push_back(v[4]);
  }
  h.validate();
  return h;
}

HeightProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_profile_csv(buf.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string render_svg(const Plot& plot) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const Series& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  const Range xr = padded(xmin, xmax);
  const Range yr = padded(ymin, ymax);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << xml_escape(plot.title) << "</text>\n";

  o << "<g stroke=\"#888\" stroke-width=\"0.5\" font-size=\"11\" fill=\"black\">\n";
  const double xs = nice_step(xr.hi - xr.lo);
  for (double t = xr.lo; t <= xr.hi + 0.5 * xs; t += xs) {
    o << "<line x1=\"" << px(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(t) << "\" y2=\""
      << kTop + ph + 5 << "\"/>";
    o << "<text x=\"" << px(t) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\" stroke=\"none\">" << tick_label(t) << "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo);
  for (double t = yr.lo; t <= yr.hi + 0.5 * ys; t += ys) {
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft << "\" y2=\""
      << py(t) << "\"/>";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4
      << "\" text-anchor=\"end\" stroke=\"none\">" << tick_label(t) << "</text>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(plot.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
    << "transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << xml_escape(plot.y_label)
    << "</text>\n";

  int legend_row = 0;
  for (const Series& s : plot.series) {
    std::ostringstream pts;
    pts.setf(std::ios::fixed);
    pts.precision(2);
    auto flush = [&] {
      if (pts.str().empty()) return;
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\" points=\""
        << pts.str() << "\"/>\n";
      pts.str("");
    };
    std::size_t n_in_run = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        if (n_in_run == 1) o << "<circle cx=\"" << px(s.x[i - 1]) << "\" cy=\"" << py(s.y[i - 1])
                             << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
        flush();
        n_in_run = 0;
        continue;
      }
      pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      ++n_in_run;
    }
    if (n_in_run == 1)
      o << "<circle cx=\"" << px(s.x.back()) << "\" cy=\"" << py(s.y.back())
        << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    flush();

    const double ly = kTop + 12 + 18 * legend_row++;
    o << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 36
      << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>";
    o << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
      << xml_escape(s.label) << "</text>\n";
  }
  if (plot.annotation) {
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"18\" fill=\"#444\">"
      << xml_escape(*plot.annotation) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Plot solution_plot(const std::optional<BranchPair>& pair, BoundaryKind bc, double lambda) {
  Plot plot;
  plot.title = std::string(to_string(bc)) + ", lambda = " + tick_label(lambda);
  plot.x_label = "r";
  plot.y_label = "u(r)";
  if (!pair) {
    plot.annotation = "no solutions";
    return plot;
  }
  auto series = [](const Branch& b, const char* color, const char* label) {
    return Series{b.height.radii, b.height.u, color, label};
  };
  plot.series.push_back(series(pair->minimum, "red", "minimum"));
  plot.series.push_back(series(pair->mountain_pass, "green", "mountain pass"));
  return plot;
}

Plot diagram_plot(const BifurcationDiagram& diagram) {
  Plot plot;
  plot.title = std::string(to_string(diagram.bc)) + " bifurcation diagram";
  plot.x_label = "lambda";
  plot.y_label = "s";
  Series lo{{}, {}, "red", "minimum"};
  Series hi{{}, {}, "green", "mountain pass"};
  for (const DiagramPoint& p : diagram.points) {
    lo.x.push_back(p.lambda);
    hi.x.push_back(p.lambda);
    lo.y.push_back(p.s_min.value_or(NAN));
    hi.y.push_back(p.s_mp.value_or(NAN));
  }
  const bool any = std::any_of(diagram.points.begin(), diagram.points.end(),
                               [](const DiagramPoint& p) { return p.has_branches(); });
  plot.series.push_back(std::move(lo));
  plot.series.push_back(std::move(hi));
  if (!any) plot.annotation = "no solutions";
  return plot;
}

}  // namespace epitaxy::cli
