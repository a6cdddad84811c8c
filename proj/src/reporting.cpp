#include "qaoalab/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

namespace qaoalab {

namespace {

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Sample standard deviation; a single observation has spread 0.
double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

}  // namespace

std::vector<SchemeSummary> aggregate(const std::vector<RunRecord>& records) {
  struct Bucket {
    std::vector<double> r;
    std::vector<double> tau;
    std::vector<double> dr_over_tau;
  };
  std::map<std::tuple<std::string, std::string, int>, Bucket> buckets;
  for (const RunRecord& rec : records) {
    Bucket& b = buckets[{rec.scheme, free_layers_string(rec.free_layers), rec.acceptor_n}];
    b.r.push_back(rec.r_final);
    b.tau.push_back(static_cast<double>(rec.tau));
    if (rec.tau > 0) b.dr_over_tau.push_back(rec.delta_r / static_cast<double>(rec.tau));
  }
  std::vector<SchemeSummary> summaries;
  summaries.reserve(buckets.size());
  for (const auto& [key, b] : buckets) {
    SchemeSummary s;
    s.scheme = std::get<0>(key);
    s.free_layers = std::get<1>(key);
    s.n_nodes = std::get<2>(key);
    s.n_instances = static_cast<int>(b.r.size());
    s.mean_r = mean_of(b.r);
    s.std_r = sample_std(b.r, s.mean_r);
    s.mean_tau = mean_of(b.tau);
    s.std_tau = sample_std(b.tau, s.mean_tau);
    if (!b.dr_over_tau.empty()) {
      s.mean_dr_over_tau = mean_of(b.dr_over_tau);
      s.std_dr_over_tau = sample_std(b.dr_over_tau, *s.mean_dr_over_tau);
    }
    summaries.push_back(std::move(s));
  }
  return summaries;
}

std::string format_float(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_csv(const std::vector<RunRecord>& records,
               const std::vector<SchemeSummary>& summaries,
               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<RunRecord> ordered = records;
  sort_records_canonical(ordered);
  {
    std::ofstream out(out_dir / "records.csv", std::ios::trunc);
    if (!out) throw std::runtime_error("write_csv: cannot open records.csv");
    out << "donor_seed,acceptor_n,acceptor_seed,scheme,free_layers,r_initial,"
           "r_final,tau,delta_r,converged\n";
    for (const RunRecord& r : ordered) {
      out << r.donor_seed << ',' << r.acceptor_n << ',' << r.acceptor_seed << ','
          << r.scheme << ',' << free_layers_string(r.free_layers) << ','
          << format_float(r.r_initial) << ',' << format_float(r.r_final) << ','
          << r.tau << ',' << format_float(r.delta_r) << ','
          << (r.converged ? "true" : "false") << "\n";
    }
  }
  std::vector<SchemeSummary> sorted = summaries;
  std::sort(sorted.begin(), sorted.end(),
            [](const SchemeSummary& a, const SchemeSummary& b) {
              return std::tie(a.scheme, a.free_layers, a.n_nodes) <
                     std::tie(b.scheme, b.free_layers, b.n_nodes);
            });
  {
    std::ofstream out(out_dir / "summary.csv", std::ios::trunc);
    if (!out) throw std::runtime_error("write_csv: cannot open summary.csv");
    out << "scheme,free_layers,n_nodes,mean_r,std_r,mean_tau,std_tau,"
           "mean_dr_over_tau,std_dr_over_tau,n_instances\n";
    for (const SchemeSummary& s : sorted) {
      out << s.scheme << ',' << s.free_layers << ',' << s.n_nodes << ','
          << format_float(s.mean_r) << ',' << format_float(s.std_r) << ','
          << format_float(s.mean_tau) << ',' << format_float(s.std_tau) << ',';
      if (s.mean_dr_over_tau.has_value()) {
        out << format_float(*s.mean_dr_over_tau) << ',' << format_float(*s.std_dr_over_tau);
      } else {
        out << ',';
      }
      out << ',' << s.n_instances << "\n";
    }
  }
}

AxisRange axis_range(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 1.0};
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    const double pad = std::max(0.5, std::abs(lo) * 0.1);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

namespace {

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                          "#59a45c", "#edc948", "#b07aa1", "#9c755f"};
constexpr int kPaletteSize = 8;

std::string px(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string tick_label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

std::string escape_text(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

class SvgBuilder {
 public:
  SvgBuilder(double width, double height) : width_(width), height_(height) {}

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0) {
    body_ << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
          << "\" y2=\"" << px(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << px(stroke_width) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
          << "\" height=\"" << px(h) << "\" fill=\"" << fill << "\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill) {
    body_ << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\"" << px(r)
          << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& content,
            const std::string& anchor = "start", int size = 12,
            const std::string& extra = "") {
    body_ << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" font-family=\"sans-serif\""
          << " font-size=\"" << size << "\" text-anchor=\"" << anchor << "\"" << extra
          << ">" << escape_text(content) << "</text>\n";
  }

  void open_group(const std::string& attrs) { body_ << "<g " << attrs << ">\n"; }
  void close_group() { body_ << "</g>\n"; }

  std::string finish() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width_)
        << "\" height=\"" << px(height_) << "\" viewBox=\"0 0 " << px(width_) << " "
        << px(height_) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << px(width_) << "\" height=\"" << px(height_)
        << "\" fill=\"#ffffff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

// 1-2-5 tick spacing, at most ~6 ticks across the range.
std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
  if (span / step > 10.0) step *= 2.0;
  if (span / step > 10.0) step *= 2.5;
  if (span / step > 10.0) step *= 2.0;
  std::vector<double> ticks;
  double tick = std::ceil(lo / step) * step;
  for (; tick <= hi + step * 1e-9; tick += step) {
    ticks.push_back(std::abs(tick) < step * 1e-9 ? 0.0 : tick);
  }
  return ticks;
}

struct SeriesId {
  std::string scheme;
  std::string free_layers;

  bool operator<(const SeriesId& other) const {
    return std::tie(scheme, free_layers) < std::tie(other.scheme, other.free_layers);
  }
  std::string label() const {
    return free_layers.empty() ? scheme : scheme + " " + free_layers;
  }
};

struct LinePoint {
  double x = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
};

struct LineSeries {
  SeriesId id;
  std::vector<LinePoint> points;
};

constexpr double kChartWidth = 780.0;
constexpr double kChartHeight = 440.0;
constexpr double kMarginLeft = 78.0;
constexpr double kMarginRight = 190.0;
constexpr double kMarginTop = 46.0;
constexpr double kMarginBottom = 58.0;

std::string render_line_chart(const std::string& title, const std::string& y_label,
                              const std::vector<LineSeries>& series) {
  SvgBuilder svg(kChartWidth, kChartHeight);
  const double plot_w = kChartWidth - kMarginLeft - kMarginRight;
  const double plot_h = kChartHeight - kMarginTop - kMarginBottom;

  std::vector<double> xs;
  std::vector<double> ys;
  for (const LineSeries& s : series) {
    for (const LinePoint& pt : s.points) {
      xs.push_back(pt.x);
      ys.push_back(pt.mean - pt.std_dev);
      ys.push_back(pt.mean + pt.std_dev);
    }
  }
  const AxisRange xr = axis_range(xs);
  const AxisRange yr = axis_range(ys);
  const auto x_of = [&](double v) {
    return kMarginLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto y_of = [&](double v) {
    return kMarginTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  svg.text(kChartWidth / 2.0, kMarginTop - 18.0, title, "middle", 15);
  for (double tick : nice_ticks(yr.lo, yr.hi)) {
    const double y = y_of(tick);
    svg.line(kMarginLeft, y, kChartWidth - kMarginRight, y, "#dddddd");
    svg.text(kMarginLeft - 8.0, y + 4.0, tick_label(tick), "end", 11);
  }
  for (double tick : nice_ticks(xr.lo, xr.hi)) {
    const double x = x_of(tick);
    svg.line(x, kMarginTop + plot_h, x, kMarginTop + plot_h + 5.0, "#444444");
    svg.text(x, kMarginTop + plot_h + 20.0, tick_label(tick), "middle", 11);
  }
  svg.line(kMarginLeft, kMarginTop, kMarginLeft, kMarginTop + plot_h, "#444444");
  svg.line(kMarginLeft, kMarginTop + plot_h, kChartWidth - kMarginRight,
           kMarginTop + plot_h, "#444444");
  svg.text(kChartWidth / 2.0, kChartHeight - 14.0, "acceptor nodes", "middle", 12);
  svg.text(16.0, kMarginTop + plot_h / 2.0, y_label, "middle", 12,
           " transform=\"rotate(-90 16 " + px(kMarginTop + plot_h / 2.0) + ")\"");

  int color_index = 0;
  double legend_y = kMarginTop + 6.0;
  for (const LineSeries& s : series) {
    const std::string color = kPalette[color_index % kPaletteSize];
    ++color_index;
    svg.open_group("class=\"series\" data-name=\"" + escape_text(s.id.label()) + "\"");
    for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
      svg.line(x_of(s.points[i].x), y_of(s.points[i].mean), x_of(s.points[i + 1].x),
               y_of(s.points[i + 1].mean), color, 1.8);
    }
    for (const LinePoint& pt : s.points) {
      const double x = x_of(pt.x);
      if (pt.std_dev > 0.0) {
        const double y_hi = y_of(pt.mean + pt.std_dev);
        const double y_lo = y_of(pt.mean - pt.std_dev);
        svg.line(x, y_hi, x, y_lo, color);
        svg.line(x - 4.0, y_hi, x + 4.0, y_hi, color);
        svg.line(x - 4.0, y_lo, x + 4.0, y_lo, color);
      }
      svg.circle(x, y_of(pt.mean), 3.2, color);
    }
    svg.close_group();
    const double lx = kChartWidth - kMarginRight + 16.0;
    svg.rect(lx, legend_y, 12.0, 12.0, color);
    svg.text(lx + 18.0, legend_y + 10.0, s.id.label(), "start", 11);
    legend_y += 20.0;
  }
  return svg.finish();
}

std::string render_grouped_bars(const std::string& title,
                                const std::vector<std::uint64_t>& seeds,
                                const std::vector<SeriesId>& series,
                                const std::map<std::pair<std::string, std::uint64_t>,
                                               double>& value_of) {
  SvgBuilder svg(kChartWidth, kChartHeight);
  const double plot_w = kChartWidth - kMarginLeft - kMarginRight;
  const double plot_h = kChartHeight - kMarginTop - kMarginBottom;

  double max_r = 1.0;
  for (const auto& [key, value] : value_of) max_r = std::max(max_r, value);
  const AxisRange yr{0.0, max_r * 1.05};
  const auto y_of = [&](double v) {
    return kMarginTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  svg.text(kChartWidth / 2.0, kMarginTop - 18.0, title, "middle", 15);
  for (double tick : nice_ticks(yr.lo, yr.hi)) {
    const double y = y_of(tick);
    svg.line(kMarginLeft, y, kChartWidth - kMarginRight, y, "#dddddd");
    svg.text(kMarginLeft - 8.0, y + 4.0, tick_label(tick), "end", 11);
  }
  svg.line(kMarginLeft, kMarginTop, kMarginLeft, kMarginTop + plot_h, "#444444");
  svg.line(kMarginLeft, kMarginTop + plot_h, kChartWidth - kMarginRight,
           kMarginTop + plot_h, "#444444");
  svg.text(kChartWidth / 2.0, kChartHeight - 14.0, "acceptor seed", "middle", 12);
  svg.text(16.0, kMarginTop + plot_h / 2.0, "approximation ratio", "middle", 12,
           " transform=\"rotate(-90 16 " + px(kMarginTop + plot_h / 2.0) + ")\"");

  const double group_w = plot_w / static_cast<double>(seeds.size());
  const double bar_w = group_w * 0.8 / static_cast<double>(series.size());
  for (std::size_t g = 0; g < seeds.size(); ++g) {
    const double group_x = kMarginLeft + group_w * static_cast<double>(g);
    svg.text(group_x + group_w / 2.0, kMarginTop + plot_h + 20.0,
             std::to_string(seeds[g]), "middle", 11);
    for (std::size_t s = 0; s < series.size(); ++s) {
      const auto it = value_of.find({series[s].scheme + ":" + series[s].free_layers,
                                     seeds[g]});
      if (it == value_of.end()) continue;
      const double value = it->second;
      const double x = group_x + group_w * 0.1 + bar_w * static_cast<double>(s);
      const double y = y_of(value);
      svg.rect(x, y, bar_w, kMarginTop + plot_h - y, kPalette[s % kPaletteSize]);
    }
  }
  double legend_y = kMarginTop + 6.0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double lx = kChartWidth - kMarginRight + 16.0;
    svg.rect(lx, legend_y, 12.0, 12.0, kPalette[s % kPaletteSize]);
    svg.text(lx + 18.0, legend_y + 10.0, series[s].label(), "start", 11);
    legend_y += 20.0;
  }
  return svg.finish();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("render_figures: cannot open " + path.string());
  out << content;
  if (!out) throw std::runtime_error("render_figures: write failed for " + path.string());
}

}  // namespace

std::vector<std::string> render_figures(const std::vector<RunRecord>& records,
                                        const std::vector<SchemeSummary>& summaries,
                                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;

  // Per-seed final ratios, one chart per (node count, donor).
  std::map<std::pair<int, std::uint64_t>, std::vector<const RunRecord*>> panels;
  for (const RunRecord& r : records) {
    panels[{r.acceptor_n, r.donor_seed}].push_back(&r);
  }
  for (const auto& [panel_key, panel_records] : panels) {
    const auto [n_nodes, donor_seed] = panel_key;
    std::set<std::uint64_t> seed_set;
    std::set<SeriesId> series_set;
    std::map<std::pair<std::string, std::uint64_t>, double> value_of;
    for (const RunRecord* r : panel_records) {
      seed_set.insert(r->acceptor_seed);
      const SeriesId id{r->scheme, free_layers_string(r->free_layers)};
      series_set.insert(id);
      value_of[{id.scheme + ":" + id.free_layers, r->acceptor_seed}] = r->r_final;
    }
    const std::vector<std::uint64_t> seeds(seed_set.begin(), seed_set.end());
    const std::vector<SeriesId> series(series_set.begin(), series_set.end());
    const std::string title = "final ratio by seed, n=" + std::to_string(n_nodes) +
                              ", donor " + std::to_string(donor_seed);
    const std::string name = "r_by_seed_n" + std::to_string(n_nodes) + "_donor" +
                             std::to_string(donor_seed) + ".svg";
    write_text_file(out_dir / name, render_grouped_bars(title, seeds, series, value_of));
    written.push_back(name);
  }

  // Mean metric vs node count, one series per scheme.
  struct MetricSpec {
    const char* file;
    const char* title;
    const char* y_label;
    bool needs_dr_over_tau;
  };
  const MetricSpec metrics[] = {
      {"mean_r_vs_nodes.svg", "mean final ratio vs acceptor size",
       "mean approximation ratio", false},
      {"mean_tau_vs_nodes.svg", "mean iterations vs acceptor size", "mean iterations",
       false},
      {"mean_dr_per_tau_vs_nodes.svg", "mean improvement per iteration vs acceptor size",
       "mean delta r per iteration", true},
  };
  for (const MetricSpec& metric : metrics) {
    std::map<SeriesId, std::vector<LinePoint>> by_series;
    std::set<SeriesId> skipped;
    for (const SchemeSummary& s : summaries) {
      const SeriesId id{s.scheme, s.free_layers};
      LinePoint pt;
      pt.x = static_cast<double>(s.n_nodes);
      if (metric.needs_dr_over_tau) {
        if (!s.mean_dr_over_tau.has_value()) {
          skipped.insert(id);
          continue;
        }
        pt.mean = *s.mean_dr_over_tau;
        pt.std_dev = *s.std_dr_over_tau;
      } else if (metric.file == std::string("mean_r_vs_nodes.svg")) {
        pt.mean = s.mean_r;
        pt.std_dev = s.std_r;
      } else {
        pt.mean = s.mean_tau;
        pt.std_dev = s.std_tau;
      }
      by_series[id].push_back(pt);
    }
    for (const SeriesId& id : skipped) {
      if (by_series.find(id) == by_series.end()) {
        std::cerr << "render_figures: scheme " << id.label() << " has no data for "
                  << metric.file << "; omitted\n";
      }
    }
    std::vector<LineSeries> series;
    for (auto& [id, points] : by_series) {
      std::sort(points.begin(), points.end(),
                [](const LinePoint& a, const LinePoint& b) { return a.x < b.x; });
      series.push_back({id, std::move(points)});
    }
    write_text_file(out_dir / metric.file,
                    render_line_chart(metric.title, metric.y_label, series));
    written.push_back(metric.file);
  }
  return written;
}

}  // namespace qaoalab
