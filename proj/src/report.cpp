#include "bpl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace bpl {

void ExperimentReport::check(const std::string& name, bool ok, double tolerance,
                             const std::string& detail) {
  assertions.push_back({name, ok, degraded && !ok, tolerance, detail});
}

bool ExperimentReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed || a.warning; });
}

const Table* ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["config"] = config_echo;
  j["degraded"] = degraded;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["passed"] = passed();
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions)
    j["assertions"].push_back({{"name", a.name},
                               {"passed", a.passed},
                               {"warning", a.warning},
                               {"tolerance", a.tolerance},
                               {"detail", a.detail}});
  j["fitted"] = fitted;
  j["quantiles"] = quantiles;
  j["tables"] = nlohmann::json::object();
  for (const auto& t : tables)
    j["tables"][t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  return j;
}

void ExperimentReport::print_summary(std::ostream& os) const {
  os << "experiment " << experiment << (degraded ? " (degraded smoke run)" : "") << "\n";
  for (const auto& a : assertions) {
    const char* tag = a.passed ? "PASS" : (a.warning ? "WARN" : "FAIL");
    os << "  [" << tag << "] " << a.name << ": " << a.detail
       << " (tolerance " << a.tolerance << ")\n";
  }
  for (const auto& [k, v] : fitted) os << "  fitted " << k << " = " << v << "\n";
  os << "  wall clock " << wall_clock_seconds << " s\n";
}

namespace {

void write_table_csv(const Table& t, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    f << (c ? "," : "") << t.columns[c];
  f << "\n";
  char buf[32];
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      f << (c ? "," : "") << buf;
    }
    f << "\n";
  }
}

void write_svg_plot(const ExperimentReport& rep, const PlotSpec& spec,
                    const std::string& path) {
  const Table* t = rep.table(spec.table);
  if (!t || t->rows.empty()) return;
  auto col_index = [&](const std::string& name) -> long {
    auto it = std::find(t->columns.begin(), t->columns.end(), name);
    return it == t->columns.end() ? -1 : it - t->columns.begin();
  };
  long xi = col_index(spec.x);
  if (xi < 0) return;

  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const auto& yname : spec.ys) {
    long yi = col_index(yname);
    if (yi < 0) continue;
    Series s{yname, {}};
    for (const auto& row : t->rows) {
      double y = row[static_cast<std::size_t>(yi)];
      if (spec.log_y) {
        if (y <= 0.0) continue;
        y = std::log10(y);
      }
      s.pts.push_back({row[static_cast<std::size_t>(xi)], y});
    }
    if (!s.pts.empty()) series.push_back(std::move(s));
  }
  if (series.empty()) return;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, x); xmax = std::max(xmax, x);
      ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  const double W = 640, H = 420, L = 70, B = 50, T0 = 30, R = 20;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - T0); };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
    << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  f << "<text x='" << W / 2 << "' y='18' text-anchor='middle' font-size='14'>"
    << spec.title << "</text>\n";
  f << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
    << "' stroke='black'/>\n";
  f << "<line x1='" << L << "' y1='" << T0 << "' x2='" << L << "' y2='" << H - B
    << "' stroke='black'/>\n";
  char buf[64];
  for (int k = 0; k <= 4; ++k) {
    double x = xmin + (xmax - xmin) * k / 4.0;
    double y = ymin + (ymax - ymin) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", x);
    f << "<text x='" << px(x) << "' y='" << H - B + 16
      << "' text-anchor='middle' font-size='10'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", y);
    f << "<text x='" << L - 6 << "' y='" << py(y) + 3
      << "' text-anchor='end' font-size='10'>" << buf << "</text>\n";
  }
  f << "<text x='" << (L + W - R) / 2 << "' y='" << H - 10
    << "' text-anchor='middle' font-size='11'>" << spec.x << "</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  int ci = 0;
  for (const auto& s : series) {
    const char* col = colors[ci % 5];
    f << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
    for (auto [x, y] : s.pts) f << px(x) << "," << py(y) << " ";
    f << "'/>\n";
    for (auto [x, y] : s.pts)
      f << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='2.5' fill='" << col
        << "'/>\n";
    f << "<text x='" << W - R - 4 << "' y='" << T0 + 14 * (ci + 1)
      << "' text-anchor='end' font-size='11' fill='" << col << "'>" << s.name
      << (spec.log_y ? " (log10)" : "") << "</text>\n";
    ++ci;
  }
  f << "</svg>\n";
}

}  // namespace

void ExperimentReport::write(const std::string& out_dir, bool svg) const {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/report.json");
    if (!f) throw std::runtime_error("cannot write report.json in " + out_dir);
    f << to_json().dump(1) << "\n";
  }
  for (const auto& t : tables) write_table_csv(t, out_dir + "/" + t.name + ".csv");
  if (svg)
    for (const auto& p : plots) write_svg_plot(*this, p, out_dir + "/" + p.file);
}

}  // namespace bpl
