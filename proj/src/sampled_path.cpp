#include "bpl/sampled_path.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bpl {

SampledPath::SampledPath(double t0, double t1, std::size_t dim,
                         std::vector<double> values)
    : t0_(t0), t1_(t1), dim_(dim), values_(std::move(values)) {
  if (!(t1 > t0)) throw std::invalid_argument("SampledPath: require t1 > t0");
  if (dim == 0) throw std::invalid_argument("SampledPath: require dim >= 1");
  if (values_.empty() || values_.size() % dim != 0 || values_.size() / dim < 2)
    throw std::invalid_argument("SampledPath: need at least two nodes of size dim");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("SampledPath: all entries must be finite");
}

SampledPath SampledPath::constant(double t0, double t1, int J,
                                  std::span<const double> value) {
  std::size_t n = (std::size_t{1} << J) + 1;
  std::vector<double> v(n * value.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < value.size(); ++k) v[i * value.size() + k] = value[k];
  return SampledPath(t0, t1, value.size(), std::move(v));
}

SampledPath SampledPath::ramp(double t0, double t1, int J) {
  std::size_t n = (std::size_t{1} << J) + 1;
  double dt = (t1 - t0) / static_cast<double>(n - 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = t0 + dt * static_cast<double>(i);
  return SampledPath(t0, t1, 1, std::move(v));
}

SampledPath SampledPath::heaviside(double t0, double t1, double c, int J) {
  std::size_t n = (std::size_t{1} << J) + 1;
  double dt = (t1 - t0) / static_cast<double>(n - 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = (t0 + dt * static_cast<double>(i) >= c) ? 1.0 : 0.0;
  return SampledPath(t0, t1, 1, std::move(v));
}

int SampledPath::level() const {
  std::size_t s = steps();
  if ((s & (s - 1)) != 0) return -1;
  int j = 0;
  while ((std::size_t{1} << j) < s) ++j;
  return j;
}

double SampledPath::row_norm(std::size_t node) const {
  double s = 0.0;
  const double* p = values_.data() + node * dim_;
  for (std::size_t k = 0; k < dim_; ++k) s += p[k] * p[k];
  return std::sqrt(s);
}

double SampledPath::row_dist(std::size_t a, std::size_t b) const {
  double s = 0.0;
  const double* pa = values_.data() + a * dim_;
  const double* pb = values_.data() + b * dim_;
  for (std::size_t k = 0; k < dim_; ++k) {
    double d = pa[k] - pb[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double SampledPath::max_row_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < nodes(); ++i) m = std::max(m, row_norm(i));
  return m;
}

void SampledPath::write_csv(std::ostream& os) const {
  os << "t";
  for (std::size_t k = 0; k < dim_; ++k) os << ",x" << k;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < nodes(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", node_time(i));
    os << buf;
    for (std::size_t k = 0; k < dim_; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", (*this)(i, k));
      os << ',' << buf;
    }
    os << "\n";
  }
}

void SampledPath::write_csv_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(f);
}

namespace {

[[noreturn]] void parse_fail(const std::string& origin, std::size_t line,
                             const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SampledPath SampledPath::read_csv(std::istream& is, const std::string& origin) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line)) parse_fail(origin, 1, "empty file, expected header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.empty() || cols[0] != "t")
    parse_fail(origin, 1, "missing column 't' in header");
  for (std::size_t k = 1; k < cols.size(); ++k)
    if (cols[k] != "x" + std::to_string(k - 1))
      parse_fail(origin, 1, "missing column 'x" + std::to_string(k - 1) +
                                "' in header (found '" + cols[k] + "')");
  if (cols.size() < 2) parse_fail(origin, 1, "missing column 'x0' in header");
  std::size_t dim = cols.size() - 1;

  std::vector<double> times, vals;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t field = 0;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        parse_fail(origin, lineno, "cannot parse number '" + cell + "' in column '" +
                                       cols[std::min(field, cols.size() - 1)] + "'");
      (field == 0 ? times : vals).push_back(x);
      ++field;
    }
    if (field != dim + 1)
      parse_fail(origin, lineno,
                 "expected " + std::to_string(dim + 1) + " fields, got " +
                     std::to_string(field));
  }
  if (times.size() < 2) parse_fail(origin, lineno, "need at least two data rows");
  return SampledPath(times.front(), times.back(), dim, std::move(vals));
}

SampledPath SampledPath::read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_csv(f, path);
}

}  // namespace bpl
