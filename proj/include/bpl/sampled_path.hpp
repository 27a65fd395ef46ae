#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bpl {

/// A vector-valued path sampled on a uniform grid over [t0, t1].
///
/// Stores steps+1 nodes of dimension dim, row-major. Paths produced by the
/// samplers have steps = 2^J; the extension operators yield 2*2^J and 3*2^J
/// steps on the enlarged intervals, so `steps` is not restricted to powers
/// of two here.
class SampledPath {
 public:
  SampledPath(double t0, double t1, std::size_t dim, std::vector<double> values);

  /// Constant path on [t0, t1] with 2^J steps.
  static SampledPath constant(double t0, double t1, int J,
                              std::span<const double> value);
  /// Scalar path f(t) = t on [t0, t1] with 2^J steps.
  static SampledPath ramp(double t0, double t1, int J);
  /// Scalar indicator of [c, t1] sampled on [t0, t1] with 2^J steps.
  static SampledPath heaviside(double t0, double t1, double c, int J);

  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  double length() const { return t1_ - t0_; }
  std::size_t dim() const { return dim_; }
  std::size_t steps() const { return values_.size() / dim_ - 1; }
  std::size_t nodes() const { return values_.size() / dim_; }
  double dt() const { return (t1_ - t0_) / static_cast<double>(steps()); }
  double node_time(std::size_t i) const { return t0_ + dt() * static_cast<double>(i); }

  /// log2(steps) if steps is a power of two, -1 otherwise.
  int level() const;

  double operator()(std::size_t node, std::size_t k) const {
    return values_[node * dim_ + k];
  }
  double& at(std::size_t node, std::size_t k) { return values_[node * dim_ + k]; }
  std::span<const double> row(std::size_t node) const {
    return {values_.data() + node * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

  /// Euclidean norm of the node value.
  double row_norm(std::size_t node) const;
  /// Euclidean distance between two node values.
  double row_dist(std::size_t a, std::size_t b) const;
  double max_row_norm() const;

  /// CSV with header t,x0,...,x{d-1}, one row per node, 17 significant
  /// digits (loss-free double round trip).
  void write_csv(std::ostream& os) const;
  void write_csv_file(const std::string& path) const;
  static SampledPath read_csv(std::istream& is, const std::string& origin = "<csv>");
  static SampledPath read_csv_file(const std::string& path);

 private:
  double t0_, t1_;
  std::size_t dim_;
  std::vector<double> values_;
};

}  // namespace bpl
