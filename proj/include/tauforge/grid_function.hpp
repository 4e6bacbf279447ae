#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tauforge/errors.hpp"

namespace tauforge {

/// Uniform grid lo, lo + h, ..., hi with n points.
struct GridSpec {
  double lo = -50.0;
  double hi = 50.0;
  std::size_t n = 4096;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double at(std::size_t i) const;
  void validate() const;

  /// Parses "lo:hi:n".
  static GridSpec parse(std::string_view text);
};

/// Extended-real function sampled on a uniform grid. Entries are finite or +inf.
class GridFunction {
 public:
  GridFunction(double lo, double hi, std::vector<double> values);
  GridFunction(const GridSpec& grid, std::vector<double> values)
      : GridFunction(grid.lo, grid.hi, std::move(values)) {}

  static GridFunction sample(const std::function<double(double)>& f, const GridSpec& grid);
  /// The neutral element of infimum convolution: 0 at the node closest to 0, +inf elsewhere.
  static GridFunction indicator_of_zero(const GridSpec& grid);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return v_.size(); }
  double step() const { return h_; }
  double x(std::size_t i) const;
  GridSpec grid() const { return {lo_, hi_, v_.size()}; }
  const std::vector<double>& values() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

  /// Linear interpolation; +inf outside [lo, hi] or next to an infinite node.
  double operator()(double x) const;
  /// Interpolation with the end values continued flat outside [lo, hi].
  double extended(double x) const;

  bool all_finite() const;
  double min_value() const;
  /// Largest finite entry.
  double max_finite() const;
  /// Finite entries form one block and their second differences are >= -slack * scale.
  bool is_convex(double slack = 1e-12) const;

  void write_csv(std::ostream& out) const;
  static GridFunction read_csv(std::istream& in);
  static GridFunction read_csv_file(const std::string& path);

 private:
  double lo_;
  double hi_;
  double h_;
  std::vector<double> v_;
};

/// Largest |a - b| over nodes where both are finite; +inf if finiteness differs.
double sup_distance(const GridFunction& a, const GridFunction& b);

}  // namespace tauforge
