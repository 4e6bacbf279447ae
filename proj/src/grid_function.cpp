#include "tauforge/grid_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tauforge {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text == "inf" || text == "+inf" || text == "Infinity") return kInf;
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InvalidInput("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

double GridSpec::at(std::size_t i) const {
  if (i + 1 == n) return hi;
  return lo + static_cast<double>(i) * step();
}

void GridSpec::validate() const {
  if (n < 2) throw InvalidParameter("grid needs at least 2 points");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidParameter("grid needs finite lo < hi");
  }
}

GridSpec GridSpec::parse(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) {
    throw InvalidParameter("grid spec must look like lo:hi:n, got '" + std::string(text) + "'");
  }
  GridSpec g;
  g.lo = parse_number(text.substr(0, a), "grid lo");
  g.hi = parse_number(text.substr(a + 1, b - a - 1), "grid hi");
  const double n = parse_number(text.substr(b + 1), "grid size");
  if (!(n >= 2.0) || n != std::floor(n) || n > 1e8) {
    throw InvalidParameter("grid size must be an integer >= 2");
  }
  g.n = static_cast<std::size_t>(n);
  g.validate();
  return g;
}

GridFunction::GridFunction(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), v_(std::move(values)) {
  if (v_.size() < 2) throw InvalidInput("grid function needs at least 2 samples");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidInput("grid function needs finite lo < hi");
  }
  bool any_finite = false;
  for (double v : v_) {
    if (std::isnan(v) || v == -kInf) throw InvalidInput("grid function entries must be finite or +inf");
    any_finite = any_finite || std::isfinite(v);
  }
  if (!any_finite) throw InvalidInput("grid function has no finite entry");
  h_ = (hi_ - lo_) / static_cast<double>(v_.size() - 1);
}

GridFunction GridFunction::sample(const std::function<double(double)>& f, const GridSpec& grid) {
  grid.validate();
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = f(grid.at(i));
  return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::indicator_of_zero(const GridSpec& grid) {
  grid.validate();
  if (grid.lo > 0.0 || grid.hi < 0.0) throw InvalidParameter("grid does not contain 0");
  std::vector<double> v(grid.n, kInf);
  const auto k = static_cast<std::size_t>(std::llround(-grid.lo / grid.step()));
  v[std::min(k, grid.n - 1)] = 0.0;
  return GridFunction(grid, std::move(v));
}

double GridFunction::x(std::size_t i) const {
  if (i + 1 == v_.size()) return hi_;
  return lo_ + static_cast<double>(i) * h_;
}

double GridFunction::operator()(double x) const {
  if (!(x >= lo_ && x <= hi_)) return kInf;
  const double pos = (x - lo_) / h_;
  const auto last = v_.size() - 1;
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i >= last) return v_[last];
  const double t = pos - static_cast<double>(i);
  if (t == 0.0) return v_[i];
  const double a = v_[i];
  const double b = v_[i + 1];
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return a + t * (b - a);
}

double GridFunction::extended(double x) const {
  if (x <= lo_) return v_.front();
  if (x >= hi_) return v_.back();
  return (*this)(x);
}

bool GridFunction::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double v) { return std::isfinite(v); });
}

double GridFunction::min_value() const { return *std::min_element(v_.begin(), v_.end()); }

double GridFunction::max_finite() const {
  double m = -kInf;
  for (double v : v_) {
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

bool GridFunction::is_convex(double slack) const {
  std::size_t first = 0;
  while (!std::isfinite(v_[first])) ++first;
  std::size_t last = v_.size() - 1;
  while (!std::isfinite(v_[last])) --last;
  for (std::size_t i = first; i <= last; ++i) {
    if (!std::isfinite(v_[i])) return false;
  }
  for (std::size_t i = first + 1; i < last; ++i) {
    const double scale = std::max({1.0, std::abs(v_[i - 1]), std::abs(v_[i]), std::abs(v_[i + 1])});
    if (v_[i - 1] - 2.0 * v_[i] + v_[i + 1] < -slack * scale) return false;
  }
  return true;
}

void GridFunction::write_csv(std::ostream& out) const {
  out << "x,value\n";
  char buf[64];
  for (std::size_t i = 0; i < v_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,", x(i));
    out << buf;
    if (std::isfinite(v_[i])) {
      std::snprintf(buf, sizeof buf, "%.17g", v_[i]);
      out << buf << '\n';
    } else {
      out << "inf\n";
    }
  }
}

GridFunction GridFunction::read_csv(std::istream& in) {
  std::string line;
  std::vector<double> xs;
  std::vector<double> vs;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidInput("csv line " + std::to_string(lineno) + ": expected two columns");
    }
    const std::string_view first(line.data(), comma);
    if (xs.empty() && vs.empty() && first.find_first_of("0123456789") == std::string_view::npos) {
      continue;  // header
    }
    xs.push_back(parse_number(first, "x"));
    vs.push_back(parse_number(std::string_view(line).substr(comma + 1), "value"));
  }
  if (xs.size() < 2) throw InvalidInput("csv grid function needs at least 2 rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double expect = xs.front() + static_cast<double>(i) * h;
    if (std::abs(xs[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)) + 1e-9 * std::abs(h)) {
      throw InvalidInput("csv grid is not uniform at row " + std::to_string(i + 1));
    }
  }
  return GridFunction(xs.front(), xs.back(), std::move(vs));
}

GridFunction GridFunction::read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return read_csv(in);
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw InvalidInput("sup_distance: grids differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool fa = std::isfinite(a[i]);
    const bool fb = std::isfinite(b[i]);
    if (fa != fb) return kInf;
    if (fa) d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace tauforge
