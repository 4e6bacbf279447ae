#include "tauforge/infimum_convolution.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tauforge/simd/kernels.hpp"

namespace tauforge {

namespace {

GridFunction infconv_aligned(const GridFunction& f, const GridFunction& g) {
  const std::size_t nf = f.size();
  const std::size_t ng = g.size();
  std::vector<double> frev(f.values().rbegin(), f.values().rend());
  const auto& kern = simd::kernels();
  std::vector<double> out(nf + ng - 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t j0 = k >= nf ? k - nf + 1 : 0;
    const std::size_t j1 = std::min(k, ng - 1);
    // frev[nf - 1 - k + j] = f[k - j]
    out[k] = kern.min_plus(frev.data() + (nf - 1 - k + j0), g.values().data() + j0, j1 - j0 + 1);
  }
  return GridFunction(f.lo() + g.lo(), f.hi() + g.hi(), std::move(out));
}

GridFunction infconv_interpolated(const GridFunction& f, const GridFunction& g) {
  const double lo = f.lo() + g.lo();
  const double hi = f.hi() + g.hi();
  const double coarse = std::max(f.step(), g.step());
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / coarse - 1e-9)) + 1;
  const GridSpec grid{lo, hi, std::max<std::size_t>(n, 2)};
  std::vector<double> out(grid.n, kInf);
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double x = grid.at(k);
    double best = kInf;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!std::isfinite(g[j])) continue;
      const double v = f(x - g.x(j)) + g[j];
      if (v < best) best = v;
    }
    out[k] = best;
  }
  bool any = false;
  for (double v : out) any = any || std::isfinite(v);
  if (!any) throw InvalidInput("infconv: no finite split on the output grid");
  return GridFunction(grid, std::move(out));
}

}  // namespace

GridFunction infconv(const GridFunction& f, const GridFunction& g) {
  const double hf = f.step();
  const double hg = g.step();
  if (std::abs(hf - hg) <= 1e-12 * std::max(hf, hg)) return infconv_aligned(f, g);
  return infconv_interpolated(f, g);
}

GridFunction selfconv_convex(const GridFunction& f) {
  if (!f.is_convex()) throw InvalidInput("selfconv_convex: input is not convex");
  const GridSpec grid{2.0 * f.lo(), 2.0 * f.hi(), 2 * f.size() - 1};
  std::vector<double> out(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    out[k] = (k % 2 == 0) ? 2.0 * f[k / 2] : 2.0 * f(0.5 * grid.at(k));
  }
  return GridFunction(grid, std::move(out));
}

GridFunction halving(const GridFunction& g) {
  if (!g.is_convex()) throw InvalidInput("halving: input is not convex");
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = 0.5 * g[i];
  return GridFunction(0.5 * g.lo(), 0.5 * g.hi(), std::move(out));
}

}  // namespace tauforge
