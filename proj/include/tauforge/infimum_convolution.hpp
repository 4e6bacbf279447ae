#pragma once

#include "tauforge/grid_function.hpp"

namespace tauforge {

/// (f box g)(x) = min_y f(x - y) + g(y) on [f.lo + g.lo, f.hi + g.hi] at the coarser
/// of the two spacings. Grids with equal spacing use an exact node-aligned min-plus
/// pass; otherwise g's nodes are scanned and f is interpolated.
GridFunction infconv(const GridFunction& f, const GridFunction& g);

/// x -> 2 f(x/2) on [2 lo, 2 hi] with 2n - 1 nodes; equals f box f for convex f.
GridFunction selfconv_convex(const GridFunction& f);

/// x -> g(2x)/2 on [lo/2, hi/2]; its self-convolution gives back g for convex g.
GridFunction halving(const GridFunction& g);

}  // namespace tauforge
