#pragma once

#include "epmgp/gaussian.hpp"
#include "epmgp/rng.hpp"

namespace epmgp {

// Random zero-mean Gaussian: eigenvalues i.i.d. exponential(1), eigenbasis
// Haar-uniform (Gram-Schmidt orthonormalization of a standard normal
// matrix, triangular factor diagonal kept positive). Gives a much wider
// spread of condition numbers than Wishart draws.
Gaussian gen_gaussian(std::size_t n, RngStream& stream);

// Random regions anchored at a draw x0 from the Gaussian: each constraint
// is centered at c^T x0 with upper/lower offsets scale * sqrt(n) * U(0,1),
// so the region contains x0 and its size scales with dimension.
PolyhedralRegion gen_rect_region(const Gaussian& dist, RngStream& stream, double scale = 1.0);
PolyhedralRegion gen_poly_region(const Gaussian& dist, std::size_t m, RngStream& stream,
                                 double scale = 1.0);

}  // namespace epmgp
