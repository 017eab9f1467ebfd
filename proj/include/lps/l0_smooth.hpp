#ifndef LPS_L0_SMOOTH_HPP
#define LPS_L0_SMOOTH_HPP

#include "lps/raster.hpp"

namespace lps {

/// L0 gradient minimization smoothing (half-quadratic splitting with an
/// FFT solve for the quadratic subproblem). lambda = 0 is a pass-through.
/// Throws std::invalid_argument on non-finite parameters or kappa <= 1.
RgbRaster l0_smooth(const RgbRaster& img, double lambda, double kappa);

}  // namespace lps

#endif
