#pragma once

#include <memory>

#include "opg/pump.hpp"
#include "opg/types.hpp"

namespace opg::husimi {

struct GridSpec {
    int n_radii = 400;
    int n_angles = 400;
    double r_max = 25.0;
};

/// Husimi function Q(xi) = <xi|rho|xi>/pi of a (possibly Kerr-modulated)
/// displaced thermal pump, evaluated pointwise from its number-basis matrix.
double husimi_q(const PumpModel& model, double radius, double angle);

/// Recovers the Glauber-Sudarshan function of a Kerr-modulated displaced
/// thermal pump (nbar > 0 required) on a polar raster. Route: the normally
/// ordered characteristic function is assembled from the Kerr-rotated number
/// basis expansion (equal to e^{|eta|^2} times the Fourier transform of the
/// Husimi function, but free of the amplification step), and inverted per
/// angular harmonic through Bessel transforms.
PolarGrid p_from_husimi(const PumpModel& model, const GridSpec& grid, bool parallel = true);

/// Cached variant (rasters are deterministic in (model, grid) and expensive).
std::shared_ptr<const PolarGrid> cached_p_from_husimi(const PumpModel& model,
                                                      const GridSpec& grid);

}  // namespace opg::husimi
