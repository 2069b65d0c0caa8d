#pragma once

#include "opg/engine.hpp"
#include "opg/pump.hpp"
#include "opg/types.hpp"

namespace opg::oracle {

struct FockTruncation {
    int pump_cutoff = 1;
    int pair_cutoff = 1;
};

/// Poisson-tail-safe truncation for a coherent pump amplitude.
FockTruncation auto_truncation(double alpha_mag);

/// Exact (to truncation) signal-idler state for a coherent pump: evolves
/// |alpha> |0 0> under the trilinear generator and traces out the pump.
/// Each conserved sector n_p + n_pairs = N is an independent tridiagonal
/// problem, evolved by a scaled Taylor propagator.
TwoModeState evolve_coherent(Complex alpha, const OpgParams& params, const FockTruncation& trunc,
                             bool parallel = true);

/// Deterministic quadrature mixture of coherent evolutions over the pump's
/// P-function (classical mixtures only: refuses signed P). radial_samples
/// controls the radial node count; ring pumps use their single radius.
TwoModeState evolve_mixture(const PumpModel& pump, const OpgParams& params,
                            const FockTruncation& trunc, int radial_samples = 48,
                            bool parallel = true);

/// Third-order negativity of the exact coherent-pump solution:
/// gt a0 + (gt a0)^2 + (gt)^3 (2/3 a0^3 - a0/6).
double third_order_negativity(double alpha0, double gt);

}  // namespace opg::oracle
