#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opg/engine.hpp"
#include "opg/types.hpp"

namespace opg {

struct EntanglementReport {
    double negativity = 0.0;
    double linear_entropy = 0.0;
    double quadrature_variance_2dX = 1.0;  // <2 (Delta X_-)^2>
    double squeezing_db = 0.0;             // -10 log10 of the variance
    double negativity_uncertainty = 0.0;   // truncation-tail bound on N
    std::optional<std::string> truncation_warning;
};

/// N = sum_{m<n} |rho^{nm}| over the stored table.
double negativity(const TwoModeState& state);

/// Additive bound on the off-diagonal weight beyond the cutoff.
double negativity_uncertainty(const TwoModeState& state);

/// N = gt |c01| + (gt)^2 |c02|.
double negativity_perturbative(const PerturbativeCoefficients& c, double gt);

/// S_L = 1 - sum |rho^{nm}|^2, clamped to [0, 1]; warns on stderr when the
/// raw value leaves the interval by more than 1e-8.
double linear_entropy(const TwoModeState& state);

struct ThermalEntropyBounds {
    std::vector<double> diagonal_lower;  // lower bound on rho^{mm}, m = 0..cutoff
    double upper_linear_entropy = 1.0;
};

/// Printed bounds for the intense thermal pump:
/// rho^{mm} >= m! / (G (2m+1+1/G)^{m+1}) with G = (gt)^2 nbar.
ThermalEntropyBounds thermal_entropy_bounds(double nbar, double gt, int cutoff);

/// <2 (Delta X_-)^2> = 1 + 2 sum_n n (rho^{nn} - Re rho^{n,n-1}).
double quadrature_variance(const TwoModeState& state);

/// -10 log10(variance); variance must be positive.
double squeezing_db(double variance);

/// Closed-form noisy-coherent variance
/// e^{-2x} + nbar/(4 a0^2) [sinh 2x + 2x (2x - 1) e^{-2x}], x = gt a0.
double noisy_quadrature_correction(double alpha0, double nbar, double gt);

EntanglementReport entanglement_report(const TwoModeState& state);

}  // namespace opg
