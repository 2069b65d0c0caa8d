#pragma once

#include <complex>

namespace opg {

using Complex = std::complex<double>;

/// Controls for adaptive quadrature on the phase plane (radius x angle).
struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
    double radial_cutoff = 10.0;  // upper limit R for the |alpha| integration
};

struct IntegrationResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Truncation controls for series summation.
struct SeriesControl {
    long max_terms = 2'000'000;
    double term_tol = 1e-16;  // relative size at which terms stop contributing
};

}  // namespace opg
