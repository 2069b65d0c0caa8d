#include "opg/measures.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "opg/special_functions.hpp"

namespace opg {

double negativity(const TwoModeState& state) {
    if (state.hermiticity_defect() > 1e-10) {
        throw std::invalid_argument("negativity: state is not Hermitian");
    }
    double acc = 0.0;
    for (int n = 1; n <= state.cutoff(); ++n) {
        for (int m = 0; m < n; ++m) acc += std::abs(state.at(n, m));
    }
    return acc;
}

double negativity_uncertainty(const TwoModeState& state) {
    // |rho^{nm}| decays (at worst) like t^{n+m} with t inferred from the
    // recorded diagonal tail: tail = t^{2N+2}/(1-t^2).
    const double tail = state.tail_bound();
    if (tail <= 0.0) return 0.0;
    const int big = 2 * state.cutoff() + 2;
    // invert tail = t^big/(1-t^2) by bisection
    double lo = 0.0, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = std::pow(mid, big) / (1.0 - mid * mid);
        (v < tail ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    if (t >= 1.0 - 1e-12) return 1e300;
    // sum_{m < n, n > N} t^{n+m} <= t^{N+1}/(1-t)^2
    return std::pow(t, state.cutoff() + 1) / ((1.0 - t) * (1.0 - t));
}

double negativity_perturbative(const PerturbativeCoefficients& c, double gt) {
    return gt * std::abs(c.c01) + gt * gt * std::abs(c.c02);
}

double linear_entropy(const TwoModeState& state) {
    double sum2 = 0.0;
    for (int n = 0; n <= state.cutoff(); ++n) {
        for (int m = 0; m <= state.cutoff(); ++m) sum2 += std::norm(state.at(n, m));
    }
    const double raw = 1.0 - sum2;
    if (raw < -1e-8 || raw > 1.0 + 1e-8) {
        std::cerr << "linear_entropy: value " << raw << " outside [0, 1]; clamping\n";
    }
    return std::min(1.0, std::max(0.0, raw));
}

ThermalEntropyBounds thermal_entropy_bounds(double nbar, double gt, int cutoff) {
    if (!(nbar > 0.0) || !(gt > 0.0) || cutoff < 0) {
        throw std::invalid_argument("thermal_entropy_bounds: requires nbar > 0, gt > 0");
    }
    const double g2 = gt * gt * nbar;
    ThermalEntropyBounds out;
    out.diagonal_lower.resize(cutoff + 1);
    double sum2 = 0.0;
    for (int m = 0; m <= cutoff; ++m) {
        const double ln_b = sf::ln_gamma(m + 1.0) - std::log(g2) -
                            (m + 1.0) * std::log(2.0 * m + 1.0 + 1.0 / g2);
        out.diagonal_lower[m] = std::exp(ln_b);
        sum2 += std::exp(2.0 * ln_b);
    }
    // the bound series converges; extend well past the stored cutoff
    for (int m = cutoff + 1; m <= cutoff + 4000; ++m) {
        const double ln_b = sf::ln_gamma(m + 1.0) - std::log(g2) -
                            (m + 1.0) * std::log(2.0 * m + 1.0 + 1.0 / g2);
        const double b2 = std::exp(2.0 * ln_b);
        sum2 += b2;
        if (b2 < 1e-18 * sum2) break;
    }
    out.upper_linear_entropy = 1.0 - sum2;
    return out;
}

double quadrature_variance(const TwoModeState& state) {
    if (state.hermiticity_defect() > 1e-10) {
        throw std::invalid_argument("quadrature_variance: state is not Hermitian");
    }
    double acc = 1.0;
    for (int n = 1; n <= state.cutoff(); ++n) {
        acc += 2.0 * n * (state.at(n, n).real() - state.at(n, n - 1).real());
    }
    return acc;
}

double squeezing_db(double variance) {
    if (!(variance > 0.0)) {
        throw std::domain_error("squeezing_db: variance must be positive");
    }
    return -10.0 * std::log10(variance);
}

double noisy_quadrature_correction(double alpha0, double nbar, double gt) {
    if (!(alpha0 > 0.0) || nbar < 0.0) {
        throw std::invalid_argument("noisy_quadrature_correction: bad parameters");
    }
    if (nbar / (alpha0 * alpha0) > 0.2) {
        throw std::invalid_argument(
            "noisy_quadrature_correction: nbar/|alpha0|^2 above 0.2 breaks the expansion");
    }
    const double x = gt * alpha0;
    return std::exp(-2.0 * x) +
           nbar / (4.0 * alpha0 * alpha0) *
               (std::sinh(2.0 * x) + 2.0 * x * (2.0 * x - 1.0) * std::exp(-2.0 * x));
}

EntanglementReport entanglement_report(const TwoModeState& state) {
    EntanglementReport rep;
    rep.negativity = negativity(state);
    rep.negativity_uncertainty = negativity_uncertainty(state);
    rep.linear_entropy = linear_entropy(state);
    rep.quadrature_variance_2dX = quadrature_variance(state);
    rep.squeezing_db = squeezing_db(rep.quadrature_variance_2dX);
    if (state.tail_bound() > 1e-9) {
        rep.truncation_warning = "pair-ladder tail bound " + std::to_string(state.tail_bound());
    }
    return rep;
}

}  // namespace opg
