#pragma once

#include <vector>

#include "opg/phase_dist.hpp"
#include "opg/pump.hpp"
#include "opg/types.hpp"

namespace opg {

struct OpgParams {
    double gt = 0.0;      // dimensionless coupling x time
    int fock_cutoff = 1;  // minimum pair-number cutoff; auto-raised for tail < 1e-9
};

struct PerturbativeCoefficients {
    Complex c01{0.0, 0.0};
    double c11 = 0.0;
    Complex c02{0.0, 0.0};
};

enum class StateForm { Perturbative, Gpa };

/// Two-mode signal-idler density operator on the pair ladder |n n><m m|,
/// stored as the (cutoff+1)^2 coefficient table rho^{nm}.
class TwoModeState {
  public:
    TwoModeState(int cutoff, StateForm form)
        : cutoff_(cutoff), form_(form),
          coeff_(static_cast<size_t>(cutoff + 1) * (cutoff + 1), Complex{0.0, 0.0}) {}

    int cutoff() const { return cutoff_; }
    StateForm form() const { return form_; }
    Complex& at(int n, int m) { return coeff_[static_cast<size_t>(n) * (cutoff_ + 1) + m]; }
    const Complex& at(int n, int m) const {
        return coeff_[static_cast<size_t>(n) * (cutoff_ + 1) + m];
    }
    double tail_bound() const { return tail_bound_; }
    void set_tail_bound(double t) { tail_bound_ = t; }

    double trace() const;
    double hermiticity_defect() const;  // max |rho^{nm} - conj(rho^{mn})|

  private:
    int cutoff_;
    StateForm form_;
    double tail_bound_ = 0.0;
    std::vector<Complex> coeff_;
};

/// Moments c01, c11, c02 of the pump P-function (the O(g^2 t^2) inputs).
PerturbativeCoefficients perturbative_coefficients(const PumpModel& pump,
                                                   const QuadratureSpec& spec = {});

/// Second-order 3x3 block on {|00>, |11>, |22>}. Warns (stderr) when
/// gt sqrt(c11) > 0.3 but does not refuse.
TwoModeState perturbative_state(const PumpModel& pump, const OpgParams& params);

/// Full coefficient table in the generalized parametric approximation,
/// via per-kind analytic reductions, the factorized route for Kerr pumps,
/// and weighted node sums for gridded ones.
TwoModeState gpa_state(const PumpModel& pump, const OpgParams& params,
                       const QuadratureSpec& spec = {}, bool parallel = true);

/// Radial amplitude factor of a factorized P = A(|alpha|) L(theta).
struct RadialAmplitude {
    enum class Kind { Ring, GaussianRing } kind = Kind::Ring;
    double radius = 0.0;  // ring radius |alpha0|
    double nbar = 0.0;    // Gaussian ring width parameter

    static RadialAmplitude ring(double radius) { return {Kind::Ring, radius, 0.0}; }
    static RadialAmplitude gaussian_ring(double radius, double nbar) {
        return {Kind::GaussianRing, radius, nbar};
    }
};

TwoModeState gpa_state_factorized(const RadialAmplitude& amplitude, const PhaseDistribution& phase,
                                  const OpgParams& params);

struct ValidityReport {
    double mean_pump_photons = 0.0;
    double downconverted_photons = 0.0;
    double gt = 0.0;
    double exp_condition = 0.0;            // gt exp(4 gt sqrt(<n_p>))
    double trace_distance_estimate = 0.0;  // (gt)^2 (exp(4 gt sqrt(<n_p>)) - 1)
    bool pump_intensity_ok = false;        // <n_p> >= 10
    bool no_depletion_ok = false;          // downconverted <= <n_p>/10
    bool small_gt_ok = false;              // gt <= 0.1
    bool slow_propagator_ok = false;       // exp_condition <= 0.1
    double intensity_ratio = 0.0;
    double depletion_ratio = 0.0;
};

ValidityReport validity_report(const PumpModel& pump, const OpgParams& params,
                               const QuadratureSpec& spec = {});

/// Displaced-thermal table to first order in nbar/|alpha0|^2 (Laplacian
/// correction of the coherent closed form); requires nbar/|alpha0|^2 <= 0.2.
TwoModeState gpa_displaced_thermal_correction(double alpha0, double theta0, double nbar,
                                              const OpgParams& params);

/// Directional (phase-sensitive) second-derivative correction; reduces
/// exactly to the isotropic form when nbar1 = nbar2.
TwoModeState gpa_phase_sensitive_correction(double alpha0, double theta0, double nbar1,
                                            double nbar2, double phi, const OpgParams& params);

}  // namespace opg
