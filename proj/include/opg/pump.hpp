#pragma once

#include <memory>
#include <string>
#include <vector>

#include "opg/types.hpp"

namespace opg {

enum class PumpKind {
    Coherent,
    Thermal,
    DisplacedThermal,
    PhaseSensitiveNoisyCoherent,
    DephasedCoherent,
    PhaseAveragedCoherent,
    KerrModulated,
    Gridded,
};

std::string to_string(PumpKind kind);

/// Polar raster of a P-function. Radii ascending (uniform midpoint grid when
/// built by `uniform`), angles uniform over [0, 2pi), values stored
/// radius-major: values[j * n_angles + k] = P(radii[j], angles[k]).
struct PolarGrid {
    std::vector<double> radii;
    std::vector<double> angles;
    std::vector<double> values;

    static PolarGrid uniform(int n_radii, int n_angles, double r_max);

    int n_radii() const { return static_cast<int>(radii.size()); }
    int n_angles() const { return static_cast<int>(angles.size()); }
    double& at(int j, int k) { return values[static_cast<size_t>(j) * angles.size() + k]; }
    double at(int j, int k) const { return values[static_cast<size_t>(j) * angles.size() + k]; }
    double dtheta() const;
    /// Midpoint/trapezoid radial weights for quadrature over the raster.
    std::vector<double> radial_weights() const;
    /// sum P * r * w_r * dtheta (= integral of P over the covered disk).
    double quadrature_mass() const;
    void validate() const;
};

struct PumpParams {
    double alpha0 = 0.0;  // |alpha_0|
    double theta0 = 0.0;  // arg alpha_0, in [0, 2pi)
    double nbar = 0.0;
    double nbar1 = 0.0, nbar2 = 0.0, phi = 0.0;  // phase-sensitive noise
    double dtheta = 0.0;                         // dephasing std
    double kerr = 0.0;                           // g_K t_K

    bool operator==(const PumpParams&) const = default;
};

/// Immutable description of a pump state via its Glauber-Sudarshan function.
class PumpModel {
  public:
    static PumpModel coherent(double alpha0, double theta0 = 0.0);
    static PumpModel thermal(double nbar);
    static PumpModel displaced_thermal(double alpha0, double nbar, double theta0 = 0.0);
    static PumpModel phase_sensitive_noisy_coherent(double alpha0, double theta0, double nbar1,
                                                    double nbar2, double phi);
    static PumpModel dephased_coherent(double alpha0, double dtheta, double theta0 = 0.0);
    static PumpModel phase_averaged(double alpha0);
    static PumpModel gridded(PolarGrid grid);

    PumpKind kind() const { return kind_; }
    /// Inner kind for KerrModulated models; identical to kind() otherwise.
    PumpKind inner_kind() const { return inner_kind_; }
    const PumpParams& params() const { return params_; }
    const PolarGrid& grid() const;

    double mean_photon_number() const;
    /// mu + 8 sigma of the radial distribution; quadrature and Fock cutoffs
    /// derive from it.
    double radial_bound() const;
    /// True when P contains a radial Dirac delta (ring or point).
    bool has_singular_ring() const;

    bool operator==(const PumpModel& o) const;

    friend PumpModel kerr_modulate(const PumpModel& model, double kerr);

  private:
    PumpModel(PumpKind kind, PumpParams params);
    PumpKind kind_;
    PumpKind inner_kind_;
    PumpParams params_;
    std::shared_ptr<const PolarGrid> grid_;
    double grid_mass_ = 1.0;
};

/// Pointwise P sample. Ring kinds return the angular density at the queried
/// angle together with the ring radius; a coherent pump is a point mass.
struct PSample {
    enum class Tag { Regular, Ring, Point } tag = Tag::Regular;
    double value = 0.0;        // P(r, theta), or the angular density L(theta) on a ring
    double ring_radius = 0.0;  // Ring and Point
    double point_angle = 0.0;  // Point only
};

PSample p_value(const PumpModel& model, double radius, double angle);

/// c_mn = Int P(alpha) alpha^m (alpha*)^n d^2 alpha. Analytic per kind where
/// available; raster sum for Gridded (mass-normalized); exact Fock-trace for
/// Kerr-modulated pumps. The radial cutoff is taken from the pump model.
Complex p_moment(const PumpModel& model, int m, int n, const QuadratureSpec& spec = {});

/// Conjugation by exp(-i kerr n(n-1)). Phase-symmetric pumps and kerr = 0
/// return the input unchanged.
PumpModel kerr_modulate(const PumpModel& model, double kerr);

/// Characteristic width of the phase distribution (order-of-magnitude
/// estimator, used for validity gating only).
double phase_spread_estimate(const PumpModel& model);

}  // namespace opg
