#pragma once

#include <memory>
#include <vector>

#include "opg/types.hpp"

namespace opg::fock {

/// mant * 2^exp2 with |mant| kept in [1, 2) (or zero). Covers dynamic ranges
/// far beyond double, exactly under scaling (frexp/ldexp are lossless).
struct Scaled {
    double mant = 0.0;
    long exp2 = 0;

    static Scaled zero() { return {}; }
    static Scaled one() { return {1.0, 0}; }
    static Scaled from_double(double v);
    static Scaled from_ln(double ln_mag, double sign = 1.0);
    bool is_zero() const { return mant == 0.0; }
    double ln_abs() const;
    double to_double() const;  // may under/overflow to 0/inf
    Scaled& operator*=(double v);
    Scaled& operator*=(const Scaled& o);
    Scaled& operator+=(const Scaled& o);
    void normalize();
};

/// Number-basis matrix of a displaced thermal state rho = D(a0) rho_th(nbar) D(a0)^dag
/// with a0 real >= 0 (a global pump phase theta0 enters only as e^{i theta0 (n-m)}
/// and is applied by callers). Elements are real and positive; stored as
/// ln-magnitudes. nbar = 0 degenerates to the coherent-state projector.
class DisplacedThermalFock {
  public:
    DisplacedThermalFock(double alpha0, double nbar, int cutoff);

    int cutoff() const { return cutoff_; }
    /// ln <n|rho|n+d> for 0 <= n, n+d <= cutoff (d >= 0). -inf when zero.
    double ln_element(int n, int d) const { return rows_[d].empty() ? neg_inf_ : rows_[d][n]; }
    bool has_diagonal_band(int d) const { return !rows_[d].empty(); }
    int d_max() const { return d_max_; }
    double tail_mass() const { return tail_mass_; }

    /// Largest ln-magnitude over the whole stored matrix.
    double peak_ln() const { return peak_ln_; }

  private:
    int cutoff_;
    int d_max_;
    double tail_mass_;
    double peak_ln_;
    static constexpr double neg_inf_ = -1e308;
    std::vector<std::vector<double>> rows_;  // rows_[d][n] = ln <n|rho|n+d>
};

/// Photon-number cutoff keeping the neglected tail below ~1e-12:
/// ceil(<n> + 10 sqrt(var) + 10).
int displaced_thermal_cutoff(double alpha0, double nbar);

/// ln <n|rho|n> for a single diagonal element (no full matrix build).
double displaced_thermal_ln_diag(double alpha0, double nbar, int n);

/// Shared cache: building the matrix is the expensive step, and moments,
/// rasters and validity checks all want the same one. Returns a matrix with
/// at least max(displaced_thermal_cutoff, min_cutoff) levels.
std::shared_ptr<const DisplacedThermalFock> cached_displaced_thermal(double alpha0, double nbar,
                                                                     int min_cutoff = 0);

/// Normally ordered moment tr[rho~ (a^dag)^n a^m] of the Kerr-modulated
/// displaced thermal state (kerr = g_K t_K; nbar = 0 gives the coherent case).
Complex kerr_normal_moment(double alpha0, double theta0, double nbar, double kerr, int n_dag,
                           int m_ann);

}  // namespace opg::fock
