#pragma once

#include <vector>

#include <Eigen/Dense>

#include "opg/pump.hpp"
#include "opg/types.hpp"

namespace opg {

/// Angular marginal L(theta) of a pump P-function, 2pi-periodic with
/// integral `normalization` (1 up to the stated tolerances).
struct PhaseDistribution {
    enum class Form { Uniform, Gaussian, KerrCoherent, KerrDisplacedThermal, Sampled };
    Form form = Form::Uniform;
    double theta0 = 0.0;
    double dtheta = 0.0;            // Gaussian width
    std::vector<Complex> fourier;   // f_y = Int L e^{-i y theta} dtheta, y = 0..K
    std::vector<double> samples;    // uniform grid over [0, 2pi)
    double normalization = 1.0;     // Int L dtheta as computed

    double evaluate(double theta) const;
    double operator()(double theta) const { return evaluate(theta); }
    /// Int L e^{-i y theta} dtheta for any integer y (conjugate symmetric).
    Complex fourier_coefficient(int y) const;
};

/// Histogram form of a phase (quasi-)distribution: bin midpoints, widths and
/// masses h_j = Int_bin L (possibly negative for quasi-distributions).
struct HistogramPhase {
    std::vector<double> midpoints;
    std::vector<double> widths;
    std::vector<double> weights;
};

/// Amplitude x phase factorization of a gridded P: weights descending,
/// factor columns orthonormal under the grid quadrature.
struct SchmidtDecomposition {
    std::vector<double> weights;       // lambda_r, descending
    Eigen::MatrixXd radial_factors;    // n_radii x rank, column r = A_r
    Eigen::MatrixXd angular_factors;   // n_angles x rank, column r = L_r
    std::vector<double> radii;
    std::vector<double> angles;
    std::vector<double> radial_weights;
};

/// L(theta) = Int P(|alpha| e^{i theta}) |alpha| d|alpha|.
PhaseDistribution phase_marginal(const PumpModel& model, int grid_resolution = 2048,
                                 bool parallel = true);

/// Phase distribution of a Kerr-modulated coherent pump: the Poisson-weighted
/// Dirichlet-kernel series.
PhaseDistribution kerr_phase_coherent(double alpha0, double theta0, double kerr,
                                      const SeriesControl& ctl = {});

/// Phase distribution of a Kerr-modulated displaced thermal pump: the
/// gamma / confluent-hypergeometric double series, summed over anti-diagonals
/// in log space.
PhaseDistribution kerr_phase_displaced_thermal(double alpha0, double theta0, double nbar,
                                               double kerr, const SeriesControl& ctl = {});

/// Bin masses h_j = Int_bin L dtheta over `bins` uniform bins.
HistogramPhase histogram_approximate(const PhaseDistribution& dist, int bins);

/// Weighted SVD of the raster P(r, theta) sqrt(w_r w_theta).
SchmidtDecomposition schmidt_decompose(const PolarGrid& grid);

/// c_mn = |alpha0|^{m+n} Int L(theta) e^{i theta (m-n)} dtheta.
Complex moments_from_phase(const PhaseDistribution& dist, double alpha0, int m, int n);
/// Exact histogram version via the sinc expression.
Complex moments_from_phase(const HistogramPhase& hist, double alpha0, int m, int n);

}  // namespace opg
