#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "opg/types.hpp"

namespace opg::num {

using PolarFunction = std::function<Complex(double radius, double angle)>;

/// Integrates f(r, theta) over (0, radial_cutoff] x [0, 2pi).
///
/// Angle: fixed-order periodic trapezoid (spectrally accurate for smooth
/// 2pi-periodic integrands). Radius: Gauss-Legendre panels with adaptive
/// bisection. Deterministic: fixed node set and summation order for a given
/// spec. NaN from f is a hard error naming the sample point; exceeding
/// max_subdivisions returns the best estimate with converged = false.
IntegrationResult integrate_polar(const PolarFunction& f, const QuadratureSpec& spec,
                                  int angular_order = 256);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre nodes/weights mapped to [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

struct Svd {
    Eigen::VectorXd singular_values;  // non-increasing, >= 0
    Eigen::MatrixXd left;             // m x k
    Eigen::MatrixXd right;            // n x k
};

/// Thin SVD of a real matrix: m = left * diag(singular_values) * right^T.
Svd svd(const Eigen::MatrixXd& m);

/// exp(a) by scaling-and-squaring with Pade-13 approximation.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// Applies exp(-i * hamiltonian * time) to state. The hamiltonian must be
/// Hermitian within 1e-12 (relative) and the state normalized within 1e-12.
Eigen::VectorXcd unitary_evolve(const Eigen::MatrixXcd& hamiltonian, double time,
                                const Eigen::VectorXcd& state);

}  // namespace opg::num
