#pragma once

#include <span>
#include <vector>

#include "opg/types.hpp"

namespace opg::sf {

/// log Gamma(x) for x > 0. Throws std::domain_error for x <= 0.
double ln_gamma(double x);

/// Confluent hypergeometric 1F1(a; b; z) for z >= 0, b not a non-positive integer.
double hyp1f1(double a, double b, double z, const SeriesControl& ctl = {});

/// log of 1F1(a; b; z) for a > 0, b > 0, z >= 0 (all series terms positive,
/// so the log-scaled sum is exact to roundoff even when the value overflows).
double ln_hyp1f1(double a, double b, double z, const SeriesControl& ctl = {});

/// Modified Bessel I_nu(z) for z >= 0 and nu an integer or half-integer >= 0.
double bessel_i(double order, double z);

/// Exponentially scaled variant e^{-z} I_nu(z); safe for z well beyond 700.
double bessel_i_scaled(double order, double z);

/// |H_n(0)| = n!/(n/2)! for even n, 0 for odd n.
double hermite_abs_at_zero(int n);

/// Dirichlet kernel D_k(x) = sin((k+1/2)x)/sin(x/2), with D_k(0 mod 2pi) = 2k+1.
double dirichlet_kernel(int k, double x);

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Fills out[d] = J_d(x) for d = 0..out.size()-1 (x >= 0), by Miller's
/// downward recurrence. Stable for all orders including d >> x.
void bessel_j_array(double x, std::span<double> out);

}  // namespace opg::sf
