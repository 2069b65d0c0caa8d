#include "opg/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace opg::sf {

double ln_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("ln_gamma: requires x > 0, got " + std::to_string(x));
    }
    return std::lgamma(x);
}

namespace {

bool is_nonpositive_integer(double b) {
    return b <= 0.0 && b == std::floor(b);
}

// Scaled running sum of positive terms: tracks ln of the running maximum and
// the sum rescaled to it, so the result is exp(peak)*acc with no overflow.
struct LogSum {
    double peak = 0.0;  // ln of current scale
    double acc = 0.0;   // sum / exp(peak)
    void add(double ln_term) {
        if (ln_term > peak) {
            acc = acc * std::exp(peak - ln_term) + 1.0;
            peak = ln_term;
        } else {
            acc += std::exp(ln_term - peak);
        }
    }
    double ln_value() const { return peak + std::log(acc); }
};

// Ascending-series evaluation of ln 1F1 for a,b > 0, z >= 0. Terms are all
// positive; successive ratios are (a+j)z/((b+j)(j+1)).
double ln_hyp1f1_series(double a, double b, double z, const SeriesControl& ctl) {
    LogSum sum;
    sum.add(0.0);  // j = 0 term
    double ln_term = 0.0;
    const double ln_tol = std::log(ctl.term_tol);
    for (long j = 0; j < ctl.max_terms; ++j) {
        ln_term += std::log((a + j) * z / ((b + j) * (j + 1)));
        sum.add(ln_term);
        // terms grow until j ~ peak, then decay super-geometrically
        if (ln_term < sum.peak + ln_tol && (j + 1) * (b + j) > (a + j) * z) {
            return sum.ln_value();
        }
    }
    throw std::runtime_error("ln_hyp1f1: series did not converge within max_terms");
}

// Large-z asymptotic expansion, used only where it actually converges
// (z much larger than |a| and |b|): 1F1 ~ Gamma(b)/Gamma(a) e^z z^{a-b} S,
// S = sum_k (b-a)_k (1-a)_k / (k! z^k), truncated at the smallest term.
double ln_hyp1f1_asymptotic(double a, double b, double z) {
    double term = 1.0, s = 1.0;
    double prev = std::abs(term);
    for (int k = 0; k < 40; ++k) {
        term *= (b - a + k) * (1.0 - a + k) / ((k + 1) * z);
        if (std::abs(term) >= prev) break;  // past the optimal truncation point
        s += term;
        prev = std::abs(term);
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
    }
    return ln_gamma(b) - ln_gamma(a) + z + (a - b) * std::log(z) + std::log(s);
}

}  // namespace

double ln_hyp1f1(double a, double b, double z, const SeriesControl& ctl) {
    if (!(a > 0.0) || !(b > 0.0) || z < 0.0) {
        throw std::domain_error("ln_hyp1f1: requires a > 0, b > 0, z >= 0");
    }
    if (z == 0.0) return 0.0;
    if (z > 50.0 && z > 8.0 * (std::abs(a) + std::abs(b - a))) {
        return ln_hyp1f1_asymptotic(a, b, z);
    }
    return ln_hyp1f1_series(a, b, z, ctl);
}

double hyp1f1(double a, double b, double z, const SeriesControl& ctl) {
    if (is_nonpositive_integer(b)) {
        throw std::domain_error("hyp1f1: b must not be a non-positive integer");
    }
    if (z < 0.0) throw std::domain_error("hyp1f1: requires z >= 0");
    if (z == 0.0) return 1.0;
    if (a > 0.0 && b > 0.0) {
        return std::exp(ln_hyp1f1(a, b, z, ctl));
    }
    // General (possibly negative a): direct ascending series with term recurrence.
    double term = 1.0, s = 1.0;
    for (long j = 0; j < ctl.max_terms; ++j) {
        term *= (a + j) * z / ((b + j) * (j + 1));
        s += term;
        if (std::abs(term) < ctl.term_tol * std::abs(s) && j > z) return s;
    }
    throw std::runtime_error("hyp1f1: series did not converge within max_terms");
}

namespace {

bool valid_bessel_order(double nu) {
    const double twice = 2.0 * nu;
    return nu >= 0.0 && twice == std::floor(twice);
}

// ln I_nu(z) via the ascending series (all terms positive).
double ln_bessel_i(double nu, double z) {
    const double lh = std::log(0.5 * z);
    LogSum sum;
    double ln_term = nu * lh - ln_gamma(nu + 1.0);
    sum.add(ln_term);
    for (long k = 0; k < 2'000'000; ++k) {
        ln_term += 2.0 * lh - std::log((k + 1.0) * (k + 1.0 + nu));
        sum.add(ln_term);
        if (ln_term < sum.peak - 40.0 && (k + 1.0) * (k + 1.0 + nu) > 0.25 * z * z) {
            break;
        }
    }
    return sum.ln_value();
}

}  // namespace

double bessel_i(double order, double z) {
    if (z < 0.0) throw std::domain_error("bessel_i: requires z >= 0");
    if (!valid_bessel_order(order)) {
        throw std::domain_error("bessel_i: order must be a non-negative integer or half-integer");
    }
    if (z == 0.0) return order == 0.0 ? 1.0 : 0.0;
    return std::exp(ln_bessel_i(order, z));
}

double bessel_i_scaled(double order, double z) {
    if (z < 0.0) throw std::domain_error("bessel_i_scaled: requires z >= 0");
    if (!valid_bessel_order(order)) {
        throw std::domain_error("bessel_i_scaled: order must be a non-negative integer or half-integer");
    }
    if (z == 0.0) return order == 0.0 ? 1.0 : 0.0;
    return std::exp(ln_bessel_i(order, z) - z);
}

double hermite_abs_at_zero(int n) {
    if (n < 0) throw std::domain_error("hermite_abs_at_zero: requires n >= 0");
    if (n % 2 == 1) return 0.0;
    return std::exp(ln_gamma(n + 1.0) - ln_gamma(n / 2 + 1.0));
}

double dirichlet_kernel(int k, double x) {
    const double half = 0.5 * x;
    const double s = std::sin(half);
    // near x = 0 mod 2pi the ratio degenerates; switch to the harmonic sum
    if (std::abs(s) < 1e-8) {
        double v = 1.0;
        for (int y = 1; y <= k; ++y) v += 2.0 * std::cos(y * x);
        return v;
    }
    return std::sin((k + 0.5) * x) / s;
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

void bessel_j_array(double x, std::span<double> out) {
    if (out.empty()) return;
    if (x < 0.0) throw std::domain_error("bessel_j_array: requires x >= 0");
    const int dmax = static_cast<int>(out.size()) - 1;
    if (x == 0.0) {
        out[0] = 1.0;
        for (int d = 1; d <= dmax; ++d) out[d] = 0.0;
        return;
    }
    // Downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from a safely high
    // order, normalized by J_0 + 2(J_2 + J_4 + ...) = 1.
    const int start = dmax + static_cast<int>(x) + 30 +
                      static_cast<int>(15.0 * std::sqrt(std::max(static_cast<double>(dmax), x)));
    std::vector<double> buf(start + 2, 0.0);
    buf[start + 1] = 0.0;
    buf[start] = 1e-30;
    for (int k = start; k >= 1; --k) {
        buf[k - 1] = (2.0 * k / x) * buf[k] - buf[k + 1];
        if (std::abs(buf[k - 1]) > 1e250) {
            for (int i = k - 1; i <= start + 1; ++i) buf[i] *= 1e-250;
        }
    }
    double s = buf[0];
    for (int k = 2; k <= start; k += 2) s += 2.0 * buf[k];
    for (int d = 0; d <= dmax; ++d) out[d] = buf[d] / s;
}

}  // namespace opg::sf
