#include "opg/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "opg/numerics.hpp"
#include "opg/special_functions.hpp"

namespace opg::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One conserved sector: basis |N-k>_p |k k>_{is}, k = 0..N. The generator is
// real symmetric tridiagonal with couplings h_k = gt sqrt((N-k)(k+1)).
// Propagates e_0 by e^{-i H} using Taylor steps scaled to unit norm.
std::vector<Complex> evolve_sector(int total_n, double gt) {
    const int dim = total_n + 1;
    std::vector<double> h(std::max(0, dim - 1));
    double hnorm = 0.0;
    for (int k = 0; k + 1 < dim; ++k) {
        // <k+1| H |k> = gt (k+1) sqrt(N-k): pair creation is (k+1), pump loss sqrt
        h[k] = gt * (k + 1.0) * std::sqrt(static_cast<double>(total_n - k));
        hnorm = std::max(hnorm, (k > 0 ? h[k - 1] : 0.0) + h[k]);
    }
    std::vector<Complex> psi(dim, Complex{0.0, 0.0});
    psi[0] = 1.0;
    if (dim == 1) return psi;

    const int steps = std::max(1, static_cast<int>(std::ceil(hnorm)));
    const Complex mi{0.0, -1.0};
    std::vector<Complex> term(dim), tmp(dim);
    for (int s = 0; s < steps; ++s) {
        term = psi;
        for (int order = 1; order <= 60; ++order) {
            // tmp = H term (tridiagonal application)
            for (int k = 0; k < dim; ++k) {
                Complex v{0.0, 0.0};
                if (k > 0) v += h[k - 1] * term[k - 1];
                if (k + 1 < dim) v += h[k] * term[k + 1];
                tmp[k] = v;
            }
            const Complex factor = mi / (static_cast<double>(order) * steps);
            double tnorm = 0.0;
            for (int k = 0; k < dim; ++k) {
                term[k] = factor * tmp[k];
                psi[k] += term[k];
                tnorm += std::norm(term[k]);
            }
            if (tnorm < 1e-36) break;
        }
    }
    return psi;
}

// rho^{nm} += sum_N c_N conj(c_{N-n+m}) psi^{(N)}_n conj(psi^{(N-n+m)}_m),
// assembled for a set of sector amplitude vectors and Poisson coefficients.
void assemble(TwoModeState& out, const std::vector<std::vector<Complex>>& sectors,
              const std::vector<Complex>& amp, double weight) {
    const int n_sec = static_cast<int>(sectors.size());
    const int cut = out.cutoff();
    for (int n = 0; n <= cut; ++n) {
        for (int m = 0; m <= cut; ++m) {
            Complex acc{0.0, 0.0};
            // big = pump occupation + n runs over every sector holding >= n pairs
            for (int big = n; big < n_sec; ++big) {
                const int partner = big - n + m;
                if (partner >= n_sec) break;
                acc += amp[big] * std::conj(amp[partner]) * sectors[big][n] *
                       std::conj(sectors[partner][m]);
            }
            out.at(n, m) += weight * acc;
        }
    }
}

std::vector<Complex> poisson_amplitudes(Complex alpha, int pump_cutoff, double* tail) {
    const double mag = std::abs(alpha);
    const double arg = std::arg(alpha);
    std::vector<Complex> amp(pump_cutoff + 1);
    double mass = 0.0;
    for (int n = 0; n <= pump_cutoff; ++n) {
        const double ln_mag = -0.5 * mag * mag + (n > 0 ? n * std::log(mag) : 0.0) -
                              0.5 * sf::ln_gamma(n + 1.0);
        const double a = std::exp(ln_mag);
        amp[n] = a * Complex{std::cos(n * arg), std::sin(n * arg)};
        mass += a * a;
    }
    *tail = std::max(0.0, 1.0 - mass);
    return amp;
}

}  // namespace

FockTruncation auto_truncation(double alpha_mag) {
    FockTruncation t;
    t.pump_cutoff =
        static_cast<int>(std::ceil(alpha_mag * alpha_mag + 10.0 * alpha_mag + 10.0));
    t.pair_cutoff = t.pump_cutoff;
    return t;
}

TwoModeState evolve_coherent(Complex alpha, const OpgParams& params, const FockTruncation& trunc,
                             bool parallel) {
    if (trunc.pump_cutoff < 1 || trunc.pair_cutoff < 1 ||
        trunc.pair_cutoff > trunc.pump_cutoff) {
        throw std::invalid_argument("evolve_coherent: bad truncation");
    }
    double tail = 0.0;
    const auto amp = poisson_amplitudes(alpha, trunc.pump_cutoff, &tail);
    if (tail > 1e-12) {
        throw std::invalid_argument("evolve_coherent: pump truncation tail above 1e-12");
    }
    std::vector<std::vector<Complex>> sectors(trunc.pump_cutoff + 1);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int big = 0; big <= trunc.pump_cutoff; ++big) {
        sectors[big] = evolve_sector(big, params.gt);
    }
    for (const auto& psi : sectors) {
        double norm = 0.0;
        for (const auto& v : psi) norm += std::norm(v);
        if (std::abs(norm - 1.0) > 1e-9) {
            throw std::runtime_error("evolve_coherent: norm drift above 1e-9 in a sector");
        }
    }
    TwoModeState out(trunc.pair_cutoff, StateForm::Gpa);
    assemble(out, sectors, amp, 1.0);
    out.set_tail_bound(tail);
    return out;
}

TwoModeState evolve_mixture(const PumpModel& pump, const OpgParams& params,
                            const FockTruncation& trunc, int radial_samples, bool parallel) {
    if (radial_samples < 1) throw std::invalid_argument("evolve_mixture: radial_samples >= 1");

    // deterministic polar node set with P weights (classical mixtures only)
    std::vector<double> radii, rweights;
    const int n_theta = 64;
    switch (pump.kind()) {
        case PumpKind::Coherent: {
            const auto& p = pump.params();
            return evolve_coherent(p.alpha0 * Complex{std::cos(p.theta0), std::sin(p.theta0)},
                                   params, trunc, parallel);
        }
        case PumpKind::Thermal:
        case PumpKind::DisplacedThermal:
        case PumpKind::PhaseSensitiveNoisyCoherent: {
            const double hi = pump.radial_bound();
            const double lo = 0.0;
            num::gauss_legendre(radial_samples, lo, hi, radii, rweights);
            break;
        }
        case PumpKind::DephasedCoherent:
        case PumpKind::PhaseAveragedCoherent: {
            radii = {pump.params().alpha0};
            rweights = {1.0};
            break;
        }
        default:
            throw std::invalid_argument(
                "evolve_mixture: oracle supports classical-mixture pumps only");
    }

    // angular masses per radial node
    std::vector<std::vector<double>> w_ang(radii.size(), std::vector<double>(n_theta, 0.0));
    for (size_t i = 0; i < radii.size(); ++i) {
        for (int k = 0; k < n_theta; ++k) {
            const auto s = p_value(pump, radii[i], k * kTwoPi / n_theta);
            double val = 0.0;
            if (s.tag == PSample::Tag::Regular) {
                val = s.value * radii[i] * rweights[i] * (kTwoPi / n_theta);
            } else if (s.tag == PSample::Tag::Ring) {
                val = s.value * (kTwoPi / n_theta);  // ring density integrated radially
            }
            if (val < -1e-12) {
                throw std::invalid_argument("evolve_mixture: signed P is not a mixture");
            }
            w_ang[i][k] = val;
        }
    }

    // the sector propagators depend only on gt; evolve them once and mix the
    // per-node Poisson amplitudes. Angles enter through the exact covariance
    // rho^{nm}(r e^{i theta}) = e^{i theta (n-m)} rho^{nm}(r).
    std::vector<std::vector<Complex>> sectors(trunc.pump_cutoff + 1);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int big = 0; big <= trunc.pump_cutoff; ++big) {
        sectors[big] = evolve_sector(big, params.gt);
    }
    TwoModeState out(trunc.pair_cutoff, StateForm::Gpa);
    for (size_t i = 0; i < radii.size(); ++i) {
        double tail = 0.0;
        const auto amp = poisson_amplitudes(radii[i], trunc.pump_cutoff, &tail);
        if (tail > 1e-10) {
            throw std::invalid_argument("evolve_mixture: pump truncation tail above 1e-10");
        }
        TwoModeState node(trunc.pair_cutoff, StateForm::Gpa);
        assemble(node, sectors, amp, 1.0);
        for (int n = 0; n <= out.cutoff(); ++n) {
            for (int m = 0; m <= out.cutoff(); ++m) {
                Complex ang{0.0, 0.0};
                for (int k = 0; k < n_theta; ++k) {
                    ang += w_ang[i][k] *
                           Complex{std::cos((n - m) * k * kTwoPi / n_theta),
                                   std::sin((n - m) * k * kTwoPi / n_theta)};
                }
                out.at(n, m) += ang * node.at(n, m);
            }
        }
    }
    out.set_tail_bound(0.0);
    return out;
}

double third_order_negativity(double alpha0, double gt) {
    const double x = gt * alpha0;
    return x + x * x + gt * gt * gt * (2.0 / 3.0 * alpha0 * alpha0 * alpha0 - alpha0 / 6.0);
}

}  // namespace opg::oracle
