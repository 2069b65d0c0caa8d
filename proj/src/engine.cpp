#include "opg/engine.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "opg/husimi.hpp"
#include "opg/numerics.hpp"

namespace opg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex phase_factor(double a) { return {std::cos(a), std::sin(a)}; }

Complex minus_i_pow(int k) {
    // (-i)^k for any integer k
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

// Radial window covering the pump's support (for node placement).
void radial_window(const PumpModel& pump, double& lo, double& hi) {
    constexpr double kThermalSpan = 4.5927;
    const auto& p = pump.params();
    hi = pump.radial_bound();
    switch (pump.inner_kind()) {
        case PumpKind::DisplacedThermal:
            lo = std::max(0.0, p.alpha0 - kThermalSpan * std::sqrt(p.nbar));
            break;
        case PumpKind::PhaseSensitiveNoisyCoherent:
            lo = std::max(0.0,
                          p.alpha0 - kThermalSpan * std::sqrt(std::max(p.nbar1, p.nbar2)));
            break;
        case PumpKind::Gridded:
            lo = 0.0;
            break;
        default:
            lo = 0.0;
            break;
    }
}

// Geometric tail of the pair-number ladder at fixed pump radius.
double ladder_tail(double gt_r, int cutoff) {
    const double t = std::tanh(gt_r);
    if (t >= 1.0) return 1.0;
    return std::pow(t, 2.0 * (cutoff + 1)) / (1.0 - t * t);
}

// Off-diagonal weight beyond the cutoff: sum_{m<n, n>N} t^{n+m} <= t^{N+1}/(1-t)^2.
// Keeping this small is what protects the negativity against truncation.
double ladder_offdiag_tail(double gt_r, int cutoff) {
    const double t = std::tanh(gt_r);
    if (t >= 1.0) return 1.0;
    return std::pow(t, cutoff + 1.0) / ((1.0 - t) * (1.0 - t));
}

struct RadialNodes {
    std::vector<double> r;       // node radii
    std::vector<double> mass;    // P-mass per node: Int P(r,theta) dtheta * r * w
};

// P-weighted tail bounds over the node set; used to auto-raise the cutoff.
int raise_cutoff(const RadialNodes& nodes, double gt, int start, double* tail_out) {
    int cutoff = std::max(1, start);
    for (int round = 0; round < 64; ++round) {
        double tail = 0.0, off = 0.0;
        for (size_t i = 0; i < nodes.r.size(); ++i) {
            tail += std::abs(nodes.mass[i]) * ladder_tail(gt * nodes.r[i], cutoff);
            off += std::abs(nodes.mass[i]) * ladder_offdiag_tail(gt * nodes.r[i], cutoff);
        }
        if ((tail < 1e-10 && off < 1e-8) || cutoff > 4000) {
            *tail_out = tail;
            return cutoff;
        }
        cutoff = std::max(cutoff + 4, cutoff * 2);
    }
    throw std::runtime_error("gpa_state: could not reach tail_bound < 1e-9");
}

TwoModeState coherent_gpa(double alpha0, double theta0, const OpgParams& params) {
    const double x = params.gt * alpha0;
    const double t = std::tanh(x);
    double tail = 0.0;
    int cutoff = std::max(1, params.fock_cutoff);
    while (cutoff < 4000) {
        tail = std::pow(t, 2.0 * (cutoff + 1)) / (1.0 - t * t);
        const double off = std::pow(t, cutoff + 1.0) / ((1.0 - t) * (1.0 - t));
        if (tail < 1e-10 && off < 1e-8) break;
        cutoff = std::max(cutoff + 4, cutoff * 2);
    }
    TwoModeState out(cutoff, StateForm::Gpa);
    const double sech2 = 1.0 / (std::cosh(x) * std::cosh(x));
    for (int n = 0; n <= cutoff; ++n) {
        for (int m = 0; m <= cutoff; ++m) {
            out.at(n, m) = minus_i_pow(n - m) * phase_factor(theta0 * (n - m)) *
                           std::pow(t, n + m) * sech2;
        }
    }
    out.set_tail_bound(tail);
    return out;
}

TwoModeState dephased_gpa(double alpha0, double theta0, double dtheta, const OpgParams& params) {
    TwoModeState out = coherent_gpa(alpha0, theta0, params);
    for (int n = 0; n <= out.cutoff(); ++n) {
        for (int m = 0; m <= out.cutoff(); ++m) {
            const double k = n - m;
            out.at(n, m) *= std::exp(-0.5 * k * k * dtheta * dtheta);
        }
    }
    return out;
}

// Diagonal-only table for phase-symmetric pumps from radial node sums.
TwoModeState diagonal_gpa(const RadialNodes& nodes, const OpgParams& params) {
    double tail = 0.0;
    const int cutoff = raise_cutoff(nodes, params.gt, params.fock_cutoff, &tail);
    TwoModeState out(cutoff, StateForm::Gpa);
    for (int n = 0; n <= cutoff; ++n) {
        double acc = 0.0;
        for (size_t i = 0; i < nodes.r.size(); ++i) {
            const double t = std::tanh(params.gt * nodes.r[i]);
            const double c = std::cosh(params.gt * nodes.r[i]);
            acc += nodes.mass[i] * std::pow(t, 2 * n) / (c * c);
        }
        out.at(n, n) = acc;
    }
    out.set_tail_bound(tail);
    return out;
}

// Generic table from polar nodes: per radius, angular harmonics of P; then
// rho^{nm} = (-i)^{n-m} sum_r w_r r tanh^{n+m} sech^2 h_{n-m}(r).
TwoModeState node_gpa(const std::vector<double>& radii, const std::vector<double>& rweights,
                      const std::vector<std::vector<double>>& pvals, double dtheta_weight,
                      const OpgParams& params, bool parallel, double mass_norm) {
    const int n_r = static_cast<int>(radii.size());
    const int n_th = static_cast<int>(pvals[0].size());

    RadialNodes nodes;
    nodes.r = radii;
    nodes.mass.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
        double row = 0.0;
        for (int k = 0; k < n_th; ++k) row += pvals[i][k];
        nodes.mass[i] = row * dtheta_weight * radii[i] * rweights[i] / mass_norm;
    }
    double tail = 0.0;
    const int cutoff = raise_cutoff(nodes, params.gt, params.fock_cutoff, &tail);

    // angular harmonics h_d(r) for d = 0..cutoff
    std::vector<std::vector<Complex>> harm(static_cast<size_t>(n_r));
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n_r; ++i) {
        harm[i].assign(cutoff + 1, Complex{0.0, 0.0});
        for (int d = 0; d <= cutoff; ++d) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < n_th; ++k) {
                acc += pvals[i][k] * phase_factor(d * k * kTwoPi / n_th);
            }
            harm[i][d] = acc * dtheta_weight;
        }
    }

    TwoModeState out(cutoff, StateForm::Gpa);
#pragma omp parallel for schedule(static) if (parallel)
    for (int n = 0; n <= cutoff; ++n) {
        for (int m = 0; m <= n; ++m) {
            Complex acc{0.0, 0.0};
            for (int i = 0; i < n_r; ++i) {
                const double t = std::tanh(params.gt * radii[i]);
                const double c = std::cosh(params.gt * radii[i]);
                acc += rweights[i] * radii[i] * std::pow(t, n + m) / (c * c) * harm[i][n - m];
            }
            acc /= mass_norm;
            out.at(n, m) = minus_i_pow(n - m) * acc;
            out.at(m, n) = std::conj(out.at(n, m));
        }
    }
    out.set_tail_bound(tail);
    return out;
}

}  // namespace

double TwoModeState::trace() const {
    double acc = 0.0;
    for (int n = 0; n <= cutoff_; ++n) acc += at(n, n).real();
    return acc;
}

double TwoModeState::hermiticity_defect() const {
    double worst = 0.0;
    for (int n = 0; n <= cutoff_; ++n) {
        for (int m = 0; m <= n; ++m) {
            worst = std::max(worst, std::abs(at(n, m) - std::conj(at(m, n))));
        }
    }
    return worst;
}

PerturbativeCoefficients perturbative_coefficients(const PumpModel& pump,
                                                   const QuadratureSpec& spec) {
    PerturbativeCoefficients c;
    c.c01 = p_moment(pump, 0, 1, spec);
    c.c11 = p_moment(pump, 1, 1, spec).real();
    c.c02 = p_moment(pump, 0, 2, spec);
    return c;
}

TwoModeState perturbative_state(const PumpModel& pump, const OpgParams& params) {
    const auto c = perturbative_coefficients(pump);
    const double gt = params.gt;
    if (gt * std::sqrt(std::max(0.0, c.c11)) > 0.3) {
        static std::atomic<int> warnings{0};
        const int n = ++warnings;
        if (n <= 3) {
            std::cerr << "perturbative_state: gt sqrt(c11) = " << gt * std::sqrt(c.c11)
                      << " > 0.3; the second-order block is unreliable here"
                      << (n == 3 ? " (suppressing further warnings)" : "") << "\n";
        }
    }
    TwoModeState out(2, StateForm::Perturbative);
    const Complex i{0.0, 1.0};
    out.at(0, 0) = 1.0 - gt * gt * c.c11;
    out.at(0, 1) = i * gt * c.c01;
    out.at(1, 0) = std::conj(out.at(0, 1));
    out.at(1, 1) = gt * gt * c.c11;
    out.at(0, 2) = -gt * gt * c.c02;
    out.at(2, 0) = std::conj(out.at(0, 2));
    out.set_tail_bound(0.0);
    return out;
}

TwoModeState gpa_state(const PumpModel& pump, const OpgParams& params, const QuadratureSpec& spec,
                       bool parallel) {
    (void)spec;
    const auto& p = pump.params();
    switch (pump.kind()) {
        case PumpKind::Coherent:
            return coherent_gpa(p.alpha0, p.theta0, params);
        case PumpKind::DephasedCoherent:
            return dephased_gpa(p.alpha0, p.theta0, p.dtheta, params);
        case PumpKind::PhaseAveragedCoherent: {
            RadialNodes nodes;
            nodes.r = {p.alpha0};
            nodes.mass = {1.0};
            return diagonal_gpa(nodes, params);
        }
        case PumpKind::Thermal: {
            if (p.nbar == 0.0) return coherent_gpa(0.0, 0.0, params);
            std::vector<double> r, w;
            num::gauss_legendre(400, 0.0, pump.radial_bound(), r, w);
            RadialNodes nodes;
            nodes.r = r;
            nodes.mass.resize(r.size());
            for (size_t i = 0; i < r.size(); ++i) {
                nodes.mass[i] =
                    w[i] * 2.0 / p.nbar * r[i] * std::exp(-r[i] * r[i] / p.nbar);
            }
            return diagonal_gpa(nodes, params);
        }
        case PumpKind::DisplacedThermal:
        case PumpKind::PhaseSensitiveNoisyCoherent: {
            if (pump.kind() == PumpKind::DisplacedThermal && p.nbar == 0.0) {
                return coherent_gpa(p.alpha0, p.theta0, params);
            }
            double lo = 0.0, hi = 0.0;
            radial_window(pump, lo, hi);
            std::vector<double> r, w;
            num::gauss_legendre(280, lo, hi, r, w);
            const int n_th = 256;
            std::vector<std::vector<double>> pv(r.size(), std::vector<double>(n_th));
            for (size_t i = 0; i < r.size(); ++i) {
                for (int k = 0; k < n_th; ++k) {
                    pv[i][k] = p_value(pump, r[i], k * kTwoPi / n_th).value;
                }
            }
            return node_gpa(r, w, pv, kTwoPi / n_th, params, parallel, 1.0);
        }
        case PumpKind::Gridded: {
            const auto& g = pump.grid();
            const auto w = g.radial_weights();
            std::vector<std::vector<double>> pv(g.n_radii(),
                                                std::vector<double>(g.n_angles()));
            for (int j = 0; j < g.n_radii(); ++j) {
                for (int k = 0; k < g.n_angles(); ++k) pv[j][k] = g.at(j, k);
            }
            return node_gpa(g.radii, w, pv, g.dtheta(), params, parallel,
                            g.quadrature_mass());
        }
        case PumpKind::KerrModulated: {
            if (pump.inner_kind() == PumpKind::Coherent) {
                // no Husimi route exists at nbar = 0; the factorized form is
                // exact in the radial direction (delta ring)
                return gpa_state_factorized(RadialAmplitude::ring(p.alpha0),
                                            kerr_phase_coherent(p.alpha0, p.theta0, p.kerr),
                                            params);
            }
            // amplitude-phase factorization is gated on the Schmidt ratio of
            // the rasterized P; above the gate the full node quadrature runs
            husimi::GridSpec gs;
            gs.r_max = pump.radial_bound();
            const auto grid = husimi::cached_p_from_husimi(pump, gs);
            static std::mutex gate_mu;
            static std::vector<std::pair<const PolarGrid*, double>> gate_cache;
            double ratio = -1.0;
            {
                std::lock_guard<std::mutex> lock(gate_mu);
                for (const auto& [ptr, r] : gate_cache) {
                    if (ptr == grid.get()) ratio = r;
                }
            }
            if (ratio < 0.0) {
                const auto dec = schmidt_decompose(*grid);
                ratio = dec.weights.size() > 1 ? dec.weights[1] / dec.weights[0] : 0.0;
                std::lock_guard<std::mutex> lock(gate_mu);
                if (gate_cache.size() >= 8) gate_cache.erase(gate_cache.begin());
                gate_cache.emplace_back(grid.get(), ratio);
            }
            if (ratio < 0.05) {
                return gpa_state_factorized(
                    RadialAmplitude::gaussian_ring(p.alpha0, p.nbar),
                    kerr_phase_displaced_thermal(p.alpha0, p.theta0, p.nbar, p.kerr), params);
            }
            return gpa_state(PumpModel::gridded(*grid), params, spec, parallel);
        }
    }
    throw std::logic_error("gpa_state: unreachable");
}

TwoModeState gpa_state_factorized(const RadialAmplitude& amplitude,
                                  const PhaseDistribution& phase, const OpgParams& params) {
    constexpr double kThermalSpan = 4.5927;
    // radial node set carrying the amplitude measure A(r) r dr
    RadialNodes nodes;
    std::vector<double> r, w;
    if (amplitude.kind == RadialAmplitude::Kind::Ring) {
        nodes.r = {amplitude.radius};
        nodes.mass = {1.0};
    } else {
        if (!(amplitude.radius > 0.0)) {
            throw std::invalid_argument("gpa_state_factorized: ring radius must be > 0");
        }
        const double span = kThermalSpan * std::sqrt(amplitude.nbar);
        num::gauss_legendre(280, std::max(0.0, amplitude.radius - span),
                            amplitude.radius + span, r, w);
        nodes.r = r;
        nodes.mass.resize(r.size());
        const double norm = std::sqrt(std::numbers::pi * amplitude.nbar) * amplitude.radius;
        for (size_t i = 0; i < r.size(); ++i) {
            const double d = r[i] - amplitude.radius;
            nodes.mass[i] = w[i] * std::exp(-d * d / amplitude.nbar) / norm * r[i];
        }
    }
    double tail = 0.0;
    const int cutoff = raise_cutoff(nodes, params.gt, params.fock_cutoff, &tail);

    // radial factors R_s = Int A(r) tanh^s(gt r) sech^2(gt r) r dr
    std::vector<double> rs(2 * cutoff + 1, 0.0);
    for (size_t i = 0; i < nodes.r.size(); ++i) {
        const double t = std::tanh(params.gt * nodes.r[i]);
        const double c = std::cosh(params.gt * nodes.r[i]);
        double tp = 1.0 / (c * c);
        for (int s = 0; s <= 2 * cutoff; ++s) {
            rs[s] += nodes.mass[i] * tp;
            tp *= t;
        }
    }
    TwoModeState out(cutoff, StateForm::Gpa);
    for (int n = 0; n <= cutoff; ++n) {
        for (int m = 0; m <= n; ++m) {
            const Complex v =
                minus_i_pow(n - m) * rs[n + m] * phase.fourier_coefficient(m - n);
            out.at(n, m) = v;
            out.at(m, n) = std::conj(v);
        }
    }
    out.set_tail_bound(tail);
    return out;
}

ValidityReport validity_report(const PumpModel& pump, const OpgParams& params,
                               const QuadratureSpec& spec) {
    ValidityReport rep;
    rep.gt = params.gt;
    rep.mean_pump_photons = p_moment(pump, 1, 1, spec).real();

    // 2 Int P sinh^2(gt|alpha|) d^2 alpha over the pump's radial mass profile
    auto sinh2 = [&](double radius) {
        const double s = std::sinh(params.gt * radius);
        return 2.0 * s * s;
    };
    double down = 0.0;
    if (pump.has_singular_ring()) {
        down = sinh2(pump.params().alpha0);
    } else if (pump.kind() == PumpKind::Thermal ||
               (pump.inner_kind() == PumpKind::Thermal)) {
        const double nb = pump.params().nbar;
        std::vector<double> r, w;
        num::gauss_legendre(400, 0.0, pump.radial_bound(), r, w);
        for (size_t i = 0; i < r.size(); ++i) {
            down += w[i] * (2.0 / nb) * r[i] * std::exp(-r[i] * r[i] / nb) * sinh2(r[i]);
        }
    } else if (pump.kind() == PumpKind::Gridded) {
        const auto& g = pump.grid();
        const auto w = g.radial_weights();
        double mass = g.quadrature_mass();
        for (int j = 0; j < g.n_radii(); ++j) {
            double row = 0.0;
            for (int k = 0; k < g.n_angles(); ++k) row += g.at(j, k);
            down += row * g.dtheta() * g.radii[j] * w[j] * sinh2(g.radii[j]);
        }
        down /= mass;
    } else {
        // displaced thermal / phase-sensitive families (Kerr preserves the
        // radial distribution, so this covers the modulated pumps as well)
        double lo = 0.0, hi = 0.0;
        radial_window(pump, lo, hi);
        std::vector<double> r, w;
        num::gauss_legendre(280, lo, hi, r, w);
        const int n_th = 128;
        const PumpModel base =
            pump.kind() == PumpKind::KerrModulated
                ? (pump.inner_kind() == PumpKind::Coherent
                       ? PumpModel::coherent(pump.params().alpha0, pump.params().theta0)
                       : PumpModel::displaced_thermal(pump.params().alpha0, pump.params().nbar,
                                                      pump.params().theta0))
                : pump;
        for (size_t i = 0; i < r.size(); ++i) {
            double row = 0.0;
            for (int k = 0; k < n_th; ++k) {
                row += p_value(base, r[i], k * kTwoPi / n_th).value;
            }
            down += row * (kTwoPi / n_th) * r[i] * w[i] * sinh2(r[i]);
        }
    }
    rep.downconverted_photons = down;
    rep.exp_condition = params.gt * std::exp(4.0 * params.gt * std::sqrt(rep.mean_pump_photons));
    rep.trace_distance_estimate =
        params.gt * params.gt *
        (std::exp(4.0 * params.gt * std::sqrt(rep.mean_pump_photons)) - 1.0);
    rep.intensity_ratio = rep.mean_pump_photons;
    rep.depletion_ratio =
        rep.mean_pump_photons > 0.0 ? rep.downconverted_photons / rep.mean_pump_photons : 1e300;
    rep.pump_intensity_ok = rep.mean_pump_photons >= 10.0;
    rep.no_depletion_ok = rep.depletion_ratio <= 0.1;
    rep.small_gt_ok = params.gt <= 0.1;
    rep.slow_propagator_ok = rep.exp_condition <= 0.1;
    return rep;
}

namespace {

// tanh^s(u)/cosh^2(u) and its first two u-derivatives, safe for s = 0, 1.
void ladder_profile(int s, double u, double* g, double* g1, double* g2) {
    const double t = std::tanh(u);
    const double c2 = 1.0 / (std::cosh(u) * std::cosh(u));  // = 1 - t^2
    const double om = 1.0 - t * t;
    const double ts = std::pow(t, s);
    const double tsm1 = s >= 1 ? std::pow(t, s - 1) : 0.0;
    const double tsm2 = s >= 2 ? std::pow(t, s - 2) : 0.0;
    *g = ts * c2;
    *g1 = c2 * (s * tsm1 * om - 2.0 * ts * t);
    *g2 = c2 * (s * (s - 1.0) * tsm2 * om * om - (6.0 * s + 2.0) * ts * om +
                4.0 * ts * t * t);
}

}  // namespace

TwoModeState gpa_phase_sensitive_correction(double alpha0, double theta0, double nbar1,
                                            double nbar2, double phi, const OpgParams& params) {
    if (!(alpha0 > 0.0)) {
        throw std::invalid_argument("gpa correction: requires |alpha0| > 0");
    }
    if ((nbar1 + nbar2) / (alpha0 * alpha0) > 0.2) {
        throw std::invalid_argument(
            "gpa correction: noise/|alpha0|^2 above 0.2 breaks the expansion");
    }
    const double gt = params.gt;
    const double x = gt * alpha0;
    const double t = std::tanh(x);
    double tail = 0.0;
    int cutoff = std::max(1, params.fock_cutoff);
    while (cutoff < 4000) {
        tail = std::pow(t, 2.0 * (cutoff + 1)) / (1.0 - t * t);
        const double off = std::pow(t, cutoff + 1.0) / ((1.0 - t) * (1.0 - t));
        if (tail < 1e-10 && off < 1e-8) break;
        cutoff = std::max(cutoff + 4, cutoff * 2);
    }
    TwoModeState out(cutoff, StateForm::Gpa);
    const double npl = 0.5 * (nbar1 + nbar2);
    const double nmi = 0.5 * (nbar1 - nbar2);
    for (int n = 0; n <= cutoff; ++n) {
        for (int m = 0; m <= n; ++m) {
            const int k = n - m;
            double g, g1u, g2u;
            ladder_profile(n + m, x, &g, &g1u, &g2u);
            const double g1 = gt * g1u;        // d/dr
            const double g2 = gt * gt * g2u;   // d^2/dr^2
            const double lap = g2 + g1 / alpha0 - k * k * g / (alpha0 * alpha0);
            const double a_k =
                g2 + (2.0 * k - 1.0) * g1 / alpha0 + k * (k - 2.0) * g / (alpha0 * alpha0);
            const double b_k =
                g2 - (2.0 * k + 1.0) * g1 / alpha0 + k * (k + 2.0) * g / (alpha0 * alpha0);
            const Complex dir = phase_factor(2.0 * (phi - theta0)) * a_k +
                                phase_factor(-2.0 * (phi - theta0)) * b_k;
            const Complex bracket = g + 0.25 * npl * lap + (nmi / 8.0) * dir;
            const Complex v = minus_i_pow(k) * phase_factor(theta0 * k) * bracket;
            out.at(n, m) = v;
            out.at(m, n) = std::conj(v);
        }
    }
    out.set_tail_bound(tail);
    return out;
}

TwoModeState gpa_displaced_thermal_correction(double alpha0, double theta0, double nbar,
                                              const OpgParams& params) {
    return gpa_phase_sensitive_correction(alpha0, theta0, nbar, nbar, 0.0, params);
}

}  // namespace opg
