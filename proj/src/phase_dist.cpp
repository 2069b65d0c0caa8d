#include "opg/phase_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "opg/numerics.hpp"
#include "opg/special_functions.hpp"

namespace opg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

double wrapped_gaussian(double theta, double theta0, double sigma) {
    double acc = 0.0;
    const int images = 2 + static_cast<int>(3.0 * sigma / kTwoPi);
    for (int m = -images; m <= images; ++m) {
        const double d = theta - theta0 + kTwoPi * m;
        acc += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    return acc / (sigma * std::sqrt(kTwoPi));
}

Complex phase_factor(double a) { return {std::cos(a), std::sin(a)}; }

}  // namespace

double PhaseDistribution::evaluate(double theta) const {
    const double t = wrap_angle(theta);
    switch (form) {
        case Form::Uniform:
            return 1.0 / kTwoPi;
        case Form::Gaussian:
            return wrapped_gaussian(t, theta0, dtheta);
        case Form::KerrCoherent:
        case Form::KerrDisplacedThermal: {
            double acc = fourier.empty() ? 0.0 : fourier[0].real();
            for (size_t y = 1; y < fourier.size(); ++y) {
                const Complex e = phase_factor(static_cast<double>(y) * t);
                acc += 2.0 * (fourier[y].real() * e.real() - fourier[y].imag() * e.imag());
            }
            return acc / kTwoPi;
        }
        case Form::Sampled: {
            const int n = static_cast<int>(samples.size());
            const double pos = t / kTwoPi * n;
            const int k0 = static_cast<int>(std::floor(pos)) % n;
            const int k1 = (k0 + 1) % n;
            const double f = pos - std::floor(pos);
            return (1.0 - f) * samples[k0] + f * samples[k1];
        }
    }
    throw std::logic_error("PhaseDistribution::evaluate: unreachable");
}

Complex PhaseDistribution::fourier_coefficient(int y) const {
    if (y < 0) return std::conj(fourier_coefficient(-y));
    switch (form) {
        case Form::Uniform:
            return y == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        case Form::Gaussian:
            return phase_factor(-y * theta0) * std::exp(-0.5 * y * y * dtheta * dtheta);
        case Form::KerrCoherent:
        case Form::KerrDisplacedThermal:
            if (static_cast<size_t>(y) < fourier.size()) return fourier[y];
            return {0.0, 0.0};
        case Form::Sampled: {
            const int n = static_cast<int>(samples.size());
            Complex acc{0.0, 0.0};
            for (int k = 0; k < n; ++k) {
                acc += samples[k] * phase_factor(-y * k * kTwoPi / n);
            }
            return acc * (kTwoPi / n);
        }
    }
    throw std::logic_error("PhaseDistribution::fourier_coefficient: unreachable");
}

PhaseDistribution kerr_phase_coherent(double alpha0, double theta0, double kerr,
                                      const SeriesControl& ctl) {
    if (alpha0 < 0.0) throw std::invalid_argument("kerr_phase_coherent: |alpha0| >= 0");
    PhaseDistribution out;
    out.form = PhaseDistribution::Form::KerrCoherent;
    out.theta0 = theta0;

    // f_y = e^{-i y theta0} e^{-a0^2} sum_{x >= y} a0^{2x}/x! e^{i y kerr (2x-1)};
    // every term is bounded by its Poisson weight, so plain double sums suffice.
    const double mean = alpha0 * alpha0;
    const int x_hi =
        static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(std::max(mean, 1.0)) + 30.0));
    std::vector<double> w(x_hi + 1);
    for (int x = 0; x <= x_hi; ++x) {
        w[x] = std::exp(-mean + (x > 0 ? 2.0 * x * std::log(alpha0) : 0.0) -
                        sf::ln_gamma(x + 1.0));
    }
    if (ctl.max_terms < x_hi) {
        throw std::runtime_error("kerr_phase_coherent: series budget exhausted");
    }
    out.fourier.reserve(256);
    int weak = 0;
    for (int y = 0; y <= x_hi; ++y) {
        Complex s{0.0, 0.0};
        for (int x = y; x <= x_hi; ++x) {
            s += w[x] * phase_factor(y * kerr * (2.0 * x - 1.0));
        }
        out.fourier.push_back(s * phase_factor(-y * theta0));
        weak = std::abs(s) < 1e-13 ? weak + 1 : 0;
        if (weak >= 3) break;
    }
    out.normalization = out.fourier[0].real();
    return out;
}

PhaseDistribution kerr_phase_displaced_thermal(double alpha0, double theta0, double nbar,
                                               double kerr, const SeriesControl& ctl) {
    if (!(nbar > 0.0) || alpha0 < 0.0) {
        throw std::invalid_argument("kerr_phase_displaced_thermal: requires nbar > 0");
    }
    const double z = alpha0 * alpha0 / (nbar * (nbar + 1.0));
    const double ln_tau = std::log(nbar / (nbar + 1.0));
    const double pre_ln = -alpha0 * alpha0 / nbar - std::log(nbar);

    // Anti-diagonal sums S_y = sum_{x >= y} K_xy e^{i y kerr (2x-1)} with
    //   K_xy = tau^{x+1} Gamma(x+y/2+1) z^{y/2} 1F1(x+y/2+1; y+1; z) / (x! y!).
    // ln K + pre_ln <= 0 for every term (each is a positive fraction of the
    // normalization), so the scaled terms sum safely in doubles.
    std::vector<Complex> sums;
    sums.reserve(128);
    long terms_used = 0;
    int weak_rows = 0;
    double running_norm = 0.0;
    const int x_cap = 2'000'000;
    for (int x = 0; x < x_cap; ++x) {
        double row_contrib = 0.0;
        double y_peak_ln = -1e308;
        for (int y = 0; y <= x; ++y) {
            const double a = x + 0.5 * y + 1.0;
            const double b = y + 1.0;
            const double ln_k = (x + 1.0) * ln_tau + sf::ln_gamma(a) - sf::ln_gamma(x + 1.0) -
                                sf::ln_gamma(b) + (z > 0.0 ? 0.5 * y * std::log(z) : (y ? -1e308 : 0.0)) +
                                sf::ln_hyp1f1(a, b, z, ctl) + pre_ln;
            if (++terms_used > ctl.max_terms) {
                throw std::runtime_error(
                    "kerr_phase_displaced_thermal: series budget exhausted at anti-diagonal " +
                    std::to_string(x));
            }
            if (ln_k > 1.0) {
                throw std::runtime_error(
                    "kerr_phase_displaced_thermal: overflow despite log-space evaluation at "
                    "anti-diagonal " +
                    std::to_string(x));
            }
            if (ln_k < y_peak_ln - 46.0 && y > 2) break;  // rest of the row is dust
            y_peak_ln = std::max(y_peak_ln, ln_k);
            const double k = std::exp(ln_k);
            if (sums.size() < static_cast<size_t>(y) + 1) {
                sums.resize(y + 1, Complex{0.0, 0.0});
            }
            sums[y] += k * phase_factor(y * kerr * (2.0 * x - 1.0));
            row_contrib += k;
        }
        running_norm += row_contrib;
        // spec'd stop rule: three consecutive anti-diagonals below 1e-12 of the total
        if (running_norm > 0.0 && row_contrib < 1e-12 * running_norm && x > 3) {
            if (++weak_rows >= 3) break;
        } else {
            weak_rows = 0;
        }
    }

    PhaseDistribution out;
    out.form = PhaseDistribution::Form::KerrDisplacedThermal;
    out.theta0 = theta0;
    out.fourier.resize(sums.size());
    for (size_t y = 0; y < sums.size(); ++y) {
        out.fourier[y] = sums[y] * phase_factor(-static_cast<double>(y) * theta0);
    }
    size_t keep = out.fourier.size();
    while (keep > 1 && std::abs(out.fourier[keep - 1]) < 1e-13) --keep;
    out.fourier.resize(keep);
    out.normalization = out.fourier[0].real();
    return out;
}

PhaseDistribution phase_marginal(const PumpModel& model, int grid_resolution, bool parallel) {
    const auto& p = model.params();
    switch (model.kind()) {
        case PumpKind::Thermal:
        case PumpKind::PhaseAveragedCoherent: {
            PhaseDistribution out;
            out.form = PhaseDistribution::Form::Uniform;
            return out;
        }
        case PumpKind::DephasedCoherent: {
            PhaseDistribution out;
            out.form = PhaseDistribution::Form::Gaussian;
            out.theta0 = p.theta0;
            out.dtheta = p.dtheta;
            return out;
        }
        case PumpKind::Coherent:
            throw std::invalid_argument(
                "phase_marginal: a coherent pump has a singular (delta) phase marginal");
        case PumpKind::KerrModulated:
            if (model.inner_kind() == PumpKind::Coherent) {
                return kerr_phase_coherent(p.alpha0, p.theta0, p.kerr);
            }
            return kerr_phase_displaced_thermal(p.alpha0, p.theta0, p.nbar, p.kerr);
        case PumpKind::DisplacedThermal:
        case PumpKind::PhaseSensitiveNoisyCoherent:
        case PumpKind::Gridded: {
            if (grid_resolution < 8) {
                throw std::invalid_argument("phase_marginal: grid resolution too small");
            }
            PhaseDistribution out;
            out.form = PhaseDistribution::Form::Sampled;
            out.samples.assign(grid_resolution, 0.0);
            if (model.kind() == PumpKind::Gridded) {
                const auto& g = model.grid();
                const auto w = g.radial_weights();
#pragma omp parallel for schedule(static) if (parallel)
                for (int k = 0; k < grid_resolution; ++k) {
                    const double theta = k * kTwoPi / grid_resolution;
                    double acc = 0.0;
                    for (int j = 0; j < g.n_radii(); ++j) {
                        acc += p_value(model, g.radii[j], theta).value * g.radii[j] * w[j];
                    }
                    out.samples[k] = acc;
                }
            } else {
                const double r_hi = model.radial_bound();
                std::vector<double> nodes, weights;
                num::gauss_legendre(220, 0.0, r_hi, nodes, weights);
#pragma omp parallel for schedule(static) if (parallel)
                for (int k = 0; k < grid_resolution; ++k) {
                    const double theta = k * kTwoPi / grid_resolution;
                    double acc = 0.0;
                    for (size_t i = 0; i < nodes.size(); ++i) {
                        acc += p_value(model, nodes[i], theta).value * nodes[i] * weights[i];
                    }
                    out.samples[k] = acc;
                }
            }
            double norm = 0.0;
            for (double v : out.samples) norm += v;
            out.normalization = norm * kTwoPi / grid_resolution;
            return out;
        }
    }
    throw std::logic_error("phase_marginal: unreachable");
}

HistogramPhase histogram_approximate(const PhaseDistribution& dist, int bins) {
    if (bins < 1) throw std::invalid_argument("histogram_approximate: bins >= 1 required");
    HistogramPhase h;
    h.midpoints.resize(bins);
    h.widths.assign(bins, kTwoPi / bins);
    h.weights.assign(bins, 0.0);
    const double width = kTwoPi / bins;
    for (int j = 0; j < bins; ++j) {
        h.midpoints[j] = (j + 0.5) * width;
    }
    switch (dist.form) {
        case PhaseDistribution::Form::Uniform:
            for (int j = 0; j < bins; ++j) h.weights[j] = 1.0 / bins;
            break;
        case PhaseDistribution::Form::Gaussian: {
            for (int j = 0; j < bins; ++j) {
                const double a = j * width, b = (j + 1) * width;
                double acc = 0.0;
                const int images = 2 + static_cast<int>(3.0 * dist.dtheta / kTwoPi);
                for (int m = -images; m <= images; ++m) {
                    const double lo =
                        (a - dist.theta0 + kTwoPi * m) / (dist.dtheta * std::numbers::sqrt2);
                    const double hi =
                        (b - dist.theta0 + kTwoPi * m) / (dist.dtheta * std::numbers::sqrt2);
                    acc += 0.5 * (std::erf(hi) - std::erf(lo));
                }
                h.weights[j] = acc;
            }
            break;
        }
        case PhaseDistribution::Form::KerrCoherent:
        case PhaseDistribution::Form::KerrDisplacedThermal: {
            // exact integral of the Fourier series over each bin
            for (int j = 0; j < bins; ++j) {
                const double a = j * width, b = (j + 1) * width;
                double acc = dist.fourier.empty() ? 0.0 : dist.fourier[0].real() * width;
                for (size_t y = 1; y < dist.fourier.size(); ++y) {
                    const double yy = static_cast<double>(y);
                    // Int_a^b e^{i y t} dt
                    const Complex seg =
                        (phase_factor(yy * b) - phase_factor(yy * a)) / Complex(0.0, yy);
                    acc += 2.0 * (dist.fourier[y] * seg).real();
                }
                h.weights[j] = acc / kTwoPi;
            }
            break;
        }
        case PhaseDistribution::Form::Sampled: {
            const int sub = std::max<int>(32, 8192 / bins);
            for (int j = 0; j < bins; ++j) {
                const double a = j * width;
                double acc = 0.0;
                for (int s = 0; s < sub; ++s) {
                    acc += dist.evaluate(a + (s + 0.5) * width / sub);
                }
                h.weights[j] = acc * width / sub;
            }
            break;
        }
    }
    return h;
}

SchmidtDecomposition schmidt_decompose(const PolarGrid& grid) {
    grid.validate();
    if (grid.n_radii() < 2 || grid.n_angles() < 2) {
        throw std::invalid_argument("schmidt_decompose: degenerate grid");
    }
    const auto wr = grid.radial_weights();
    const double dth = grid.dtheta();
    Eigen::MatrixXd m(grid.n_radii(), grid.n_angles());
    for (int j = 0; j < grid.n_radii(); ++j) {
        const double sj = std::sqrt(wr[j]);
        for (int k = 0; k < grid.n_angles(); ++k) {
            m(j, k) = grid.at(j, k) * sj * std::sqrt(dth);
        }
    }
    const auto dec = num::svd(m);
    SchmidtDecomposition out;
    const int rank = static_cast<int>(dec.singular_values.size());
    out.weights.assign(dec.singular_values.data(), dec.singular_values.data() + rank);
    out.radial_factors = dec.left;
    out.angular_factors = dec.right;
    for (int j = 0; j < grid.n_radii(); ++j) {
        out.radial_factors.row(j) /= std::sqrt(wr[j]);
    }
    out.angular_factors /= std::sqrt(dth);
    out.radii = grid.radii;
    out.angles = grid.angles;
    out.radial_weights = wr;
    return out;
}

Complex moments_from_phase(const PhaseDistribution& dist, double alpha0, int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("moments_from_phase: m, n >= 0");
    return std::pow(alpha0, m + n) * dist.fourier_coefficient(n - m);
}

Complex moments_from_phase(const HistogramPhase& hist, double alpha0, int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("moments_from_phase: m, n >= 0");
    Complex acc{0.0, 0.0};
    for (size_t j = 0; j < hist.weights.size(); ++j) {
        acc += hist.weights[j] * sf::sinc(0.5 * hist.widths[j] * (m - n)) *
               phase_factor(hist.midpoints[j] * (m - n));
    }
    return std::pow(alpha0, m + n) * acc;
}

}  // namespace opg
