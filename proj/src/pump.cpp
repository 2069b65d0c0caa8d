#include "opg/pump.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "opg/fock.hpp"

namespace opg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1.0);
    return v;
}

double double_factorial_odd(int p) {  // (p-1)!! for even p >= 0
    double v = 1.0;
    for (int i = p - 1; i >= 1; i -= 2) v *= i;
    return v;
}

// Wrapped Gaussian density on the circle.
double wrapped_gaussian(double theta, double theta0, double sigma) {
    double acc = 0.0;
    const int images = 2 + static_cast<int>(3.0 * sigma / kTwoPi);
    for (int m = -images; m <= images; ++m) {
        const double d = theta - theta0 + kTwoPi * m;
        acc += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    return acc / (sigma * std::sqrt(kTwoPi));
}

Complex phase_factor(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

std::string to_string(PumpKind kind) {
    switch (kind) {
        case PumpKind::Coherent: return "coherent";
        case PumpKind::Thermal: return "thermal";
        case PumpKind::DisplacedThermal: return "displaced_thermal";
        case PumpKind::PhaseSensitiveNoisyCoherent: return "phase_sensitive_noisy_coherent";
        case PumpKind::DephasedCoherent: return "dephased_coherent";
        case PumpKind::PhaseAveragedCoherent: return "phase_averaged_coherent";
        case PumpKind::KerrModulated: return "kerr_modulated";
        case PumpKind::Gridded: return "gridded";
    }
    return "unknown";
}

PolarGrid PolarGrid::uniform(int n_radii, int n_angles, double r_max) {
    if (n_radii < 1 || n_angles < 1 || !(r_max > 0.0)) {
        throw std::invalid_argument("PolarGrid::uniform: bad dimensions");
    }
    PolarGrid g;
    const double dr = r_max / n_radii;
    g.radii.resize(n_radii);
    for (int j = 0; j < n_radii; ++j) g.radii[j] = (j + 0.5) * dr;
    g.angles.resize(n_angles);
    for (int k = 0; k < n_angles; ++k) g.angles[k] = k * kTwoPi / n_angles;
    g.values.assign(static_cast<size_t>(n_radii) * n_angles, 0.0);
    return g;
}

double PolarGrid::dtheta() const { return kTwoPi / static_cast<double>(angles.size()); }

std::vector<double> PolarGrid::radial_weights() const {
    const int n = n_radii();
    std::vector<double> w(n, 0.0);
    if (n == 1) {
        w[0] = 2.0 * radii[0];
        return w;
    }
    for (int j = 0; j < n; ++j) {
        const double lo = j == 0 ? std::max(0.0, radii[0] - 0.5 * (radii[1] - radii[0]))
                                 : 0.5 * (radii[j - 1] + radii[j]);
        const double hi = j == n - 1 ? radii[n - 1] + 0.5 * (radii[n - 1] - radii[n - 2])
                                     : 0.5 * (radii[j] + radii[j + 1]);
        w[j] = hi - lo;
    }
    return w;
}

double PolarGrid::quadrature_mass() const {
    const auto w = radial_weights();
    const double dth = dtheta();
    double acc = 0.0;
    for (int j = 0; j < n_radii(); ++j) {
        double row = 0.0;
        for (int k = 0; k < n_angles(); ++k) row += at(j, k);
        acc += row * radii[j] * w[j] * dth;
    }
    return acc;
}

void PolarGrid::validate() const {
    if (radii.empty() || angles.empty() || values.size() != radii.size() * angles.size()) {
        throw std::invalid_argument("PolarGrid: inconsistent dimensions");
    }
    for (size_t j = 1; j < radii.size(); ++j) {
        if (!(radii[j] > radii[j - 1])) {
            throw std::invalid_argument("PolarGrid: radii not ascending");
        }
    }
    const double dth = kTwoPi / static_cast<double>(angles.size());
    for (size_t k = 0; k < angles.size(); ++k) {
        if (std::abs(angles[k] - k * dth) > 1e-9) {
            throw std::invalid_argument("PolarGrid: angles not uniform over [0, 2pi)");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("PolarGrid: non-finite value");
    }
}

PumpModel::PumpModel(PumpKind kind, PumpParams params)
    : kind_(kind), inner_kind_(kind), params_(params) {}

PumpModel PumpModel::coherent(double alpha0, double theta0) {
    if (alpha0 < 0.0) throw std::invalid_argument("coherent: |alpha0| >= 0 required");
    PumpParams p;
    p.alpha0 = alpha0;
    p.theta0 = wrap_angle(theta0);
    return PumpModel(PumpKind::Coherent, p);
}

PumpModel PumpModel::thermal(double nbar) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("thermal: nbar >= 0 required");
    PumpParams p;
    p.nbar = nbar;
    return PumpModel(PumpKind::Thermal, p);
}

PumpModel PumpModel::displaced_thermal(double alpha0, double nbar, double theta0) {
    if (alpha0 < 0.0 || nbar < 0.0) {
        throw std::invalid_argument("displaced_thermal: bad parameters");
    }
    PumpParams p;
    p.alpha0 = alpha0;
    p.nbar = nbar;
    p.theta0 = wrap_angle(theta0);
    return PumpModel(PumpKind::DisplacedThermal, p);
}

PumpModel PumpModel::phase_sensitive_noisy_coherent(double alpha0, double theta0, double nbar1,
                                                    double nbar2, double phi) {
    if (alpha0 < 0.0 || nbar1 <= 0.0 || nbar2 <= 0.0) {
        throw std::invalid_argument("phase_sensitive_noisy_coherent: bad parameters");
    }
    PumpParams p;
    p.alpha0 = alpha0;
    p.theta0 = wrap_angle(theta0);
    p.nbar1 = nbar1;
    p.nbar2 = nbar2;
    p.phi = wrap_angle(phi);
    return PumpModel(PumpKind::PhaseSensitiveNoisyCoherent, p);
}

PumpModel PumpModel::dephased_coherent(double alpha0, double dtheta, double theta0) {
    if (alpha0 < 0.0 || !(dtheta > 0.0)) {
        throw std::invalid_argument("dephased_coherent: requires dtheta > 0");
    }
    PumpParams p;
    p.alpha0 = alpha0;
    p.dtheta = dtheta;
    p.theta0 = wrap_angle(theta0);
    return PumpModel(PumpKind::DephasedCoherent, p);
}

PumpModel PumpModel::phase_averaged(double alpha0) {
    if (alpha0 < 0.0) throw std::invalid_argument("phase_averaged: |alpha0| >= 0 required");
    PumpParams p;
    p.alpha0 = alpha0;
    return PumpModel(PumpKind::PhaseAveragedCoherent, p);
}

PumpModel PumpModel::gridded(PolarGrid grid) {
    grid.validate();
    PumpModel m(PumpKind::Gridded, PumpParams{});
    m.grid_ = std::make_shared<const PolarGrid>(std::move(grid));
    m.grid_mass_ = m.grid_->quadrature_mass();
    if (std::abs(m.grid_mass_) < 1e-12) {
        throw std::invalid_argument("gridded: raster has (near) zero total mass");
    }
    return m;
}

const PolarGrid& PumpModel::grid() const {
    if (!grid_) throw std::logic_error("PumpModel::grid: not a gridded model");
    return *grid_;
}

bool PumpModel::operator==(const PumpModel& o) const {
    return kind_ == o.kind_ && inner_kind_ == o.inner_kind_ && params_ == o.params_ &&
           grid_ == o.grid_;
}

double PumpModel::mean_photon_number() const {
    const auto& p = params_;
    switch (inner_kind_) {
        case PumpKind::Coherent: return p.alpha0 * p.alpha0;
        case PumpKind::Thermal: return p.nbar;
        case PumpKind::DisplacedThermal: return p.alpha0 * p.alpha0 + p.nbar;
        case PumpKind::PhaseSensitiveNoisyCoherent:
            return p.alpha0 * p.alpha0 + 0.5 * (p.nbar1 + p.nbar2);
        case PumpKind::DephasedCoherent: return p.alpha0 * p.alpha0;
        case PumpKind::PhaseAveragedCoherent: return p.alpha0 * p.alpha0;
        case PumpKind::Gridded: return p_moment(*this, 1, 1, {}).real();
        default: throw std::logic_error("mean_photon_number: unreachable");
    }
}

double PumpModel::radial_bound() const {
    // thermal radial density: mean 0.8862 sqrt(nbar), std 0.4633 sqrt(nbar)
    constexpr double kThermalSpan = 4.5927;  // mean + 8 std, in units of sqrt(nbar)
    const auto& p = params_;
    switch (inner_kind_) {
        case PumpKind::Coherent:
        case PumpKind::DephasedCoherent:
        case PumpKind::PhaseAveragedCoherent: return p.alpha0;
        case PumpKind::Thermal: return kThermalSpan * std::sqrt(p.nbar);
        case PumpKind::DisplacedThermal: return p.alpha0 + kThermalSpan * std::sqrt(p.nbar);
        case PumpKind::PhaseSensitiveNoisyCoherent:
            return p.alpha0 + kThermalSpan * std::sqrt(std::max(p.nbar1, p.nbar2));
        case PumpKind::Gridded: return grid_->radii.back();
        default: throw std::logic_error("radial_bound: unreachable");
    }
}

bool PumpModel::has_singular_ring() const {
    switch (inner_kind_) {
        case PumpKind::Coherent:
        case PumpKind::DephasedCoherent:
        case PumpKind::PhaseAveragedCoherent: return true;
        case PumpKind::DisplacedThermal:
        case PumpKind::Thermal: return params_.nbar == 0.0;
        default: return false;
    }
}

PSample p_value(const PumpModel& model, double radius, double angle) {
    if (radius < 0.0) throw std::invalid_argument("p_value: radius >= 0 required");
    const auto& p = model.params();
    const double theta = wrap_angle(angle);
    switch (model.kind()) {
        case PumpKind::Coherent:
            return {PSample::Tag::Point, 0.0, p.alpha0, p.theta0};
        case PumpKind::Thermal: {
            if (p.nbar == 0.0) return {PSample::Tag::Point, 0.0, 0.0, 0.0};
            const double v = std::exp(-radius * radius / p.nbar) / (std::numbers::pi * p.nbar);
            return {PSample::Tag::Regular, v, 0.0, 0.0};
        }
        case PumpKind::DisplacedThermal: {
            if (p.nbar == 0.0) return {PSample::Tag::Point, 0.0, p.alpha0, p.theta0};
            const double dx = radius * std::cos(theta) - p.alpha0 * std::cos(p.theta0);
            const double dy = radius * std::sin(theta) - p.alpha0 * std::sin(p.theta0);
            const double v =
                std::exp(-(dx * dx + dy * dy) / p.nbar) / (std::numbers::pi * p.nbar);
            return {PSample::Tag::Regular, v, 0.0, 0.0};
        }
        case PumpKind::PhaseSensitiveNoisyCoherent: {
            const double dx = radius * std::cos(theta) - p.alpha0 * std::cos(p.theta0);
            const double dy = radius * std::sin(theta) - p.alpha0 * std::sin(p.theta0);
            // offset in the noise frame: Re/Im of (alpha - alpha0) e^{-i phi}
            const double xr = dx * std::cos(p.phi) + dy * std::sin(p.phi);
            const double yr = -dx * std::sin(p.phi) + dy * std::cos(p.phi);
            const double v = std::exp(-xr * xr / p.nbar1 - yr * yr / p.nbar2) /
                             (std::numbers::pi * std::sqrt(p.nbar1 * p.nbar2));
            return {PSample::Tag::Regular, v, 0.0, 0.0};
        }
        case PumpKind::DephasedCoherent:
            return {PSample::Tag::Ring, wrapped_gaussian(theta, p.theta0, p.dtheta), p.alpha0,
                    0.0};
        case PumpKind::PhaseAveragedCoherent:
            return {PSample::Tag::Ring, 1.0 / kTwoPi, p.alpha0, 0.0};
        case PumpKind::Gridded: {
            const auto& g = model.grid();
            if (radius < g.radii.front() || radius > g.radii.back()) {
                throw std::domain_error("p_value: radius outside the raster");
            }
            const auto it = std::lower_bound(g.radii.begin(), g.radii.end(), radius);
            int j1 = static_cast<int>(it - g.radii.begin());
            if (j1 >= g.n_radii()) j1 = g.n_radii() - 1;
            const int j0 = std::max(0, j1 - 1);
            const double tr =
                j1 == j0 ? 0.0 : (radius - g.radii[j0]) / (g.radii[j1] - g.radii[j0]);
            const double dth = g.dtheta();
            const int k0 = static_cast<int>(std::floor(theta / dth)) % g.n_angles();
            const int k1 = (k0 + 1) % g.n_angles();
            const double tt = theta / dth - std::floor(theta / dth);
            const double v = (1.0 - tr) * ((1.0 - tt) * g.at(j0, k0) + tt * g.at(j0, k1)) +
                             tr * ((1.0 - tt) * g.at(j1, k0) + tt * g.at(j1, k1));
            return {PSample::Tag::Regular, v, 0.0, 0.0};
        }
        case PumpKind::KerrModulated:
            throw std::invalid_argument(
                "p_value: Kerr-modulated P has no pointwise closed form; rasterize it first");
    }
    throw std::logic_error("p_value: unreachable");
}

namespace {

// E[(x+iy)^j (x-iy)^k] for independent centered x ~ N(0, nbar1/2), y ~ N(0, nbar2/2).
Complex gaussian_mixed_moment(int j, int k, double nbar1, double nbar2) {
    Complex acc{0.0, 0.0};
    const Complex iu{0.0, 1.0};
    for (int a = 0; a <= j; ++a) {
        for (int b = 0; b <= k; ++b) {
            const int px = a + b;
            const int py = (j - a) + (k - b);
            if (px % 2 != 0 || py % 2 != 0) continue;
            const Complex coeff =
                binom(j, a) * binom(k, b) * std::pow(iu, j - a) * std::pow(-iu, k - b);
            const double ex = double_factorial_odd(px) * std::pow(0.5 * nbar1, px / 2);
            const double ey = double_factorial_odd(py) * std::pow(0.5 * nbar2, py / 2);
            acc += coeff * ex * ey;
        }
    }
    return acc;
}

}  // namespace

Complex p_moment(const PumpModel& model, int m, int n, const QuadratureSpec& spec) {
    if (m < 0 || n < 0) throw std::invalid_argument("p_moment: m, n >= 0 required");
    const auto& p = model.params();
    switch (model.kind()) {
        case PumpKind::Coherent:
            return std::pow(p.alpha0, m + n) * phase_factor(p.theta0 * (m - n));
        case PumpKind::Thermal: {
            if (m != n) return {0.0, 0.0};
            double v = 1.0;
            for (int k = 1; k <= n; ++k) v *= k * p.nbar;
            return {v, 0.0};
        }
        case PumpKind::DisplacedThermal: {
            Complex acc{0.0, 0.0};
            for (int k = 0; k <= std::min(m, n); ++k) {
                double fact = 1.0;
                for (int i = 1; i <= k; ++i) fact *= i * p.nbar;
                acc += binom(m, k) * binom(n, k) * fact * std::pow(p.alpha0, m + n - 2 * k) *
                       phase_factor(p.theta0 * (m - n));
            }
            return acc;
        }
        case PumpKind::PhaseSensitiveNoisyCoherent: {
            Complex acc{0.0, 0.0};
            for (int j = 0; j <= m; ++j) {
                for (int k = 0; k <= n; ++k) {
                    const Complex noise = gaussian_mixed_moment(j, k, p.nbar1, p.nbar2) *
                                          phase_factor(p.phi * (j - k));
                    acc += binom(m, j) * binom(n, k) * std::pow(p.alpha0, (m - j) + (n - k)) *
                           phase_factor(p.theta0 * ((m - j) - (n - k))) * noise;
                }
            }
            return acc;
        }
        case PumpKind::DephasedCoherent:
            return std::pow(p.alpha0, m + n) * phase_factor(p.theta0 * (m - n)) *
                   std::exp(-0.5 * (m - n) * (m - n) * p.dtheta * p.dtheta);
        case PumpKind::PhaseAveragedCoherent:
            if (m != n) return {0.0, 0.0};
            return {std::pow(p.alpha0, 2 * n), 0.0};
        case PumpKind::KerrModulated:
            switch (model.inner_kind()) {
                case PumpKind::Coherent:
                    return fock::kerr_normal_moment(p.alpha0, p.theta0, 0.0, p.kerr, n, m);
                case PumpKind::DisplacedThermal:
                    return fock::kerr_normal_moment(p.alpha0, p.theta0, p.nbar, p.kerr, n, m);
                default: throw std::logic_error("p_moment: unsupported Kerr inner kind");
            }
        case PumpKind::Gridded: {
            (void)spec;
            const auto& g = model.grid();
            const auto w = g.radial_weights();
            const double dth = g.dtheta();
            Complex acc{0.0, 0.0};
            for (int j = 0; j < g.n_radii(); ++j) {
                Complex row{0.0, 0.0};
                for (int k = 0; k < g.n_angles(); ++k) {
                    row += g.at(j, k) * phase_factor(g.angles[k] * (m - n));
                }
                acc += row * std::pow(g.radii[j], m + n + 1) * w[j] * dth;
            }
            return acc / g.quadrature_mass();
        }
    }
    throw std::logic_error("p_moment: unreachable");
}

PumpModel kerr_modulate(const PumpModel& model, double kerr) {
    if (kerr < 0.0) throw std::invalid_argument("kerr_modulate: kerr >= 0 required");
    switch (model.kind()) {
        case PumpKind::Thermal:
        case PumpKind::PhaseAveragedCoherent:
            return model;  // phase-symmetric states are Kerr-invariant
        case PumpKind::Coherent:
        case PumpKind::DisplacedThermal: {
            if (kerr == 0.0) return model;
            PumpModel out = model;
            out.kind_ = PumpKind::KerrModulated;
            out.inner_kind_ = model.kind();
            out.params_.kerr = kerr;
            return out;
        }
        default:
            throw std::invalid_argument("kerr_modulate: unsupported inner kind " +
                                        to_string(model.kind()));
    }
}

double phase_spread_estimate(const PumpModel& model) {
    const auto& p = model.params();
    if (model.kind() == PumpKind::DephasedCoherent) return p.dtheta;
    if (model.inner_kind() == PumpKind::Coherent &&
        (model.kind() == PumpKind::KerrModulated || model.kind() == PumpKind::Coherent)) {
        return p.kerr * p.alpha0;
    }
    if (model.inner_kind() == PumpKind::DisplacedThermal) {
        if (p.alpha0 == 0.0) {
            throw std::invalid_argument("phase_spread_estimate: needs |alpha0| > 0");
        }
        return std::sqrt(p.nbar / (p.alpha0 * p.alpha0) +
                         p.kerr * p.kerr * p.alpha0 * p.alpha0 * (2.0 * p.nbar + 1.0));
    }
    throw std::invalid_argument("phase_spread_estimate: unsupported pump kind " +
                                to_string(model.kind()));
}

}  // namespace opg
