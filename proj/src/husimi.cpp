#include "opg/husimi.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "opg/fock.hpp"
#include "opg/numerics.hpp"
#include "opg/special_functions.hpp"

namespace opg::husimi {

namespace {

using fock::DisplacedThermalFock;
using fock::Scaled;

struct KerrPumpView {
    double alpha0, theta0, nbar, kerr;
};

KerrPumpView view_of(const PumpModel& model) {
    const auto& p = model.params();
    if (model.kind() == PumpKind::DisplacedThermal) {
        return {p.alpha0, p.theta0, p.nbar, 0.0};
    }
    if (model.kind() == PumpKind::KerrModulated &&
        model.inner_kind() == PumpKind::DisplacedThermal) {
        return {p.alpha0, p.theta0, p.nbar, p.kerr};
    }
    if (model.kind() == PumpKind::Thermal) return {0.0, 0.0, p.nbar, 0.0};
    throw std::invalid_argument(
        "husimi: supported pumps are (Kerr-modulated) displaced thermal and thermal");
}

// C_N(eta) angular harmonics on a radial ladder:
//   C_N(r e^{i phi}) = G_0(r) + sum_{d>=1} [G_d(r) e^{i d phi} + (-1)^d conj(G_d(r)) e^{-i d phi}]
//   G_d(r) = sum_n rho~_{n,n+d} sqrt(n!/(n+d)!) r^d L_n^{(d)}(r^2)
// computed with scaled arithmetic (individual factors overflow, products are O(1)).
struct Harmonics {
    std::vector<double> r;                   // radial nodes (eta plane)
    std::vector<double> w;                   // matching quadrature weights
    std::vector<std::vector<Complex>> g;     // g[d][node]
    int d_max = 0;
};

Complex kerr_phase(double kerr, double theta0, int n, int m) {
    // rho~_{nm} = |rho_{nm}| e^{i theta0 (n-m)} e^{-i kerr [n(n-1) - m(m-1)]}
    const double ph = theta0 * (n - m) -
                      kerr * (static_cast<double>(n) * (n - 1.0) -
                              static_cast<double>(m) * (m - 1.0));
    return {std::cos(ph), std::sin(ph)};
}

// ln k! lookup shared by the hot loops
std::vector<double> ln_factorials(int up_to) {
    std::vector<double> t(up_to + 1, 0.0);
    for (int k = 1; k <= up_to; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
}

struct BandSample {
    Complex value{0.0, 0.0};
    double tail_bias = 0.0;  // magnitude of the last summed terms: the
                             // number-basis truncation bias at this radius
};

BandSample g_band_at(const DisplacedThermalFock& rho, const KerrPumpView& vw, int d, double r,
                     const std::vector<double>& lnfact) {
    const int nmax = rho.cutoff() - d;
    const double x = r * r;
    // scaled Laguerre recurrence over n at fixed (d, x)
    Scaled lm = Scaled::zero();  // L_{n-1}
    Scaled lc = Scaled::one();   // L_0 = 1
    const double ln_rd = r > 0.0 ? d * std::log(r) : (d == 0 ? 0.0 : -1e308);
    BandSample out;
    double last_ln = -1e308;
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) {
            // L_n = ((2n-1+d-x) L_{n-1} - (n-1+d) L_{n-2}) / n
            Scaled next = lc;
            next *= (2.0 * n - 1.0 + d - x) / n;
            Scaled sub = lm;
            sub *= -(n - 1.0 + d) / n;
            next += sub;
            lm = lc;
            lc = next;
        }
        if (lc.is_zero()) continue;
        const double ln_w = 0.5 * (lnfact[n] - lnfact[n + d]);
        const double ln_term = rho.ln_element(n, d) + ln_w + ln_rd + lc.ln_abs();
        if (n >= nmax - 2) last_ln = std::max(last_ln, ln_term);
        if (ln_term < -70.0) continue;  // below 1e-27 of the O(1) total
        out.value +=
            std::copysign(std::exp(ln_term), lc.mant) * kerr_phase(vw.kerr, vw.theta0, n, n + d);
    }
    out.tail_bias = std::exp(std::min(last_ln, 300.0));
    return out;
}

Harmonics characteristic_harmonics(const DisplacedThermalFock& rho, const KerrPumpView& vw,
                                   double r_out_max, bool parallel) {
    // envelope of C_N is ~ e^{-nbar |eta|^2}: cover down to 1e-14
    const double eta_max = std::sqrt(34.0 / std::max(vw.nbar, 1e-12));
    // panel count follows the fastest Bessel oscillation 2 * r_out_max * eta
    const int panels =
        std::max(10, static_cast<int>(std::ceil(2.0 * r_out_max * eta_max / std::numbers::pi)));
    const int per_panel = 16;
    Harmonics h;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p) {
        num::gauss_legendre(per_panel, eta_max * p / panels, eta_max * (p + 1) / panels, nodes,
                            weights);
        h.r.insert(h.r.end(), nodes.begin(), nodes.end());
        h.w.insert(h.w.end(), weights.begin(), weights.end());
    }
    const int n_nodes = static_cast<int>(h.r.size());
    const auto lnfact = ln_factorials(rho.cutoff() + 1);

    // drop trailing bands once they are uniformly negligible
    const int d_cap = std::min(rho.cutoff(), rho.d_max());
    h.g.assign(d_cap + 1, {});
    std::vector<char> keep(d_cap + 1, 0);
    std::vector<double> bias(n_nodes, 0.0);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int d = 0; d <= d_cap; ++d) {
        std::vector<Complex> band(n_nodes);
        std::vector<double> band_bias(n_nodes);
        double peak = 0.0;
        for (int i = 0; i < n_nodes; ++i) {
            const auto s = g_band_at(rho, vw, d, h.r[i], lnfact);
            band[i] = s.value;
            band_bias[i] = s.tail_bias;
            peak = std::max(peak, std::abs(band[i]));
        }
        if (peak > 1e-18) {
            h.g[d] = std::move(band);
            keep[d] = 1;
        }
#pragma omp critical
        for (int i = 0; i < n_nodes; ++i) bias[i] = std::max(bias[i], band_bias[i]);
    }
    int d_max = 0;
    for (int d = 0; d <= d_cap; ++d) {
        if (keep[d]) d_max = d;
    }
    h.d_max = d_max;
    h.g.resize(d_max + 1);
    for (int d = 0; d <= d_max; ++d) {
        if (!keep[d]) h.g[d].assign(n_nodes, Complex{0.0, 0.0});
    }
    // Nodes where the number-basis truncation bias rivals the signal carry
    // garbage, not data; the true characteristic function is below the bias
    // there, so zeroing loses nothing.
    for (int i = 0; i < n_nodes; ++i) {
        double sig = 0.0;
        for (int d = 0; d <= d_max; ++d) sig = std::max(sig, std::abs(h.g[d][i]));
        if (sig < 100.0 * bias[i]) {
            for (int d = 0; d <= d_max; ++d) h.g[d][i] = Complex{0.0, 0.0};
        }
    }
    return h;
}

}  // namespace

double husimi_q(const PumpModel& model, double radius, double angle) {
    const auto vw = view_of(model);
    const auto rho = fock::cached_displaced_thermal(vw.alpha0, vw.nbar);
    // Q = e^{-r^2}/pi * sum_{n,m} rho~_{nm} r^{n+m} e^{i(m-n)theta} / sqrt(n! m!)
    const double x = radius * radius;
    const double lnr = radius > 0.0 ? std::log(radius) : -1e308;
    Complex acc{0.0, 0.0};
    for (int d = 0; d <= rho->d_max(); ++d) {
        if (!rho->has_diagonal_band(d)) continue;
        Complex band{0.0, 0.0};
        for (int n = 0; n + d <= rho->cutoff(); ++n) {
            const double ln_term = rho->ln_element(n, d) + (2.0 * n + d) * lnr -
                                   0.5 * (sf::ln_gamma(n + 1.0) + sf::ln_gamma(n + d + 1.0)) - x;
            if (ln_term < -46.0) {
                if (2.0 * n + d > x) break;  // past the peak, terms only decay
                continue;
            }
            band += std::exp(ln_term) * kerr_phase(vw.kerr, vw.theta0, n, n + d);
        }
        // rho_{n,n+d} pairs with e^{+i d theta}; the d<0 bands are the conjugates
        const Complex ph{std::cos(d * angle), std::sin(d * angle)};
        if (d == 0) {
            acc += band;
        } else {
            acc += band * ph + std::conj(band * ph);
        }
    }
    return acc.real() / std::numbers::pi;
}

PolarGrid p_from_husimi(const PumpModel& model, const GridSpec& spec, bool parallel) {
    const auto vw = view_of(model);
    if (!(vw.nbar > 0.0)) {
        throw std::invalid_argument("p_from_husimi: requires a thermal component (nbar > 0)");
    }
    // The assembly weights the number-basis tail by Laguerre factors of size
    // up to ~e^{eta^2/2}; the cutoff must push the weighted tail below 1e-15.
    const double eta_max = std::sqrt(34.0 / vw.nbar);
    const int base_cutoff = fock::displaced_thermal_cutoff(vw.alpha0, vw.nbar);
    const double weighted_tail =
        fock::displaced_thermal_ln_diag(vw.alpha0, vw.nbar, base_cutoff) + 0.5 * eta_max * eta_max;
    int cutoff = base_cutoff;
    if (weighted_tail > -35.0) {
        const double decay = -std::log(vw.nbar / (vw.nbar + 1.0));
        cutoff += static_cast<int>(std::ceil((weighted_tail + 35.0) / decay));
    }
    const auto rho = fock::cached_displaced_thermal(vw.alpha0, vw.nbar, cutoff);
    PolarGrid out = PolarGrid::uniform(spec.n_radii, spec.n_angles, spec.r_max);

    const Harmonics h = characteristic_harmonics(*rho, vw, spec.r_max, parallel);
    const int n_nodes = static_cast<int>(h.r.size());
    const int n_ang = spec.n_angles;

    // P(rho_out, theta) = (2/pi) [ I_0 + 2 sum_{d>=1} Re(e^{i d theta} I_d) ],
    // I_d(rho_out) = int G_d(r) J_d(2 rho_out r) r dr
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int j = 0; j < spec.n_radii; ++j) {
        const double rj = out.radii[j];
        std::vector<Complex> id(h.d_max + 1, Complex{0.0, 0.0});
        std::vector<double> jbuf(h.d_max + 1);
        for (int i = 0; i < n_nodes; ++i) {
            sf::bessel_j_array(2.0 * rj * h.r[i], jbuf);
            const double rw = h.r[i] * h.w[i];
            for (int d = 0; d <= h.d_max; ++d) {
                id[d] += h.g[d][i] * (jbuf[d] * rw);
            }
        }
        for (int k = 0; k < n_ang; ++k) {
            const double theta = out.angles[k];
            double v = id[0].real();
            for (int d = 1; d <= h.d_max; ++d) {
                v += 2.0 * (id[d].real() * std::cos(d * theta) -
                            id[d].imag() * std::sin(d * theta));
            }
            out.at(j, k) = v * (2.0 / std::numbers::pi);
        }
    }
    return out;
}

std::shared_ptr<const PolarGrid> cached_p_from_husimi(const PumpModel& model,
                                                      const GridSpec& spec) {
    struct Key {
        double alpha0, nbar, kerr, r_max;
        int n_radii, n_angles;
        bool operator==(const Key&) const = default;
    };
    const auto vw = view_of(model);
    const Key key{vw.alpha0, vw.nbar, vw.kerr, spec.r_max, spec.n_radii, spec.n_angles};
    static std::mutex mu;
    static std::vector<std::pair<Key, std::shared_ptr<const PolarGrid>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        for (const auto& [k, ptr] : cache) {
            if (k == key) return ptr;
        }
    }
    auto grid = std::make_shared<const PolarGrid>(p_from_husimi(model, spec));
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [k, ptr] : cache) {
        if (k == key) return ptr;
    }
    if (cache.size() >= 6) cache.erase(cache.begin());
    cache.emplace_back(key, grid);
    return grid;
}

}  // namespace opg::husimi
