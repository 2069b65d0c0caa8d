#include "opg/fock.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "opg/special_functions.hpp"

namespace opg::fock {

Scaled Scaled::from_double(double v) {
    Scaled s;
    if (v == 0.0) return s;
    int e = 0;
    s.mant = std::frexp(v, &e) * 2.0;
    s.exp2 = e - 1;
    return s;
}

Scaled Scaled::from_ln(double ln_mag, double sign) {
    Scaled s;
    if (sign == 0.0) return s;
    const double le = ln_mag / std::numbers::ln2_v<double>;
    const double fl = std::floor(le);
    s.exp2 = static_cast<long>(fl);
    s.mant = std::copysign(std::exp2(le - fl), sign);
    s.normalize();
    return s;
}

double Scaled::ln_abs() const {
    if (mant == 0.0) return -1e308;
    return std::log(std::abs(mant)) + exp2 * std::numbers::ln2_v<double>;
}

double Scaled::to_double() const { return std::ldexp(mant, static_cast<int>(exp2)); }

void Scaled::normalize() {
    if (mant == 0.0) {
        exp2 = 0;
        return;
    }
    int e = 0;
    mant = std::frexp(mant, &e) * 2.0;
    exp2 += e - 1;
}

Scaled& Scaled::operator*=(double v) {
    mant *= v;
    normalize();
    return *this;
}

Scaled& Scaled::operator*=(const Scaled& o) {
    mant *= o.mant;
    exp2 += o.exp2;
    normalize();
    return *this;
}

Scaled& Scaled::operator+=(const Scaled& o) {
    if (o.mant == 0.0) return *this;
    if (mant == 0.0) {
        *this = o;
        return *this;
    }
    const long shift = o.exp2 - exp2;
    if (shift > 100) {
        *this = o;
        return *this;
    }
    if (shift < -100) return *this;
    mant += std::ldexp(o.mant, static_cast<int>(shift));
    normalize();
    return *this;
}

int displaced_thermal_cutoff(double alpha0, double nbar) {
    const double mean = alpha0 * alpha0 + nbar;
    const double var = alpha0 * alpha0 * (2.0 * nbar + 1.0) + nbar * (nbar + 1.0);
    return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(var) + 10.0));
}

DisplacedThermalFock::DisplacedThermalFock(double alpha0, double nbar, int cutoff)
    : cutoff_(cutoff) {
    if (alpha0 < 0.0 || nbar < 0.0 || cutoff < 1) {
        throw std::invalid_argument("DisplacedThermalFock: bad parameters");
    }
    rows_.resize(cutoff + 1);
    peak_ln_ = neg_inf_;
    const double np1 = nbar + 1.0;
    const double ln_pre = -alpha0 * alpha0 / np1 - std::log(np1);

    if (alpha0 == 0.0) {
        // pure thermal: diagonal tau^n/(nbar+1)
        rows_[0].assign(cutoff + 1, neg_inf_);
        const double ln_tau = nbar > 0.0 ? std::log(nbar / np1) : neg_inf_;
        for (int n = 0; n <= cutoff; ++n) {
            rows_[0][n] = ln_pre + (n == 0 ? 0.0 : n * ln_tau);
            peak_ln_ = std::max(peak_ln_, rows_[0][n]);
        }
        d_max_ = 0;
        tail_mass_ = nbar > 0.0 ? std::pow(nbar / np1, cutoff + 1.0) : 0.0;
        return;
    }

    const double ratio_base = nbar * np1 / (alpha0 * alpha0);  // term ratio factor
    const double ln_a = std::log(alpha0 / np1);
    d_max_ = 0;
    for (int d = 0; d <= cutoff; ++d) {
        std::vector<double> row(cutoff + 1 - d, neg_inf_);
        double row_peak = neg_inf_;
        for (int n = 0; n + d <= cutoff; ++n) {
            const int m = n + d;
            // sum_j t_j with t_0 = A^{n+m}/(n! m!), ratio (n-j)(m-j)/(j+1) * ratio_base
            Scaled term = Scaled::from_ln((n + m) * ln_a - sf::ln_gamma(n + 1.0) -
                                          sf::ln_gamma(m + 1.0));
            Scaled sum = term;
            for (int j = 0; j < n; ++j) {
                term *= ratio_base * (n - j) * (m - j) / (j + 1.0);
                sum += term;
            }
            row[n] = ln_pre + 0.5 * (sf::ln_gamma(n + 1.0) + sf::ln_gamma(m + 1.0)) +
                     sum.ln_abs();
            row_peak = std::max(row_peak, row[n]);
        }
        peak_ln_ = std::max(peak_ln_, row_peak);
        if (row_peak < peak_ln_ - 80.0 && d > 2) {  // e^-34.5 ~ 1e-15 relative
            break;
        }
        rows_[d] = std::move(row);
        d_max_ = d;
    }
    // diagonal mass kept within the cutoff
    double mass = 0.0;
    for (int n = 0; n <= cutoff; ++n) mass += std::exp(rows_[0][n]);
    tail_mass_ = std::max(0.0, 1.0 - mass);
}

double displaced_thermal_ln_diag(double alpha0, double nbar, int n) {
    const double np1 = nbar + 1.0;
    if (alpha0 == 0.0) {
        return -std::log(np1) + (nbar > 0.0 ? n * std::log(nbar / np1) : (n == 0 ? 0.0 : -1e308));
    }
    const double ratio_base = nbar * np1 / (alpha0 * alpha0);
    Scaled term =
        Scaled::from_ln(2.0 * n * std::log(alpha0 / np1) - 2.0 * sf::ln_gamma(n + 1.0));
    Scaled sum = term;
    for (int j = 0; j < n; ++j) {
        term *= ratio_base * (n - j) * (n - j) / (j + 1.0);
        sum += term;
    }
    return -alpha0 * alpha0 / np1 - std::log(np1) + sf::ln_gamma(n + 1.0) + sum.ln_abs();
}

std::shared_ptr<const DisplacedThermalFock> cached_displaced_thermal(double alpha0, double nbar,
                                                                     int min_cutoff) {
    const int cutoff = std::max(displaced_thermal_cutoff(alpha0, nbar), min_cutoff);
    static std::mutex mu;
    static std::vector<std::tuple<double, double, std::shared_ptr<const DisplacedThermalFock>>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [a, n, ptr] : cache) {
        if (a == alpha0 && n == nbar && ptr->cutoff() >= cutoff) return ptr;
    }
    auto ptr = std::make_shared<const DisplacedThermalFock>(alpha0, nbar, cutoff);
    std::erase_if(cache, [&](const auto& e) {
        return std::get<0>(e) == alpha0 && std::get<1>(e) == nbar;
    });
    if (cache.size() >= 4) cache.erase(cache.begin());
    cache.emplace_back(alpha0, nbar, ptr);
    return ptr;
}

Complex kerr_normal_moment(double alpha0, double theta0, double nbar, double kerr, int n_dag,
                           int m_ann) {
    const int d = n_dag - m_ann;
    const auto rho_ptr = cached_displaced_thermal(alpha0, nbar);
    const DisplacedThermalFock& rho = *rho_ptr;
    const int cutoff = rho.cutoff();
    // tr[rho~ (a^dag)^n a^m] = sum_{k>=m} rho~_{k, k-m+n} sqrt(k! (k-m+n)!)/(k-m)!
    Complex acc{0.0, 0.0};
    if (d >= 0) {
        if (!rho.has_diagonal_band(d)) return acc;
        for (int k = m_ann; k + d <= cutoff; ++k) {
            const int b = k + d;  // = k - m_ann + n_dag
            const double ln_w = 0.5 * (sf::ln_gamma(k + 1.0) + sf::ln_gamma(b + 1.0)) -
                                sf::ln_gamma(k - m_ann + 1.0);
            const double ln_mag = rho.ln_element(k, d) + ln_w;
            // rho_{k,b} phase: theta0*(k-b) and Kerr phase -kerr*[k(k-1)-b(b-1)]
            const double phase = theta0 * (k - b) - kerr * (static_cast<double>(k) * (k - 1.0) -
                                                            static_cast<double>(b) * (b - 1.0));
            acc += std::exp(ln_mag) * Complex(std::cos(phase), std::sin(phase));
        }
    } else {
        // use hermiticity: tr[rho (a^dag)^n a^m] = conj(tr[rho (a^dag)^m a^n])
        return std::conj(kerr_normal_moment(alpha0, theta0, nbar, kerr, m_ann, n_dag));
    }
    return acc;
}

}  // namespace opg::fock
