#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opg/engine.hpp"
#include "opg/measures.hpp"
#include "opg/pump.hpp"

using namespace opg;

TEST_CASE("negativity: thermal pump state vanishes") {
    OpgParams params;
    params.gt = 0.05;
    const auto st = gpa_state(PumpModel::thermal(3.0), params);
    CHECK(negativity(st) <= 1e-7);
}

TEST_CASE("negativity: coherent GPA closed form at gt|alpha0| = 0.2") {
    OpgParams params;
    params.gt = 0.1;
    params.fock_cutoff = 60;  // push the ladder truncation below 1e-12
    const auto st = gpa_state(PumpModel::coherent(2.0, 0.3), params);
    // (e^{0.4} - 1)/2, frozen from a 50-digit evaluation
    CHECK(negativity(st) == doctest::Approx(0.24591234882063516).epsilon(1e-12));
    // the default auto cutoff stays within the acceptance tolerance
    OpgParams auto_params;
    auto_params.gt = 0.1;
    const auto st2 = gpa_state(PumpModel::coherent(2.0, 0.3), auto_params);
    CHECK(negativity(st2) == doctest::Approx(0.24591234882063516).epsilon(1e-7));
}

TEST_CASE("negativity: diagonal-only table is separable") {
    TwoModeState st(3, StateForm::Gpa);
    st.at(0, 0) = 0.7;
    st.at(1, 1) = 0.2;
    st.at(2, 2) = 0.1;
    CHECK(negativity(st) == doctest::Approx(0.0));
}

TEST_CASE("negativity uncertainty shrinks with the tail bound") {
    OpgParams params;
    params.gt = 0.45;
    const auto st = gpa_state(PumpModel::coherent(2.0), params);
    const double u = negativity_uncertainty(st);
    CHECK(u >= 0.0);
    CHECK(u < 1e-4);
}

TEST_CASE("negativity_perturbative") {
    PerturbativeCoefficients c;
    c.c01 = Complex{3.0, 4.0};  // |c01| = 5
    c.c02 = Complex{0.0, 2.0};
    CHECK(negativity_perturbative(c, 0.1) == doctest::Approx(0.1 * 5.0 + 0.01 * 2.0));
    c.c01 = c.c02 = Complex{0.0, 0.0};
    CHECK(negativity_perturbative(c, 0.3) == doctest::Approx(0.0));
    // coherent: gt a0 + (gt a0)^2
    PerturbativeCoefficients coh;
    coh.c01 = 2.0;
    coh.c02 = 4.0;
    CHECK(negativity_perturbative(coh, 0.1) == doctest::Approx(0.2 + 0.04).epsilon(1e-13));
}

TEST_CASE("negativity two-peak interference pattern") {
    // two equal narrow peaks: |c01| = a0 |cos((t'-t'')/2)|, |c02| = a0^2 |cos(t'-t'')|
    const double a0 = 2.0, tp = 0.4, tpp = 1.7, gt = 0.05;
    HistogramPhase h;
    h.midpoints = {tp, tpp};
    h.widths = {1e-6, 1e-6};
    h.weights = {0.5, 0.5};
    PerturbativeCoefficients c;
    c.c01 = moments_from_phase(h, a0, 0, 1);
    c.c02 = moments_from_phase(h, a0, 0, 2);
    const double expect = gt * a0 * std::abs(std::cos(0.5 * (tp - tpp))) +
                          gt * gt * a0 * a0 * std::abs(std::cos(tp - tpp));
    CHECK(negativity_perturbative(c, gt) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("linear_entropy: pure coherent GPA state") {
    OpgParams params;
    params.gt = 0.2;
    const auto st = gpa_state(PumpModel::coherent(2.0, 0.9), params);
    CHECK(linear_entropy(st) <= 1e-9);
}

TEST_CASE("linear_entropy: phase-averaged closed form 1 - 1/cosh(2x)") {
    OpgParams params;
    params.gt = 0.1;  // x = gt a0 = 0.3
    const auto st = gpa_state(PumpModel::phase_averaged(3.0), params);
    CHECK(linear_entropy(st) == doctest::Approx(1.0 - 1.0 / std::cosh(0.6)).epsilon(1e-9));
    CHECK(linear_entropy(st) == doctest::Approx(0.15644931237819336).epsilon(1e-9));
}

TEST_CASE("linear_entropy: thermal perturbative block") {
    OpgParams params;
    params.gt = 0.1;
    const auto st = perturbative_state(PumpModel::thermal(1.0), params);
    // 2 nbar (gt)^2 up to the retained fourth-order square terms
    CHECK(linear_entropy(st) == doctest::Approx(0.02).epsilon(1.5e-2));
    CHECK(std::abs(linear_entropy(st) - 0.02) < 2.5e-4);
}

TEST_CASE("thermal entropy bounds: diagonal and entropy") {
    const double nbar = 100.0, gt = 0.05;
    OpgParams params;
    params.gt = gt;
    const auto st = gpa_state(PumpModel::thermal(nbar), params);
    const auto bounds = thermal_entropy_bounds(nbar, gt, st.cutoff());
    for (int m = 0; m <= st.cutoff(); ++m) {
        CHECK(st.at(m, m).real() >= bounds.diagonal_lower[m] - 1e-12);
    }
    CHECK(linear_entropy(st) <= bounds.upper_linear_entropy + 1e-12);
    // vacuum limit: bound on rho^{00} approaches 1 as G -> 0
    const auto tiny = thermal_entropy_bounds(1.0, 1e-6, 0);
    CHECK(tiny.diagonal_lower[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("quadrature_variance: vacuum") {
    OpgParams params;
    params.gt = 0.0;
    const auto st = gpa_state(PumpModel::coherent(2.0), params);
    CHECK(quadrature_variance(st) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrature_variance: coherent pump with theta0 = pi/2") {
    OpgParams params;
    params.gt = 0.25;  // gt a0 = 0.5
    const auto st = gpa_state(PumpModel::coherent(2.0, std::numbers::pi / 2.0), params);
    CHECK(quadrature_variance(st) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-9));
}

TEST_CASE("quadrature_variance: dephased closed form") {
    const double a0 = 2.0, dth = 0.4;
    OpgParams params;
    params.gt = 0.2;  // x = 0.4
    const auto st =
        gpa_state(PumpModel::dephased_coherent(a0, dth, std::numbers::pi / 2.0), params);
    const double x = 0.4;
    const double expect = std::exp(-2.0 * x) +
                          (1.0 - std::exp(-0.5 * dth * dth)) * std::sinh(2.0 * x);
    CHECK(quadrature_variance(st) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("squeezing_db") {
    CHECK(squeezing_db(1.0) == doctest::Approx(0.0));
    CHECK(squeezing_db(std::pow(10.0, -0.8)) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK_THROWS_AS(squeezing_db(0.0), std::domain_error);
    CHECK_THROWS_AS(squeezing_db(-1.0), std::domain_error);
    // 8 dB crossing of the coherent curve at gt a0 = 0.4 ln 10
    const double x = 0.4 * std::log(10.0);
    CHECK(squeezing_db(std::exp(-2.0 * x)) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(x == doctest::Approx(0.9210340371976183).epsilon(1e-14));
    // cited experimental band 6.2..8.4 dB corresponds to variances in (0.14, 0.24)
    CHECK(squeezing_db(std::pow(10.0, -0.62)) == doctest::Approx(6.2));
    CHECK(squeezing_db(std::pow(10.0, -0.84)) == doctest::Approx(8.4));
}

TEST_CASE("noisy_quadrature_correction") {
    CHECK(noisy_quadrature_correction(2.0, 0.0, 0.25) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    // table cross-check at gt a0 = 0.5
    const double a0 = 10.0, nb = 5.0;  // nb/a0^2 = 0.05
    OpgParams params;
    params.gt = 0.05;
    const auto st =
        gpa_displaced_thermal_correction(a0, std::numbers::pi / 2.0, nb, params);
    const double closed = noisy_quadrature_correction(a0, nb, params.gt);
    CHECK(quadrature_variance(st) == doctest::Approx(closed).epsilon(1e-6));
    CHECK_THROWS_AS(noisy_quadrature_correction(1.0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("noisy quadrature curve sits above the coherent curve") {
    const double a0 = 10.0, nb = 10.0;  // ratio 0.1 as in the squeezing figure
    for (double x = 0.1; x <= 1.2; x += 0.1) {
        const double gt = x / a0;
        CHECK(noisy_quadrature_correction(a0, nb, gt) > std::exp(-2.0 * x));
    }
}

TEST_CASE("S_L monotone in the dephasing width") {
    OpgParams params;
    params.gt = 0.15;
    double prev = -1.0;
    for (double dth : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
        const auto st = gpa_state(PumpModel::dephased_coherent(2.0, dth, 0.0), params);
        const double sl = linear_entropy(st);
        CHECK(sl >= prev - 1e-12);
        prev = sl;
    }
}

TEST_CASE("N = 0 iff all stored off-diagonals vanish") {
    OpgParams params;
    params.gt = 0.05;
    for (const auto& pump : {PumpModel::thermal(2.0), PumpModel::phase_averaged(3.0)}) {
        const auto st = gpa_state(pump, params);
        CHECK(negativity(st) <= 1e-7);
        double offdiag = 0.0;
        for (int n = 0; n <= st.cutoff(); ++n) {
            for (int m = 0; m < n; ++m) offdiag = std::max(offdiag, std::abs(st.at(n, m)));
        }
        CHECK(offdiag <= 1e-8);
    }
    const auto st = gpa_state(PumpModel::coherent(1.0), params);
    CHECK(negativity(st) > 0.0);
}

TEST_CASE("entanglement_report wires the measures together") {
    OpgParams params;
    params.gt = 0.2;
    const auto st = gpa_state(PumpModel::coherent(2.0, std::numbers::pi / 2.0), params);
    const auto rep = entanglement_report(st);
    CHECK(rep.negativity == doctest::Approx(negativity(st)));
    CHECK(rep.squeezing_db ==
          doctest::Approx(squeezing_db(rep.quadrature_variance_2dX)).epsilon(1e-12));
    CHECK(rep.linear_entropy >= 0.0);
}
