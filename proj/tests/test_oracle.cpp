#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opg/engine.hpp"
#include "opg/measures.hpp"
#include "opg/oracle.hpp"
#include "opg/pump.hpp"

using namespace opg;
namespace orc = opg::oracle;

TEST_CASE("evolve_coherent: gt = 0 is the vacuum projector") {
    OpgParams params;
    params.gt = 0.0;
    const auto st = orc::evolve_coherent(Complex{1.5, 0.0}, params, orc::auto_truncation(1.5));
    CHECK(st.at(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(st.at(1, 1)) < 1e-14);
    CHECK(std::abs(st.at(0, 1)) < 1e-14);
}

TEST_CASE("evolve_coherent: perturbative corner at |alpha| = 0.5, gt = 0.05") {
    const double a = 0.5, gt = 0.05;
    OpgParams params;
    params.gt = gt;
    const auto exact = orc::evolve_coherent(Complex{a, 0.0}, params, orc::auto_truncation(a));
    const auto pert = perturbative_state(PumpModel::coherent(a), params);
    double worst = 0.0;
    for (int n = 0; n <= 2; ++n) {
        for (int m = 0; m <= 2; ++m) {
            worst = std::max(worst, std::abs(exact.at(n, m) - pert.at(n, m)));
        }
    }
    CHECK(worst < 1e-4);  // acceptance bound at gt = 0.05
    CHECK(exact.trace() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(exact.hermiticity_defect() < 1e-12);
}

TEST_CASE("evolve_coherent: negativity within the trace-distance estimate of GPA") {
    const double a = 6.0, gt = 0.03;
    OpgParams params;
    params.gt = gt;
    const auto exact = orc::evolve_coherent(Complex{a, 0.0}, params, orc::auto_truncation(a));
    const double n_exact = negativity(exact);
    const double n_gpa = 0.5 * (std::exp(2.0 * gt * a) - 1.0);
    const double bound = gt * gt * (std::exp(4.0 * gt * a) - 1.0);
    CHECK(std::abs(n_exact - n_gpa) <= bound);
}

TEST_CASE("evolve_coherent: phase covariance through the amplitude argument") {
    OpgParams params;
    params.gt = 0.05;
    const double a = 1.2, th = 0.7;
    const auto plain = orc::evolve_coherent(Complex{a, 0.0}, params, orc::auto_truncation(a));
    const auto rotated = orc::evolve_coherent(a * Complex{std::cos(th), std::sin(th)}, params,
                                              orc::auto_truncation(a));
    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; m <= 3; ++m) {
            const Complex expect = plain.at(n, m) * std::exp(Complex(0.0, th * (n - m)));
            CHECK(std::abs(expect - rotated.at(n, m)) < 1e-12);
        }
    }
}

TEST_CASE("evolve_coherent: third-order negativity expansion") {
    CHECK(orc::third_order_negativity(1.0, 0.1) == doctest::Approx(0.1105).epsilon(1e-12));
    CHECK(orc::third_order_negativity(2.0, 0.0) == doctest::Approx(0.0));
    // difference from the GPA cubic is g^3 t^3 alpha0 / 6
    const double a0 = 1.3, gt = 0.05;
    const double gpa_cubic = gt * a0 + gt * gt * a0 * a0 +
                             2.0 / 3.0 * std::pow(gt * a0, 3.0);
    CHECK(gpa_cubic - orc::third_order_negativity(a0, gt) ==
          doctest::Approx(std::pow(gt, 3.0) * a0 / 6.0).epsilon(1e-10));
    // and the exact oracle follows the cubic to fourth order
    OpgParams params;
    params.gt = gt;
    const auto exact =
        orc::evolve_coherent(Complex{a0, 0.0}, params, orc::auto_truncation(a0));
    CHECK(std::abs(negativity(exact) - orc::third_order_negativity(a0, gt)) <
          5.0 * std::pow(gt * a0, 4.0));
}

TEST_CASE("evolve_coherent: slope of the perturbative residual is cubic") {
    const double a = 0.5;
    std::vector<double> gts = {0.01, 0.02, 0.05};
    std::vector<double> diffs;
    for (double gt : gts) {
        OpgParams params;
        params.gt = gt;
        const auto exact =
            orc::evolve_coherent(Complex{a, 0.0}, params, orc::auto_truncation(a));
        const auto pert = perturbative_state(PumpModel::coherent(a), params);
        double worst = 0.0;
        for (int n = 0; n <= 2; ++n) {
            for (int m = 0; m <= 2; ++m) {
                worst = std::max(worst, std::abs(exact.at(n, m) - pert.at(n, m)));
            }
        }
        diffs.push_back(worst);
    }
    const double slope = std::log(diffs.back() / diffs.front()) /
                         std::log(gts.back() / gts.front());
    CHECK(slope == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("sector conservation: no leakage outside the initial sectors") {
    // norm conservation per sector is checked inside evolve_coherent; here the
    // assembled trace must be 1 to the Poisson-tail accuracy
    OpgParams params;
    params.gt = 0.08;
    const auto st = orc::evolve_coherent(Complex{2.0, 0.0}, params, orc::auto_truncation(2.0));
    CHECK(st.trace() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evolve_mixture: single-node ring equals evolve_coherent up to phase average") {
    OpgParams params;
    params.gt = 0.05;
    const auto mix = orc::evolve_mixture(PumpModel::phase_averaged(2.0), params,
                                         orc::auto_truncation(2.0), 1);
    const auto coh = orc::evolve_coherent(Complex{2.0, 0.0}, params, orc::auto_truncation(2.0));
    // diagonals agree; off-diagonals are killed by the angular average
    for (int n = 0; n <= 4; ++n) {
        CHECK(std::abs(mix.at(n, n) - coh.at(n, n)) < 1e-12);
        for (int m = 0; m < n; ++m) CHECK(std::abs(mix.at(n, m)) < 1e-12);
    }
}

TEST_CASE("evolve_mixture: coherent kind delegates exactly") {
    OpgParams params;
    params.gt = 0.05;
    const auto mix = orc::evolve_mixture(PumpModel::coherent(1.5, 0.4), params,
                                         orc::auto_truncation(1.5), 8);
    const auto coh = orc::evolve_coherent(1.5 * Complex{std::cos(0.4), std::sin(0.4)}, params,
                                          orc::auto_truncation(1.5));
    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; m <= 3; ++m) {
            CHECK(std::abs(mix.at(n, m) - coh.at(n, m)) < 1e-14);
        }
    }
}

TEST_CASE("evolve_mixture: thermal pump cross-validates the gpa route") {
    const double nbar = 2.0, gt = 0.05;
    OpgParams params;
    params.gt = gt;
    const auto trunc = orc::auto_truncation(PumpModel::thermal(nbar).radial_bound());
    const auto mix = orc::evolve_mixture(PumpModel::thermal(nbar), params, trunc, 48);
    const auto gpa = gpa_state(PumpModel::thermal(nbar), params);
    for (int n = 0; n <= 6; ++n) {
        for (int m = 0; m < n; ++m) CHECK(std::abs(mix.at(n, m)) <= 1e-8);
        CHECK(std::abs(mix.at(n, n) - gpa.at(n, n)) < 2e-3);
    }
    CHECK(mix.trace() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("evolve_mixture: phase-averaged S_L matches the closed form") {
    const double a0 = 3.0, gt = 0.05;
    OpgParams params;
    params.gt = gt;
    const auto mix = orc::evolve_mixture(PumpModel::phase_averaged(a0), params,
                                         orc::auto_truncation(a0), 1);
    const double expect = 1.0 - 1.0 / std::cosh(2.0 * gt * a0);
    CHECK(linear_entropy(mix) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("evolve_mixture: node-doubling convergence") {
    const double nbar = 1.0, gt = 0.05;
    OpgParams params;
    params.gt = gt;
    const auto trunc = orc::auto_truncation(PumpModel::thermal(nbar).radial_bound());
    const auto a = orc::evolve_mixture(PumpModel::thermal(nbar), params, trunc, 24);
    const auto b = orc::evolve_mixture(PumpModel::thermal(nbar), params, trunc, 48);
    double drift = 0.0;
    for (int n = 0; n <= 5; ++n) drift = std::max(drift, std::abs(a.at(n, n) - b.at(n, n)));
    CHECK(drift < 1e-8);
}

TEST_CASE("evolve_mixture: refuses quasi-distribution pumps") {
    OpgParams params;
    params.gt = 0.01;
    const auto kerr = kerr_modulate(PumpModel::displaced_thermal(2.0, 1.0), 0.01);
    CHECK_THROWS_AS(
        orc::evolve_mixture(kerr, params, orc::auto_truncation(2.0), 8),
        std::invalid_argument);
}

TEST_CASE("evolve_coherent: parallel and serial agree bitwise") {
    OpgParams params;
    params.gt = 0.07;
    const auto a =
        orc::evolve_coherent(Complex{1.5, 0.5}, params, orc::auto_truncation(2.0), true);
    const auto b =
        orc::evolve_coherent(Complex{1.5, 0.5}, params, orc::auto_truncation(2.0), false);
    for (int n = 0; n <= a.cutoff(); ++n) {
        for (int m = 0; m <= a.cutoff(); ++m) {
            CHECK(a.at(n, m) == b.at(n, m));
        }
    }
}
