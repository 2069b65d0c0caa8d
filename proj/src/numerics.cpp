#include "opg/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace opg::num {

namespace {

constexpr int kPanelOrder = 15;

struct PanelRule {
    std::vector<double> nodes, weights;  // on [-1, 1]
};

const PanelRule& panel_rule() {
    static const PanelRule rule = [] {
        PanelRule r;
        gauss_legendre(kPanelOrder, r.nodes, r.weights);
        return r;
    }();
    return rule;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration from the Chebyshev-based initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    gauss_legendre(n, nodes, weights);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
}

namespace {

struct RadialIntegrand {
    const PolarFunction* f;
    int angular_order;
    long evaluations = 0;

    // Integral of f over the angle at fixed radius, by periodic trapezoid.
    Complex operator()(double r) {
        const double dtheta = 2.0 * std::numbers::pi / angular_order;
        Complex acc{0.0, 0.0};
        for (int k = 0; k < angular_order; ++k) {
            const double theta = k * dtheta;
            const Complex v = (*f)(r, theta);
            if (std::isnan(v.real()) || std::isnan(v.imag())) {
                throw std::runtime_error("integrate_polar: integrand returned NaN at r=" +
                                         std::to_string(r) + ", theta=" + std::to_string(theta));
            }
            acc += v;
        }
        ++evaluations;
        return acc * dtheta;
    }
};

Complex panel_sum(RadialIntegrand& g, double a, double b) {
    const auto& rule = panel_rule();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex acc{0.0, 0.0};
    for (int i = 0; i < kPanelOrder; ++i) {
        acc += rule.weights[i] * g(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

struct AdaptiveState {
    RadialIntegrand* g;
    double abs_tol, rel_tol;
    int max_panels;
    int panels_used = 0;
    bool converged = true;
    Complex total{0.0, 0.0};
    double error = 0.0;
    double scale_hint = 0.0;  // coarse |integral| for relative tolerance

    // Depth-first left-to-right bisection; deterministic order and sums.
    void refine(double a, double b, Complex whole, int depth) {
        const double mid = 0.5 * (a + b);
        const Complex left = panel_sum(*g, a, mid);
        const Complex right = panel_sum(*g, mid, b);
        panels_used += 2;
        const double err = std::abs(left + right - whole);
        const double local_tol =
            std::max(abs_tol, rel_tol * scale_hint) * ((b - a) / span) * 0.5;
        if (err <= local_tol || depth >= 60 || panels_used >= max_panels) {
            if (err > local_tol) converged = false;
            total += left + right;
            error += err;
            return;
        }
        refine(a, mid, left, depth + 1);
        refine(mid, b, right, depth + 1);
    }

    double span = 1.0;
};

}  // namespace

IntegrationResult integrate_polar(const PolarFunction& f, const QuadratureSpec& spec,
                                  int angular_order) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || !(spec.radial_cutoff > 0.0) ||
        spec.max_subdivisions < 1) {
        throw std::invalid_argument("integrate_polar: invalid QuadratureSpec");
    }
    RadialIntegrand g{&f, angular_order};

    // Coarse pass over a fixed panel split to seed the relative-error scale.
    const int seed_panels = 8;
    const double R = spec.radial_cutoff;
    Complex coarse{0.0, 0.0};
    std::vector<Complex> seeds(seed_panels);
    for (int i = 0; i < seed_panels; ++i) {
        seeds[i] = panel_sum(g, R * i / seed_panels, R * (i + 1) / seed_panels);
        coarse += seeds[i];
    }

    AdaptiveState st;
    st.g = &g;
    st.abs_tol = spec.abs_tol;
    st.rel_tol = spec.rel_tol;
    st.max_panels = spec.max_subdivisions;
    st.scale_hint = std::abs(coarse);
    st.span = R;
    for (int i = 0; i < seed_panels; ++i) {
        st.refine(R * i / seed_panels, R * (i + 1) / seed_panels, seeds[i], 0);
    }

    IntegrationResult out;
    out.value = st.total;
    out.error_estimate = st.error;
    out.evaluations = g.evaluations * angular_order;
    out.converged =
        st.converged && st.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(st.total));
    return out;
}

Svd svd(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw std::invalid_argument("svd: non-finite entries");
    Svd out;
    if (m.rows() <= 32 && m.cols() <= 32) {
        Eigen::JacobiSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.singular_values = dec.singularValues();
        out.left = dec.matrixU();
        out.right = dec.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.singular_values = dec.singularValues();
        out.left = dec.matrixU();
        out.right = dec.matrixV();
    }
    return out;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
    // Higham's scaling-and-squaring with the [13/13] Pade approximant.
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    const double theta13 = 5.371920351148152;
    Eigen::MatrixXcd as = a;
    if (norm > theta13) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
        as /= std::pow(2.0, squarings);
    }
    const auto n = a.rows();
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = as * as;
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a2 * a4;
    const Eigen::MatrixXcd u =
        as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
              b[1] * ident);
    const Eigen::MatrixXcd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                               b[4] * a4 + b[2] * a2 + b[0] * ident;
    Eigen::MatrixXcd r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

Eigen::VectorXcd unitary_evolve(const Eigen::MatrixXcd& hamiltonian, double time,
                                const Eigen::VectorXcd& state) {
    if (hamiltonian.rows() != hamiltonian.cols()) {
        throw std::invalid_argument("unitary_evolve: hamiltonian must be square");
    }
    if (hamiltonian.rows() != state.size()) {
        throw std::invalid_argument("unitary_evolve: dimension mismatch");
    }
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    const double herm_defect = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-12 * scale) {
        throw std::invalid_argument("unitary_evolve: hamiltonian not Hermitian within 1e-12");
    }
    if (std::abs(state.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("unitary_evolve: state not normalized within 1e-12");
    }
    const Complex minus_i{0.0, -1.0};
    return expm(minus_i * time * hamiltonian) * state;
}

}  // namespace opg::num
