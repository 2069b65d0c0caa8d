#include "opg/io.hpp"

#include <charconv>
#include <numbers>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace opg::io {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_polar_grid_csv(const PolarGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "radius,angle,p_value\n";
    for (int j = 0; j < grid.n_radii(); ++j) {
        for (int k = 0; k < grid.n_angles(); ++k) {
            out << format_double(grid.radii[j]) << ',' << format_double(grid.angles[k]) << ','
                << format_double(grid.at(j, k)) << '\n';
        }
    }
}

PolarGrid read_polar_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "radius,angle,p_value") {
        throw std::runtime_error("bad polar grid header in " + path.string());
    }
    PolarGrid g;
    std::vector<double> r, a, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x[3];
        size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
            const size_t next = i < 2 ? line.find(',', pos) : line.size();
            const auto res = std::from_chars(line.data() + pos, line.data() + next, x[i]);
            if (res.ec != std::errc{}) throw std::runtime_error("bad number in grid CSV");
            pos = next + 1;
        }
        r.push_back(x[0]);
        a.push_back(x[1]);
        v.push_back(x[2]);
    }
    // reconstruct axes from the row-major layout
    for (size_t i = 0; i < a.size(); ++i) {
        if (i > 0 && a[i] < a[i - 1]) break;
        g.angles.push_back(a[i]);
    }
    const size_t n_ang = g.angles.size();
    if (n_ang == 0 || v.size() % n_ang != 0) {
        throw std::runtime_error("inconsistent polar grid CSV");
    }
    for (size_t i = 0; i < v.size(); i += n_ang) g.radii.push_back(r[i]);
    g.values = std::move(v);
    g.validate();
    return g;
}

void write_phase_distribution_csv(const PhaseDistribution& dist,
                                  const std::filesystem::path& path, int grid_points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "theta,L\n";
    for (int k = 0; k < grid_points; ++k) {
        const double theta = k * 2.0 * std::numbers::pi / grid_points;
        out << format_double(theta) << ',' << format_double(dist.evaluate(theta)) << '\n';
    }
}

void write_two_mode_state_csv(const TwoModeState& state, double gt,
                              const std::string& pump_descriptor,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "n,m,re,im\n";
    for (int n = 0; n <= state.cutoff(); ++n) {
        for (int m = 0; m <= state.cutoff(); ++m) {
            out << n << ',' << m << ',' << format_double(state.at(n, m).real()) << ','
                << format_double(state.at(n, m).imag()) << '\n';
        }
    }
    nlohmann::json side;
    side["gt"] = gt;
    side["cutoff"] = state.cutoff();
    side["tail_bound"] = state.tail_bound();
    side["form_tag"] = state.form() == StateForm::Perturbative ? "Perturbative" : "GPA";
    side["pump"] = pump_descriptor;
    auto spath = path;
    spath.replace_extension(".json");
    std::ofstream sout(spath, std::ios::binary);
    sout << side.dump(2) << '\n';
}

std::string report_csv_row(const std::string& pump_kind, double gt, double param1, double param2,
                           const EntanglementReport& report) {
    std::ostringstream out;
    out << pump_kind << ',' << format_double(gt) << ',' << format_double(param1) << ','
        << format_double(param2) << ',' << format_double(report.negativity) << ','
        << format_double(report.linear_entropy) << ','
        << format_double(report.quadrature_variance_2dX) << ','
        << format_double(report.squeezing_db);
    return out.str();
}

}  // namespace opg::io
