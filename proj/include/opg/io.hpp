#pragma once

#include <filesystem>
#include <string>

#include "opg/engine.hpp"
#include "opg/measures.hpp"
#include "opg/phase_dist.hpp"
#include "opg/pump.hpp"

namespace opg::io {

/// Shortest round-trip-exact decimal form of a double (LF line endings and
/// '.' decimal separator everywhere).
std::string format_double(double v);

/// CSV with header `radius,angle,p_value`, row-major radius-then-angle.
void write_polar_grid_csv(const PolarGrid& grid, const std::filesystem::path& path);
PolarGrid read_polar_grid_csv(const std::filesystem::path& path);

/// CSV `theta,L` on a uniform 2048-point grid.
void write_phase_distribution_csv(const PhaseDistribution& dist,
                                  const std::filesystem::path& path, int grid_points = 2048);

/// CSV `n,m,re,im` plus a JSON sidecar (same stem, .json) with
/// {gt, cutoff, tail_bound, form_tag, pump descriptor}.
void write_two_mode_state_csv(const TwoModeState& state, double gt,
                              const std::string& pump_descriptor,
                              const std::filesystem::path& path);

/// One-line report row `pump_kind,gt,param1,param2,negativity,linear_entropy,
/// var2dX,squeezing_db`.
std::string report_csv_row(const std::string& pump_kind, double gt, double param1, double param2,
                           const EntanglementReport& report);

}  // namespace opg::io
