#pragma once

// CSV tables exchanged between commands. Comma separated, LF line endings,
// fixed header and column order. Numbers are written in the shortest form
// that parses back to the same double, so emit → read → emit is
// byte-identical.

#include "motility/correlation.hpp"
#include "motility/estimation.hpp"
#include "motility/tracking.hpp"
#include "motility/units.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace motility::csv {

inline constexpr char const* trajectory_header = "frame,time_s,marker_id,x_nm,y_nm";
inline constexpr char const* displacement_header = "frame,marker_id,parallel_nm,perp_nm";
inline constexpr char const* correlation_header = "pair,delay_s,c_nm2,stderr_nm2";
inline constexpr char const* sweep_header = "b_mt,theta_deg,intensity_nm2,stderr_nm2,n_windows";
inline constexpr char const* fit_header =
    "theta_deg,b_star_mt,m_a_per_m,moment_am2,moment_bohr,interaction_j,"
    "alpha_nm2,beta_nm2_per_mt,gamma_nm2_per_mt2,residual_nm2";
inline constexpr char const* angle_header = "theta_deg,intensity_nm2,stderr_nm2,count";

std::string format_number(double value);

/// Rows ordered by frame, then marker id.
void write_trajectory(std::ostream& out, std::vector<MarkerTrack> const& tracks,
                      FrameClock const& clock = {});
/// Tracks ordered by marker id.
std::vector<MarkerTrack> read_trajectory(std::istream& in);

void write_displacements(std::ostream& out, std::vector<DisplacementSeries> const& series);
std::vector<DisplacementSeries> read_displacements(std::istream& in);

struct CorrelationRow
{
    MarkerId first = 0;
    MarkerId second = 0;
    double delay_s = 0;
    double c_nm2 = 0;
    double stderr_nm2 = 0;
};

std::string pair_label(MarkerId first, MarkerId second);
std::vector<CorrelationRow> correlation_rows(std::vector<CorrelationFunction> const& functions);
void write_correlations(std::ostream& out, std::vector<CorrelationRow> const& rows);
std::vector<CorrelationRow> read_correlations(std::istream& in);

void write_sweep(std::ostream& out, std::vector<SweepRecord> const& records);
std::vector<SweepRecord> read_sweep(std::istream& in);

struct FitRow
{
    double theta_deg = 0;
    PeakFit fit;
    PeakReport report;
};

void write_fits(std::ostream& out, std::vector<FitRow> const& rows);
std::vector<FitRow> read_fits(std::istream& in);

void write_angle_profile(std::ostream& out, std::vector<AnglePoint> const& points);

} // namespace motility::csv
