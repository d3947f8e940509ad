#pragma once

#include "motility/magnetics.hpp"

#include <span>
#include <vector>

namespace motility {

/// One (B, θ) cell of a sweep: zero-delay cross-correlation intensity
/// averaged over all analysis windows of all replicas.
struct SweepRecord
{
    double b_mt = 0;
    double theta_deg = 0;
    double intensity_nm2 = 0;
    double stderr_nm2 = 0;
    int n_windows = 1;
};

/// Parabola I ≈ α + βB + γB² (B in mT) and its vertex.
struct PeakFit
{
    double b_star_mt = 0;
    double m_hat_a_per_m = 0;
    double alpha = 0; // nm²
    double beta = 0;  // nm²/mT
    double gamma = 0; // nm²/mT²
    double residual_nm2 = 0; // RMS of unweighted residuals
};

/// Weighted least-squares parabola through the records (weights 1/stderr²
/// when every record carries a positive stderr, uniform otherwise).
/// Throws TooFewPoints for fewer than three distinct B values and
/// NotConcave when the fit has no interior maximum at B > 0.
PeakFit fit_peak(std::span<SweepRecord const> records);

struct AnglePoint
{
    double theta_deg = 0;
    double intensity_nm2 = 0;
    double stderr_nm2 = 0;
    int count = 0;
};

inline constexpr double default_angle_bin_deg = 15.0;

/// Groups records into θ bins centred on multiples of `bin_deg`, averaging
/// θ, intensity and combining standard errors. Sorted by θ.
std::vector<AnglePoint> angle_profile(std::span<SweepRecord const> records,
                                      double bin_deg = default_angle_bin_deg);

struct PeakReport
{
    double b_star_mt = 0;
    double m_a_per_m = 0;
    double moment_am2 = 0;
    double moment_bohr = 0;
    double interaction_j = 0;
};

PeakReport report(PeakFit const& fit, MonomerGeometry const& geometry = MonomerGeometry::actin());

} // namespace motility
