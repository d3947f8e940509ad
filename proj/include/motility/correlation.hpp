#pragma once

// Windowed covariance estimator for displacement series.
//
// Within one analysis window of N aligned samples,
//
//   C(τ) = 1/(N − |τ|) · Σ_t (a_t − ā)(b_{t+τ} − b̄)
//
// with ā, b̄ taken over that window. The record is cut into consecutive
// non-overlapping windows; per-lag values are averaged over windows and
// reported with their standard error. Values stay in nm² (no
// normalisation to a correlation coefficient).
//
// The N − |τ| divisor makes each lag unbiased but drops the Cauchy-Schwarz
// guarantee of the 1/N estimator: for arbitrary short records only
// |C(τ)| ≤ N/(N − |τ|)·C(0) holds for autocorrelations.

#include "motility/tracking.hpp"
#include "motility/units.hpp"

#include <span>
#include <utility>
#include <vector>

namespace motility {

inline constexpr int default_correlation_window = 99; // 3.3 s at 30 fps
inline constexpr int default_max_lag = 30;

struct LagValue
{
    int lag = 0;          // frames, b shifted by +lag
    double delay_s = 0;
    double value = 0;     // nm²
    double std_error = 0; // nm²; 0 when only one window contributed
};

struct CorrelationFunction
{
    std::pair<MarkerId, MarkerId> pair{0, 0};
    Seconds window{0.0};
    int window_frames = 0;
    int n_windows = 0;
    std::vector<LagValue> lags; // ordered from -max_lag to +max_lag
    /// Per-window zero-lag values, in window order.
    std::vector<double> window_intensities;

    LagValue const& at_lag(int lag) const;
    double zero_lag() const { return at_lag(0).value; }
};

/// Single-window estimator on two equally long spans; returns C(τ) for
/// τ = -max_lag..max_lag.
std::vector<double> window_correlation(std::span<double const> a, std::span<double const> b,
                                       int max_lag);

/// Cross-correlation of the parallel components of two displacement
/// series, aligned by frame. Windows never straddle a gap in the aligned
/// frame sequence.
CorrelationFunction cross_correlation(DisplacementSeries const& a, DisplacementSeries const& b,
                                      int max_lag, int window = default_correlation_window,
                                      FrameClock const& clock = {});

CorrelationFunction auto_correlation(DisplacementSeries const& a, int max_lag,
                                     int window = default_correlation_window,
                                     FrameClock const& clock = {});

/// Zero-delay cross-correlation intensity, nm².
double intensity(DisplacementSeries const& a, DisplacementSeries const& b,
                 int window = default_correlation_window);

/// Same estimators on plain aligned value arrays.
CorrelationFunction cross_correlation(std::span<double const> a, std::span<double const> b,
                                      int max_lag, int window = default_correlation_window,
                                      FrameClock const& clock = {});

} // namespace motility
