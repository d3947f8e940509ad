#pragma once

// Kinematic pipeline for speckle-marker tracks: boxcar smoothing, tangent
// estimation on the smoothed track, decomposition of the residual into
// parallel and perpendicular components, marker distances, and a
// sub-pixel centroid for toy intensity images.

#include "motility/vec2.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace motility {

using FrameIndex = std::int64_t;
using MarkerId = int;

struct TrackSample
{
    FrameIndex frame = 0;
    Vec2 position; // nm
};

/// Raw marker trajectory. Frames are strictly increasing; gaps are allowed.
class MarkerTrack
{
public:
    MarkerTrack(MarkerId id, std::vector<TrackSample> samples);

    MarkerId id() const { return _id; }
    std::span<TrackSample const> samples() const { return _samples; }
    std::size_t size() const { return _samples.size(); }

    /// Position at the given frame, if recorded.
    std::optional<Vec2> at(FrameIndex frame) const;

private:
    MarkerId _id;
    std::vector<TrackSample> _samples;
};

struct SmoothedTrack
{
    MarkerId marker_id = 0;
    int window = 0;
    std::vector<TrackSample> samples;

    std::optional<Vec2> at(FrameIndex frame) const;
};

struct DisplacementSample
{
    FrameIndex frame = 0;
    double parallel = 0;      // nm
    double perpendicular = 0; // nm
};

struct DisplacementSeries
{
    MarkerId marker_id = 0;
    std::vector<DisplacementSample> samples;
};

inline constexpr int default_smoothing_window = 21;
inline constexpr double default_tangent_epsilon_nm = 1.0e-3;

/// Centred moving average. A frame is emitted only when all `window`
/// consecutive frames around it are present.
SmoothedTrack smooth(MarkerTrack const& track, int window = default_smoothing_window);

/// Unit tangent of the smoothed track at `frame` by central difference.
/// Throws FrameMissing when a neighbour is absent and DegenerateTangent
/// when the chord is shorter than `epsilon_nm`.
Vec2 tangent(SmoothedTrack const& smoothed, FrameIndex frame,
             double epsilon_nm = default_tangent_epsilon_nm);

/// Parallel/perpendicular decomposition of actual − smoothed. Frames whose
/// tangent is degenerate reuse the most recent valid tangent, or are
/// dropped if there is none yet. The perpendicular axis is the tangent
/// rotated by +90°.
DisplacementSeries decompose(MarkerTrack const& track, SmoothedTrack const& smoothed,
                             double epsilon_nm = default_tangent_epsilon_nm);

double marker_distance(MarkerTrack const& a, MarkerTrack const& b, FrameIndex frame);

/// Distance averaged over every frame recorded in both tracks.
double mean_marker_distance(MarkerTrack const& a, MarkerTrack const& b);

/// Row-major non-negative intensity image. Pixel (row, col) has its centre
/// at (col·pitch, row·pitch) nm.
struct IntensityGrid
{
    double pixel_pitch_nm = 60.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
};

/// Intensity-weighted mean of pixel centres, nm.
Vec2 centroid(IntensityGrid const& grid);

} // namespace motility
