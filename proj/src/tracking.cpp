#include "motility/tracking.hpp"

#include "motility/errors.hpp"

#include <algorithm>
#include <string>

namespace motility {

namespace {

std::optional<Vec2> find_frame(std::span<TrackSample const> samples, FrameIndex frame)
{
    auto const it = std::lower_bound(
        samples.begin(), samples.end(), frame,
        [](TrackSample const& s, FrameIndex f) { return s.frame < f; });
    if (it == samples.end() || it->frame != frame) {
        return std::nullopt;
    }
    return it->position;
}

std::optional<Vec2> try_tangent(SmoothedTrack const& smoothed, FrameIndex frame, double epsilon_nm,
                                bool& neighbours_present)
{
    auto const prev = smoothed.at(frame - 1);
    auto const next = smoothed.at(frame + 1);
    neighbours_present = prev && next;
    if (!neighbours_present) {
        return std::nullopt;
    }
    Vec2 const chord = *next - *prev;
    double const length = norm(chord);
    if (length < epsilon_nm) {
        return std::nullopt;
    }
    return chord / length;
}

} // namespace

MarkerTrack::MarkerTrack(MarkerId id, std::vector<TrackSample> samples)
    : _id{id}, _samples{std::move(samples)}
{
    if (_samples.empty()) {
        throw InvalidTrack("marker " + std::to_string(id) + ": track has no samples");
    }
    for (std::size_t i = 0; i < _samples.size(); ++i) {
        if (!is_finite(_samples[i].position)) {
            throw InvalidTrack("marker " + std::to_string(id) + ": non-finite position");
        }
        if (i > 0 && _samples[i].frame <= _samples[i - 1].frame) {
            throw InvalidTrack("marker " + std::to_string(id) + ": frames not strictly increasing");
        }
    }
}

std::optional<Vec2> MarkerTrack::at(FrameIndex frame) const
{
    return find_frame(_samples, frame);
}

std::optional<Vec2> SmoothedTrack::at(FrameIndex frame) const
{
    return find_frame(samples, frame);
}

SmoothedTrack smooth(MarkerTrack const& track, int window)
{
    if (window < 3 || window % 2 == 0) {
        throw InvalidWindow("smoothing window must be odd and >= 3, got " + std::to_string(window));
    }
    auto const samples = track.samples();
    auto const width = static_cast<std::size_t>(window);
    if (samples.size() < width) {
        throw TrackTooShort("marker " + std::to_string(track.id()) + ": " +
                            std::to_string(samples.size()) + " samples < window " +
                            std::to_string(window));
    }

    SmoothedTrack out{track.id(), window, {}};
    out.samples.reserve(samples.size() - width + 1);

    std::size_t const half = width / 2;
    for (std::size_t first = 0; first + width <= samples.size(); ++first) {
        // Frames are strictly increasing, so this span is gap-free.
        if (samples[first + width - 1].frame - samples[first].frame != window - 1) {
            continue;
        }
        Vec2 sum;
        for (std::size_t k = first; k < first + width; ++k) {
            sum += samples[k].position;
        }
        out.samples.push_back({samples[first + half].frame, sum / static_cast<double>(window)});
    }
    return out;
}

Vec2 tangent(SmoothedTrack const& smoothed, FrameIndex frame, double epsilon_nm)
{
    bool neighbours = false;
    auto const u = try_tangent(smoothed, frame, epsilon_nm, neighbours);
    if (!neighbours) {
        throw FrameMissing("tangent at frame " + std::to_string(frame) + " needs both neighbours");
    }
    if (!u) {
        throw DegenerateTangent("smoothed track is stationary at frame " + std::to_string(frame));
    }
    return *u;
}

DisplacementSeries decompose(MarkerTrack const& track, SmoothedTrack const& smoothed,
                             double epsilon_nm)
{
    if (track.id() != smoothed.marker_id) {
        throw InvalidTrack("decompose: marker ids differ (" + std::to_string(track.id()) + " vs " +
                           std::to_string(smoothed.marker_id) + ")");
    }

    DisplacementSeries out{track.id(), {}};
    out.samples.reserve(smoothed.samples.size());

    std::optional<Vec2> last_valid;
    for (TrackSample const& ref : smoothed.samples) {
        auto const actual = track.at(ref.frame);
        if (!actual) {
            throw FrameMissing("decompose: frame " + std::to_string(ref.frame) +
                               " of smoothed track absent from raw track");
        }

        bool neighbours = false;
        auto u = try_tangent(smoothed, ref.frame, epsilon_nm, neighbours);
        if (!neighbours) {
            continue;
        }
        if (u) {
            last_valid = u;
        } else if (last_valid) {
            u = last_valid;
        } else {
            continue;
        }

        Vec2 const offset = *actual - ref.position;
        out.samples.push_back({ref.frame, dot(offset, *u), dot(offset, perp(*u))});
    }
    return out;
}

double marker_distance(MarkerTrack const& a, MarkerTrack const& b, FrameIndex frame)
{
    auto const pa = a.at(frame);
    auto const pb = b.at(frame);
    if (!pa || !pb) {
        throw FrameMissing("frame " + std::to_string(frame) + " not recorded for both markers");
    }
    return norm(*pa - *pb);
}

double mean_marker_distance(MarkerTrack const& a, MarkerTrack const& b)
{
    double sum = 0;
    std::size_t count = 0;
    for (TrackSample const& s : a.samples()) {
        if (auto const pb = b.at(s.frame)) {
            sum += norm(s.position - *pb);
            ++count;
        }
    }
    if (count == 0) {
        throw FrameMissing("markers " + std::to_string(a.id()) + " and " + std::to_string(b.id()) +
                           " share no frames");
    }
    return sum / static_cast<double>(count);
}

Vec2 centroid(IntensityGrid const& grid)
{
    if (grid.values.size() != grid.rows * grid.cols) {
        throw Error("intensity grid size does not match its shape");
    }
    double total = 0;
    double sum_x = 0;
    double sum_y = 0;
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            double const w = grid(r, c);
            if (w < 0 || !std::isfinite(w)) {
                throw Error("intensity grid values must be finite and non-negative");
            }
            total += w;
            sum_x += w * static_cast<double>(c);
            sum_y += w * static_cast<double>(r);
        }
    }
    if (total <= 0) {
        throw EmptyGrid("intensity grid has zero total intensity");
    }
    return {sum_x / total * grid.pixel_pitch_nm, sum_y / total * grid.pixel_pitch_nm};
}

} // namespace motility
