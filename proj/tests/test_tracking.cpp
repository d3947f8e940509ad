#include "motility/errors.hpp"
#include "motility/tracking.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace motility;

namespace {

MarkerTrack track_from(std::vector<Vec2> const& points, MarkerId id = 1, FrameIndex first = 0)
{
    std::vector<TrackSample> samples;
    for (std::size_t i = 0; i < points.size(); ++i) {
        samples.push_back({first + static_cast<FrameIndex>(i), points[i]});
    }
    return MarkerTrack(id, std::move(samples));
}

MarkerTrack x_ramp(std::vector<double> const& xs)
{
    std::vector<Vec2> points;
    for (double x : xs) {
        points.push_back({x, 0});
    }
    return track_from(points);
}

std::vector<Vec2> random_walk(std::mt19937_64& rng, int n, double drift)
{
    std::normal_distribution<double> noise(0.0, 10.0);
    std::vector<Vec2> points;
    Vec2 p{};
    for (int i = 0; i < n; ++i) {
        p += Vec2{drift + noise(rng), noise(rng)};
        points.push_back(p);
    }
    return points;
}

} // namespace

TEST(MarkerTrack, Invariants)
{
    EXPECT_THROW(MarkerTrack(1, {}), InvalidTrack);
    EXPECT_THROW(MarkerTrack(1, {{0, {0, 0}}, {0, {1, 1}}}), InvalidTrack);
    EXPECT_THROW(MarkerTrack(1, {{1, {0, 0}}, {0, {1, 1}}}), InvalidTrack);
    EXPECT_THROW(MarkerTrack(1, {{0, {std::nan(""), 0}}}), InvalidTrack);
    MarkerTrack const t(4, {{2, {1, 2}}, {5, {3, 4}}});
    EXPECT_EQ(t.at(5), (Vec2{3, 4}));
    EXPECT_FALSE(t.at(3).has_value());
}

TEST(Smooth, ConstantTrackIsFixpoint)
{
    auto const t = track_from(std::vector<Vec2>(30, Vec2{5, 5}));
    auto const s = smooth(t, 21);
    ASSERT_EQ(s.samples.size(), 10u);
    for (auto const& sample : s.samples) {
        EXPECT_EQ(sample.position, (Vec2{5, 5}));
    }
    EXPECT_EQ(s.samples.front().frame, 10);
}

TEST(Smooth, LinearRampKeepsCentres)
{
    auto const s = smooth(x_ramp({0, 1, 2, 3, 4}), 3);
    ASSERT_EQ(s.samples.size(), 3u);
    EXPECT_EQ(s.samples[0].position.x, 1.0);
    EXPECT_EQ(s.samples[1].position.x, 2.0);
    EXPECT_EQ(s.samples[2].position.x, 3.0);
}

TEST(Smooth, HandMean)
{
    auto const s = smooth(x_ramp({0, 0, 3}), 3);
    ASSERT_EQ(s.samples.size(), 1u);
    EXPECT_EQ(s.samples[0].position.x, 1.0);
    EXPECT_EQ(s.samples[0].frame, 1);
}

TEST(Smooth, Errors)
{
    auto const t = x_ramp({0, 1, 2, 3, 4});
    EXPECT_THROW(smooth(t, 4), InvalidWindow);
    EXPECT_THROW(smooth(t, 1), InvalidWindow);
    EXPECT_THROW(smooth(t, 7), TrackTooShort);
}

TEST(Smooth, OutputLengthAndDirectMean)
{
    std::mt19937_64 rng{1};
    auto const points = random_walk(rng, 200, 3.0);
    auto const s = smooth(track_from(points), 21);
    ASSERT_EQ(s.samples.size(), 200u - 21 + 1);
    for (auto const& sample : s.samples) {
        Vec2 sum{};
        for (FrameIndex k = sample.frame - 10; k <= sample.frame + 10; ++k) {
            sum += points[static_cast<std::size_t>(k)];
        }
        EXPECT_NEAR(sample.position.x, sum.x / 21, 1e-9);
        EXPECT_NEAR(sample.position.y, sum.y / 21, 1e-9);
    }
}

TEST(Smooth, SkipsWindowsAcrossGaps)
{
    std::vector<TrackSample> samples;
    for (FrameIndex f = 0; f < 10; ++f) {
        if (f != 5) {
            samples.push_back({f, {static_cast<double>(f), 0}});
        }
    }
    auto const s = smooth(MarkerTrack(1, samples), 3);
    std::vector<FrameIndex> frames;
    for (auto const& x : s.samples) {
        frames.push_back(x.frame);
    }
    EXPECT_EQ(frames, (std::vector<FrameIndex>{1, 2, 3, 7, 8}));
}

TEST(Smooth, IsLinear)
{
    std::mt19937_64 rng{2};
    auto const p1 = random_walk(rng, 120, 1.0);
    auto const p2 = random_walk(rng, 120, -2.0);
    double const a = 1.7;
    double const b = -0.4;
    std::vector<Vec2> mix;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        mix.push_back(a * p1[i] + b * p2[i]);
    }
    auto const s1 = smooth(track_from(p1));
    auto const s2 = smooth(track_from(p2));
    auto const sm = smooth(track_from(mix));
    for (std::size_t i = 0; i < sm.samples.size(); ++i) {
        Vec2 const expected = a * s1.samples[i].position + b * s2.samples[i].position;
        EXPECT_NEAR(sm.samples[i].position.x, expected.x, 1e-9 * (1 + std::abs(expected.x)));
        EXPECT_NEAR(sm.samples[i].position.y, expected.y, 1e-9 * (1 + std::abs(expected.y)));
    }
}

TEST(Tangent, Examples)
{
    SmoothedTrack x_axis{1, 3, {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}}};
    EXPECT_EQ(tangent(x_axis, 1), (Vec2{1, 0}));

    SmoothedTrack y_axis{1, 3, {{0, {0, 0}}, {1, {0, 1}}, {2, {0, 2}}}};
    EXPECT_EQ(tangent(y_axis, 1), (Vec2{0, 1}));

    SmoothedTrack diagonal{1, 3, {{0, {0, 0}}, {1, {1, 1}}, {2, {2, 2}}}};
    Vec2 const t = tangent(diagonal, 1);
    EXPECT_NEAR(t.x, std::sqrt(2.0) / 2, 1e-15);
    EXPECT_NEAR(t.y, std::sqrt(2.0) / 2, 1e-15);
    EXPECT_NEAR(norm(t), 1.0, 1e-15);
}

TEST(Tangent, Errors)
{
    SmoothedTrack still{1, 3, {{0, {1, 1}}, {1, {1, 1}}, {2, {1, 1}}}};
    EXPECT_THROW(tangent(still, 1), DegenerateTangent);
    EXPECT_THROW(tangent(still, 0), FrameMissing);
}

TEST(Decompose, Examples)
{
    SmoothedTrack straight{1, 3, {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}}};

    auto const same = decompose(MarkerTrack(1, {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}}), straight);
    ASSERT_EQ(same.samples.size(), 1u);
    EXPECT_EQ(same.samples[0].parallel, 0.0);
    EXPECT_EQ(same.samples[0].perpendicular, 0.0);

    auto const aligned = decompose(MarkerTrack(1, {{0, {0, 0}}, {1, {4, 0}}, {2, {2, 0}}}), straight);
    EXPECT_EQ(aligned.samples.at(0).parallel, 3.0);
    EXPECT_EQ(aligned.samples.at(0).perpendicular, 0.0);

    auto const offset = decompose(MarkerTrack(1, {{0, {0, 0}}, {1, {4, 4}}, {2, {2, 0}}}), straight);
    EXPECT_EQ(offset.samples.at(0).frame, 1);
    EXPECT_EQ(offset.samples.at(0).parallel, 3.0);
    EXPECT_EQ(offset.samples.at(0).perpendicular, 4.0);
}

TEST(Decompose, ReusesLastTangentThroughStall)
{
    SmoothedTrack s{1, 3, {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}, {3, {2, 0}}, {4, {2, 0}}, {5, {2, 0}}}};
    MarkerTrack const raw(1, {{0, {0, 0}}, {1, {1, 1}}, {2, {2, 1}}, {3, {3, 2}}, {4, {2, 5}}, {5, {2, 0}}});
    auto const d = decompose(raw, s);
    ASSERT_EQ(d.samples.size(), 4u);
    // frames 3 and 4 have zero chords and keep frame 2's +x tangent
    EXPECT_EQ(d.samples[2].frame, 3);
    EXPECT_EQ(d.samples[2].parallel, 1.0);
    EXPECT_EQ(d.samples[2].perpendicular, 2.0);
    EXPECT_EQ(d.samples[3].frame, 4);
    EXPECT_EQ(d.samples[3].perpendicular, 5.0);
}

TEST(Decompose, DropsFramesBeforeFirstValidTangent)
{
    SmoothedTrack s{1, 3, {{0, {0, 0}}, {1, {0, 0}}, {2, {0, 0}}, {3, {1, 0}}, {4, {2, 0}}}};
    MarkerTrack const raw(1, {{0, {0, 0}}, {1, {0, 1}}, {2, {0, 1}}, {3, {1, 1}}, {4, {2, 0}}});
    auto const d = decompose(raw, s);
    ASSERT_EQ(d.samples.size(), 2u);
    EXPECT_EQ(d.samples[0].frame, 2);
    EXPECT_EQ(d.samples[0].perpendicular, 1.0);
}

TEST(Decompose, Errors)
{
    SmoothedTrack s{2, 3, {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}}};
    EXPECT_THROW(decompose(MarkerTrack(1, {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}}), s), InvalidTrack);
    EXPECT_THROW(decompose(MarkerTrack(2, {{0, {0, 0}}, {2, {2, 0}}}), s), FrameMissing);
}

TEST(Decompose, PythagoreanIdentityAndRotationInvariance)
{
    std::mt19937_64 rng{5};
    auto const points = random_walk(rng, 300, 4.0);
    auto const base_track = track_from(points);
    auto const base_smooth = smooth(base_track);
    auto const base = decompose(base_track, base_smooth);
    ASSERT_GT(base.samples.size(), 250u);

    for (auto const& d : base.samples) {
        Vec2 const delta = *base_track.at(d.frame) - *base_smooth.at(d.frame);
        double const lhs = d.parallel * d.parallel + d.perpendicular * d.perpendicular;
        double const rhs = squared_norm(delta);
        EXPECT_LE(std::abs(lhs - rhs), 1e-9 * rhs + 1e-300);
    }

    for (double phi : {0.3, std::numbers::pi / 2, 2.5, -1.0}) {
        std::vector<Vec2> rotated;
        for (Vec2 p : points) {
            rotated.push_back(rotate(p, phi));
        }
        auto const t = track_from(rotated);
        auto const s = smooth(t);
        auto const d = decompose(t, s);
        ASSERT_EQ(d.samples.size(), base.samples.size());
        for (std::size_t i = 0; i < d.samples.size(); ++i) {
            EXPECT_NEAR(d.samples[i].parallel, base.samples[i].parallel, 1e-8);
            EXPECT_NEAR(d.samples[i].perpendicular, base.samples[i].perpendicular, 1e-8);
        }
        FrameIndex const f = s.samples[50].frame;
        Vec2 const rt = tangent(s, f);
        Vec2 const expected = rotate(tangent(base_smooth, f), phi);
        EXPECT_NEAR(rt.x, expected.x, 1e-9);
        EXPECT_NEAR(rt.y, expected.y, 1e-9);
    }
}

TEST(MarkerDistance, Examples)
{
    auto const a = track_from({{0, 0}, {1, 1}});
    EXPECT_EQ(marker_distance(a, a, 0), 0.0);
    EXPECT_EQ(marker_distance(track_from({{0, 0}}), track_from({{800, 0}}, 2), 0), 800.0);
    EXPECT_EQ(marker_distance(track_from({{0, 0}}), track_from({{3, 4}}, 2), 0), 5.0);
    EXPECT_THROW(marker_distance(a, a, 7), FrameMissing);
}

TEST(MarkerDistance, MeanOverOverlap)
{
    auto const a = track_from({{0, 0}, {0, 0}, {0, 0}});
    auto const b = track_from({{3, 4}, {6, 8}}, 2, 1);
    EXPECT_EQ(mean_marker_distance(a, b), 7.5);
    EXPECT_THROW(mean_marker_distance(a, track_from({{1, 1}}, 3, 10)), FrameMissing);
}

TEST(Centroid, Examples)
{
    IntensityGrid point{60, 3, 3, {0, 0, 0, 0, 5, 0, 0, 0, 0}};
    EXPECT_EQ(centroid(point), (Vec2{60, 60}));

    IntensityGrid symmetric{60, 1, 3, {1, 2, 1}};
    EXPECT_EQ(centroid(symmetric).x, 60.0);

    IntensityGrid skewed{60, 1, 3, {1, 3, 0}};
    EXPECT_EQ(centroid(skewed).x, 45.0);

    IntensityGrid empty{60, 2, 2, {0, 0, 0, 0}};
    EXPECT_THROW(centroid(empty), EmptyGrid);
}

TEST(Centroid, ShiftByOnePixelMovesByPitch)
{
    std::mt19937_64 rng{9};
    std::uniform_real_distribution<double> u(0, 1);
    IntensityGrid g{60, 6, 7, std::vector<double>(42, 0.0)};
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 0; c < 6; ++c) {
            g.values[r * 7 + c] = u(rng);
        }
    }
    IntensityGrid shifted{60, 6, 7, std::vector<double>(42, 0.0)};
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 0; c < 6; ++c) {
            shifted.values[r * 7 + c + 1] = g.values[r * 7 + c];
        }
    }
    EXPECT_NEAR(centroid(shifted).x - centroid(g).x, 60.0, 1e-9);
    EXPECT_NEAR(centroid(shifted).y, centroid(g).y, 1e-9);
}
