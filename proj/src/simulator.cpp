#include "motility/simulator.hpp"

#include "motility/correlation.hpp"
#include "motility/errors.hpp"
#include "motility/magnetics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

namespace motility {

namespace {

constexpr double nm = 1.0e-9;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Vec2 gaussian_vec(FilamentState& state)
{
    double const gx = state.normal(state.rng);
    double const gy = state.normal(state.rng);
    return {gx, gy};
}

} // namespace

// ---------------------------------------------------------------------------
// AngleCoupling

AngleCoupling AngleCoupling::table(std::vector<std::pair<double, double>> nodes)
{
    if (nodes.size() < 2) {
        throw InvalidConfig("angle coupling table needs at least two nodes");
    }
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto const [theta, g] = nodes[i];
        if (!std::isfinite(theta) || !std::isfinite(g) || g < 0) {
            throw InvalidConfig("angle coupling table entries must be finite with g >= 0");
        }
        if (i > 0 && theta == nodes[i - 1].first) {
            throw InvalidConfig("angle coupling table has duplicate angle " + std::to_string(theta));
        }
    }
    if (nodes.front().first > 0.0 || nodes.back().first < 90.0) {
        throw InvalidConfig("angle coupling table must cover 0..90 degrees");
    }
    return AngleCoupling{Kind::table, std::move(nodes)};
}

double AngleCoupling::operator()(double cos_theta) const
{
    double const c2 = std::min(1.0, cos_theta * cos_theta);
    switch (_kind) {
    case Kind::sin2:
        return 1.0 - c2;
    case Kind::cos2:
        return c2;
    case Kind::uniform:
        return 1.0;
    case Kind::table:
        break;
    }
    double const theta = std::acos(std::min(1.0, std::abs(cos_theta))) * 180.0 / std::numbers::pi;
    auto const upper = std::lower_bound(
        _nodes.begin(), _nodes.end(), theta,
        [](std::pair<double, double> const& node, double t) { return node.first < t; });
    if (upper == _nodes.begin()) {
        return upper->second;
    }
    if (upper == _nodes.end()) {
        return _nodes.back().second;
    }
    auto const lower = upper - 1;
    double const s = (theta - lower->first) / (upper->first - lower->first);
    return lower->second + s * (upper->second - lower->second);
}

double AngleCoupling::at_degrees(double theta_deg) const
{
    return (*this)(std::cos(deg_to_rad(theta_deg)));
}

// ---------------------------------------------------------------------------
// SimConfig

std::vector<std::string> SimConfig::problems() const
{
    std::vector<std::string> out;
    auto require = [&out](bool ok, char const* field, char const* rule) {
        if (!ok) {
            out.push_back(std::string(field) + ": " + rule);
        }
    };
    auto positive = [](double v) { return std::isfinite(v) && v > 0; };
    auto non_negative = [](double v) { return std::isfinite(v) && v >= 0; };

    require(n_beads >= 1, "n_beads", "must be >= 1");
    require(positive(bead_spacing_nm), "bead_spacing_nm", "must be > 0");
    require(positive(bond_stiffness_n_per_m), "bond_stiffness_n_per_m", "must be > 0");
    require(positive(bend_stiffness_j), "bend_stiffness_j", "must be > 0");
    require(positive(drag_per_bead_ns_per_m), "drag_per_bead_ns_per_m", "must be > 0");
    require(non_negative(propulsion_speed_nm_per_s), "propulsion_speed_nm_per_s", "must be >= 0");
    require(non_negative(kbt_j), "kbt_j", "must be >= 0");
    require(non_negative(m0_a_per_m), "m0_a_per_m", "must be >= 0");
    require(non_negative(dipole_relative_sigma), "dipole_relative_sigma", "must be >= 0");
    require(dipole_corr_time_s > 0 && !std::isnan(dipole_corr_time_s), "dipole_corr_time_s",
            "must be > 0");
    require(positive(cross_section_area_m2), "cross_section_area_m2", "must be > 0");
    require(non_negative(b_mt), "b_mt", "must be >= 0");
    require(std::isfinite(field_angle_deg), "field_angle_deg", "must be finite");
    require(non_negative(localization_sigma_nm), "localization_sigma_nm", "must be >= 0");
    require(positive(pixel_pitch_nm), "pixel_pitch_nm", "must be > 0");
    require(positive(dt_internal_s) && dt_internal_s <= (1.0 / 30.0) / 10.0, "dt_internal_s",
            "must be > 0 and <= 1/300 s");
    require(frames >= 1, "frames", "must be >= 1");
    require(!marker_beads.empty(), "marker_beads", "must list at least one bead");
    for (int bead : marker_beads) {
        if (bead < 0 || bead >= n_beads) {
            out.push_back("marker_beads: index " + std::to_string(bead) + " outside [0, n_beads)");
        }
    }
    return out;
}

void SimConfig::validate() const
{
    auto const issues = problems();
    if (issues.empty()) {
        return;
    }
    std::ostringstream message;
    message << "invalid simulation config:";
    for (auto const& issue : issues) {
        message << "\n  " << issue;
    }
    throw InvalidConfig(message.str());
}

// ---------------------------------------------------------------------------
// State

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_a, std::uint64_t stream_b)
{
    return splitmix64(splitmix64(splitmix64(base) ^ stream_a) ^ stream_b);
}

FilamentState init(SimConfig const& config)
{
    config.validate();

    FilamentState state;
    state.positions.reserve(static_cast<std::size_t>(config.n_beads));
    for (int i = 0; i < config.n_beads; ++i) {
        state.positions.push_back({i * config.bead_spacing_nm * nm, 0.0});
    }
    state.rng.seed(derive_seed(config.seed, 0));
    return state;
}

void dipole_step(FilamentState& state, SimConfig const& config, double dt)
{
    double const rate = dt / config.dipole_corr_time_s;
    double const xi = state.normal(state.rng);
    state.eta = state.eta * (1.0 - rate) + config.dipole_relative_sigma * std::sqrt(2.0 * rate) * xi;
}

// ---------------------------------------------------------------------------
// Forces

namespace forcefield {

double bond_energy(std::span<Vec2 const> x, double stiffness, double rest_length)
{
    double energy = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double const stretch = norm(x[i + 1] - x[i]) - rest_length;
        energy += 0.5 * stiffness * stretch * stretch;
    }
    return energy;
}

void add_bond_forces(std::span<Vec2 const> x, double stiffness, double rest_length,
                     std::span<Vec2> forces)
{
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        Vec2 const d = x[i + 1] - x[i];
        double const length = norm(d);
        Vec2 const f = d * (stiffness * (length - rest_length) / length);
        forces[i] += f;
        forces[i + 1] -= f;
    }
}

// U = κ Σ (1 − cos φ_i), φ_i the turning angle at interior bead i.
double bend_energy(std::span<Vec2 const> x, double stiffness)
{
    double energy = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        Vec2 const u = x[i] - x[i - 1];
        Vec2 const v = x[i + 1] - x[i];
        energy += stiffness * (1.0 - dot(u, v) / (norm(u) * norm(v)));
    }
    return energy;
}

void add_bend_forces(std::span<Vec2 const> x, double stiffness, std::span<Vec2> forces)
{
    if (x.size() < 3) {
        return;
    }
    Vec2 v = x[1] - x[0];
    double lv = norm(v);
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        Vec2 const u = v;
        double const lu = lv;
        v = x[i + 1] - x[i];
        lv = norm(v);
        double const c = dot(u, v) / (lu * lv);
        Vec2 const dc_du = v / (lu * lv) - u * (c / (lu * lu));
        Vec2 const dc_dv = u / (lu * lv) - v * (c / (lv * lv));
        forces[i - 1] -= stiffness * dc_du;
        forces[i] += stiffness * (dc_du - dc_dv);
        forces[i + 1] += stiffness * dc_dv;
    }
}

std::vector<Vec2> bead_tangents(std::span<Vec2 const> x)
{
    std::vector<Vec2> t(x.size());
    if (x.size() < 2) {
        return t;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::size_t const lo = i == 0 ? 0 : i - 1;
        std::size_t const hi = i + 1 == x.size() ? i : i + 1;
        Vec2 const chord = x[hi] - x[lo];
        double const length = norm(chord);
        t[i] = length > 0 ? chord / length : Vec2{};
    }
    return t;
}

void add_propulsion_forces(std::span<Vec2 const> x, double magnitude, std::span<Vec2> forces)
{
    if (magnitude == 0) {
        return;
    }
    auto const t = bead_tangents(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        forces[i] += magnitude * t[i];
    }
}

std::vector<double> bond_magnetic_tension(std::span<Vec2 const> x, double eta,
                                          SimConfig const& config)
{
    std::vector<double> tension(x.size() > 1 ? x.size() - 1 : 0, 0.0);
    double const amplitude = std::max(0.0, 1.0 + eta) - 1.0;
    double const stress =
        tensile_stress(DipoleDensity{AmperePerMeter{config.m0_a_per_m}},
                       to_tesla(MilliTesla{config.b_mt}))
            .value();
    double const base = amplitude * stress * config.cross_section_area_m2;
    if (base == 0) {
        return tension;
    }

    double const field_angle = deg_to_rad(config.field_angle_deg);
    Vec2 const field{std::cos(field_angle), std::sin(field_angle)};
    for (std::size_t b = 0; b + 1 < x.size(); ++b) {
        Vec2 const d = x[b + 1] - x[b];
        double const length = norm(d);
        if (length == 0) {
            continue;
        }
        tension[b] = base * config.angle_coupling(dot(d, field) / length);
    }
    return tension;
}

void add_magnetic_forces(std::span<Vec2 const> x, double eta, SimConfig const& config,
                         std::span<Vec2> forces)
{
    auto const tension = bond_magnetic_tension(x, eta, config);
    for (std::size_t b = 0; b < tension.size(); ++b) {
        if (tension[b] == 0) {
            continue;
        }
        Vec2 const d = x[b + 1] - x[b];
        Vec2 const f = d * (tension[b] / norm(d));
        forces[b] += f;
        forces[b + 1] += f;
    }
}

} // namespace forcefield

std::vector<Vec2> forces(FilamentState const& state, SimConfig const& config)
{
    std::span<Vec2 const> const x = state.positions;
    std::vector<Vec2> f(x.size());
    double const drag = config.drag_per_bead_ns_per_m;

    forcefield::add_bond_forces(x, config.bond_stiffness_n_per_m, config.bead_spacing_nm * nm, f);
    forcefield::add_bend_forces(x, config.bend_stiffness_j, f);
    forcefield::add_propulsion_forces(x, drag * config.propulsion_speed_nm_per_s * nm, f);
    forcefield::add_magnetic_forces(x, state.eta, config, f);
    return f;
}

void advance(FilamentState& state, SimConfig const& config, std::span<Vec2 const> applied,
             double dt)
{
    double const drag = config.drag_per_bead_ns_per_m;
    double const noise = std::sqrt(2.0 * config.kbt_j * dt / drag);
    double const limit = config.bead_spacing_nm * nm;

    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        Vec2 delta = applied[i] * (dt / drag);
        if (noise > 0) {
            delta += noise * gaussian_vec(state);
        }
        if (!(norm(delta) <= limit)) {
            std::ostringstream message;
            message << "bead " << i << " moved " << norm(delta) / nm << " nm in one step of " << dt
                    << " s (limit " << config.bead_spacing_nm << " nm); reduce dt_internal_s";
            throw NumericalBlowup(message.str());
        }
        state.positions[i] += delta;
    }
    dipole_step(state, config, dt);
    state.time += dt;
}

void step(FilamentState& state, SimConfig const& config)
{
    auto const f = forces(state, config);
    advance(state, config, f, config.dt_internal_s);
}

int substeps_per_frame(SimConfig const& config, FrameClock const& clock)
{
    auto const n = std::llround(clock.frame_period().value() / config.dt_internal_s);
    return static_cast<int>(std::max<long long>(1, n));
}

std::vector<MarkerTrack> run_assay(SimConfig const& config, FrameClock const& clock)
{
    FilamentState state = init(config);

    int const substeps = substeps_per_frame(config, clock);
    SimConfig stepping = config;
    stepping.dt_internal_s = clock.frame_period().value() / substeps;

    // Measurement noise has its own stream so switching it off leaves the
    // physical trajectory untouched.
    std::mt19937_64 camera{derive_seed(config.seed, 1)};
    std::normal_distribution<double> camera_noise;

    std::size_t const marker_count = config.marker_beads.size();
    std::vector<std::vector<TrackSample>> samples(marker_count);
    for (auto& s : samples) {
        s.reserve(static_cast<std::size_t>(config.frames));
    }

    for (int frame = 0; frame < config.frames; ++frame) {
        if (frame > 0) {
            for (int k = 0; k < substeps; ++k) {
                step(state, stepping);
            }
        }
        for (std::size_t m = 0; m < marker_count; ++m) {
            Vec2 p = state.positions[static_cast<std::size_t>(config.marker_beads[m])] / nm;
            if (config.localization_sigma_nm > 0) {
                double const nx = camera_noise(camera);
                double const ny = camera_noise(camera);
                p += config.localization_sigma_nm * Vec2{nx, ny};
            }
            if (config.quantize_to_pixels) {
                double const pitch = config.pixel_pitch_nm;
                p = {std::round(p.x / pitch) * pitch, std::round(p.y / pitch) * pitch};
            }
            samples[m].push_back({frame, p});
        }
    }

    std::vector<MarkerTrack> tracks;
    tracks.reserve(marker_count);
    for (std::size_t m = 0; m < marker_count; ++m) {
        tracks.emplace_back(static_cast<MarkerId>(m + 1), std::move(samples[m]));
    }
    return tracks;
}

// ---------------------------------------------------------------------------
// Analysis of simulated runs and sweeps

std::vector<DisplacementSeries> displacements(std::span<MarkerTrack const> tracks,
                                              int smoothing_window)
{
    std::vector<DisplacementSeries> out;
    out.reserve(tracks.size());
    for (MarkerTrack const& track : tracks) {
        out.push_back(decompose(track, smooth(track, smoothing_window)));
    }
    return out;
}

std::vector<double> replica_window_intensities(std::span<MarkerTrack const> tracks,
                                               AnalysisParams const& analysis,
                                               MarkerId first, MarkerId second)
{
    auto find = [&](MarkerId id) -> MarkerTrack const& {
        for (MarkerTrack const& t : tracks) {
            if (t.id() == id) {
                return t;
            }
        }
        throw InvalidTrack("marker p" + std::to_string(id) + " not present in run");
    };
    MarkerTrack const& a = find(first);
    MarkerTrack const& b = find(second);
    auto const da = decompose(a, smooth(a, analysis.smoothing_window));
    auto const db = decompose(b, smooth(b, analysis.smoothing_window));
    return cross_correlation(da, db, 0, analysis.correlation_window).window_intensities;
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t b_index, std::size_t theta_index,
                        int replica)
{
    std::uint64_t const cell = (static_cast<std::uint64_t>(b_index) << 32) | theta_index;
    return derive_seed(base, cell + 1, static_cast<std::uint64_t>(replica) + 1);
}

SweepResult sweep(SimConfig const& base, SweepOptions const& options)
{
    if (options.b_list_mt.empty() || options.theta_list_deg.empty()) {
        throw InvalidConfig("sweep needs non-empty B and theta lists");
    }
    if (options.replicas < 1) {
        throw InvalidConfig("sweep needs replicas >= 1");
    }
    base.validate();

    std::size_t const n_b = options.b_list_mt.size();
    std::size_t const n_theta = options.theta_list_deg.size();
    auto const replicas = static_cast<std::size_t>(options.replicas);
    std::size_t const task_count = n_b * n_theta * replicas;

    struct TaskResult
    {
        std::vector<double> intensities;
        std::string error;
    };
    std::vector<TaskResult> results(task_count);

    auto run_task = [&](std::size_t task) {
        std::size_t const replica = task % replicas;
        std::size_t const cell = task / replicas;
        std::size_t const i_theta = cell % n_theta;
        std::size_t const i_b = cell / n_theta;

        SimConfig config = base;
        config.b_mt = options.b_list_mt[i_b];
        config.field_angle_deg = options.theta_list_deg[i_theta];
        config.seed = cell_seed(base.seed, i_b, i_theta, static_cast<int>(replica));
        try {
            auto const tracks = run_assay(config);
            results[task].intensities = replica_window_intensities(
                tracks, options.analysis, options.analysis.pair_first,
                options.analysis.pair_second);
        } catch (std::exception const& e) {
            results[task].error = e.what();
        }
    };

    std::size_t const workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.threads)), 1, task_count);
    if (workers == 1) {
        for (std::size_t task = 0; task < task_count; ++task) {
            run_task(task);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t task = next++; task < task_count; task = next++) {
                    run_task(task);
                }
            });
        }
    }

    SweepResult out;
    for (std::size_t i_b = 0; i_b < n_b; ++i_b) {
        for (std::size_t i_theta = 0; i_theta < n_theta; ++i_theta) {
            double const b = options.b_list_mt[i_b];
            double const theta = options.theta_list_deg[i_theta];
            std::size_t const first = (i_b * n_theta + i_theta) * replicas;

            std::string error;
            std::vector<double> values;
            for (std::size_t r = 0; r < replicas; ++r) {
                TaskResult const& task = results[first + r];
                if (!task.error.empty()) {
                    error = "replica " + std::to_string(r) + ": " + task.error;
                    break;
                }
                values.insert(values.end(), task.intensities.begin(), task.intensities.end());
            }
            if (!error.empty()) {
                out.failures.push_back({b, theta, error});
                continue;
            }

            double const n = static_cast<double>(values.size());
            double sum = 0;
            for (double v : values) {
                sum += v;
            }
            double const mean = sum / n;
            double ss = 0;
            for (double v : values) {
                ss += (v - mean) * (v - mean);
            }
            double const se = values.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
            out.records.push_back({b, theta, mean, se, static_cast<int>(values.size())});
        }
    }
    return out;
}

} // namespace motility
