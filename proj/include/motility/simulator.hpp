#pragma once

// Overdamped bead-chain model of a gliding actin filament.
//
// Each bead obeys the Euler-Maruyama update
//
//   x ← x + (F/γ)·dt + √(2·kBT·dt/γ)·ξ
//
// where F collects harmonic bonds, discrete bending, motor propulsion
// along the local tangent, and the magnetic axial drive. The dipole
// density fluctuates coherently as M(t) = M0·(1 + η(t)), η a single
// Ornstein-Uhlenbeck amplitude shared by the whole filament, and the
// magnetic tension of a bond is taken as max(0, 1 + η)·σ(M0, B)·A·g(θ_b)
// with σ the tensile stress, A the filament cross section and θ_b the
// angle between bond and field. The mean part (η = 0) is carried by the
// motors; the deviation
//
//   f_b = (max(0, 1 + η) − 1)·σ(M0, B)·A·g(θ_b)
//
// acts on both bond endpoints along the bond, in the sliding direction.
// Every bead therefore feels the same fluctuation, and its variance peaks
// where σ does, at B = μ₀M0.

#include "motility/correlation.hpp"
#include "motility/estimation.hpp"
#include "motility/tracking.hpp"
#include "motility/vec2.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace motility {

/// Angular weight g(θ) of the magnetic drive. θ is folded into [0°, 90°]
/// because the field axis carries no sign.
class AngleCoupling
{
public:
    enum class Kind { sin2, cos2, uniform, table };

    static AngleCoupling sin2() { return AngleCoupling{Kind::sin2, {}}; }
    static AngleCoupling cos2() { return AngleCoupling{Kind::cos2, {}}; }
    static AngleCoupling uniform() { return AngleCoupling{Kind::uniform, {}}; }
    /// Piecewise-linear table of (θ in degrees, g) nodes covering [0, 90].
    static AngleCoupling table(std::vector<std::pair<double, double>> nodes);

    Kind kind() const { return _kind; }
    std::span<std::pair<double, double> const> nodes() const { return _nodes; }

    /// g for an axis at angle θ to the field, given cos θ.
    double operator()(double cos_theta) const;
    double at_degrees(double theta_deg) const;

    friend bool operator==(AngleCoupling const&, AngleCoupling const&) = default;

private:
    AngleCoupling(Kind kind, std::vector<std::pair<double, double>> nodes)
        : _kind{kind}, _nodes{std::move(nodes)}
    {
    }

    Kind _kind;
    std::vector<std::pair<double, double>> _nodes;
};

struct SimConfig
{
    int n_beads = 26;
    double bead_spacing_nm = 200.0;
    double bond_stiffness_n_per_m = 1.0e-4;
    double bend_stiffness_j = 3.4e-19; // persistence length ≈ 17 µm
    double drag_per_bead_ns_per_m = 1.0e-8;
    double propulsion_speed_nm_per_s = 1000.0;
    double kbt_j = 4.116e-21;

    double m0_a_per_m = 5.2e4;
    double dipole_relative_sigma = 0.3;
    double dipole_corr_time_s = 0.2;
    double cross_section_area_m2 = 1.2566370614359173e-17; // π·(4 nm)²/4

    double b_mt = 0.0;
    double field_angle_deg = 90.0;
    AngleCoupling angle_coupling = AngleCoupling::sin2();

    std::vector<int> marker_beads{8, 12, 17}; // 800 nm and 1800 nm from p1
    double localization_sigma_nm = 20.0;
    double pixel_pitch_nm = 60.0;
    bool quantize_to_pixels = false;

    double dt_internal_s = 1.0 / 30000.0;
    int frames = 300;
    std::uint64_t seed = 1;

    /// Returns one message per violated constraint; empty when valid.
    std::vector<std::string> problems() const;
    /// Throws InvalidConfig listing every problem.
    void validate() const;
};

struct FilamentState
{
    std::vector<Vec2> positions; // m
    double eta = 0;              // common-mode dipole amplitude
    double time = 0;             // s
    std::mt19937_64 rng;
    std::normal_distribution<double> normal;

    friend bool operator==(FilamentState const&, FilamentState const&) = default;
};

/// Mixes a base seed with stream coordinates into an independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_a, std::uint64_t stream_b = 0);

FilamentState init(SimConfig const& config);

/// One Euler-Maruyama update of the dipole amplitude:
/// η ← η·(1 − dt/τ) + σ·√(2dt/τ)·ξ.
void dipole_step(FilamentState& state, SimConfig const& config, double dt);

/// Individual force terms, SI units. Energies are provided for the
/// conservative ones.
namespace forcefield {
double bond_energy(std::span<Vec2 const> x, double stiffness, double rest_length);
void add_bond_forces(std::span<Vec2 const> x, double stiffness, double rest_length,
                     std::span<Vec2> forces);

double bend_energy(std::span<Vec2 const> x, double stiffness);
void add_bend_forces(std::span<Vec2 const> x, double stiffness, std::span<Vec2> forces);

/// Unit tangent at each bead: one-sided at the ends, central inside.
std::vector<Vec2> bead_tangents(std::span<Vec2 const> x);
void add_propulsion_forces(std::span<Vec2 const> x, double magnitude, std::span<Vec2> forces);

/// Fluctuating magnetic drive f_b on each bond; returns per-bond values.
std::vector<double> bond_magnetic_tension(std::span<Vec2 const> x, double eta,
                                          SimConfig const& config);
void add_magnetic_forces(std::span<Vec2 const> x, double eta, SimConfig const& config,
                         std::span<Vec2> forces);
} // namespace forcefield

std::vector<Vec2> forces(FilamentState const& state, SimConfig const& config);

/// Moves every bead under the given forces for one internal step, then
/// advances η. Throws NumericalBlowup if any bead moves farther than one
/// bead spacing.
void advance(FilamentState& state, SimConfig const& config, std::span<Vec2 const> applied,
             double dt);

void step(FilamentState& state, SimConfig const& config);

/// Internal steps per video frame; dt is adjusted so they tile the frame.
int substeps_per_frame(SimConfig const& config, FrameClock const& clock = {});

/// Marker tracks (nm) sampled once per frame with localization noise.
/// Marker ids are 1, 2, ... in marker_beads order.
std::vector<MarkerTrack> run_assay(SimConfig const& config, FrameClock const& clock = {});

struct AnalysisParams
{
    int smoothing_window = default_smoothing_window;
    int correlation_window = default_correlation_window;
    int max_lag = default_max_lag;
    MarkerId pair_first = 1;
    MarkerId pair_second = 2;
};

/// Smoothed-reference displacement series for every track, in order.
std::vector<DisplacementSeries> displacements(std::span<MarkerTrack const> tracks,
                                              int smoothing_window);

/// Per-window zero-lag intensities of one simulated run for the given pair.
std::vector<double> replica_window_intensities(std::span<MarkerTrack const> tracks,
                                               AnalysisParams const& analysis,
                                               MarkerId first, MarkerId second);

struct SweepOptions
{
    std::vector<double> b_list_mt{0.0, 20.0, 40.0, 65.0, 90.0, 120.0};
    std::vector<double> theta_list_deg{90.0};
    int replicas = 20;
    int threads = 1;
    AnalysisParams analysis;
};

struct CellFailure
{
    double b_mt = 0;
    double theta_deg = 0;
    std::string message;
};

struct SweepResult
{
    std::vector<SweepRecord> records; // B-major, θ-minor order
    std::vector<CellFailure> failures;
};

/// Seed of replica r in cell (i_b, i_theta).
std::uint64_t cell_seed(std::uint64_t base, std::size_t b_index, std::size_t theta_index,
                        int replica);

SweepResult sweep(SimConfig const& base, SweepOptions const& options);

} // namespace motility
