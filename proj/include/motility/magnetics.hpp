#pragma once

// Closed-form energetics of a dipole density M in an applied flux B.
//
//   energy density   E(M, B) = -M B + B² / 2μ₀
//   tensile stress   σ(M, B) =  M B - B² / 2μ₀ = -E(M, B)
//
// σ is a downward parabola in B with roots at 0 and 2μ₀M and its maximum
// μ₀M²/2 at B = μ₀M. Inverting that peak location is how a measured
// optimal flux is turned into a dipole density.

#include "motility/units.hpp"

namespace motility {

struct DipoleDensity
{
    AmperePerMeter magnetization{0.0};

    static DipoleDensity from(double a_per_m);
    double value() const { return magnetization.value(); }
};

/// Coherence volume of one monomer, modelled as a sphere of the monomer
/// diameter.
class MonomerGeometry
{
public:
    explicit MonomerGeometry(Meters diameter);

    static MonomerGeometry actin() { return MonomerGeometry{Meters{4.0e-9}}; }

    Meters diameter() const { return _diameter; }
    /// (π/6)·d³, m³.
    double volume() const { return _volume; }

private:
    Meters _diameter;
    double _volume;
};

struct MonomerMoment
{
    AmpereSquareMeters moment;
    double bohr_magnetons;
};

Pascals energy_density(DipoleDensity m, Tesla b);
Pascals tensile_stress(DipoleDensity m, Tesla b);
Tesla optimal_flux(DipoleDensity m);
DipoleDensity dipole_density_from_peak(Tesla b_star);
MonomerMoment monomer_moment(DipoleDensity m, MonomerGeometry const& geometry);

/// Dipole-dipole interaction energy per monomer, taken as μ₀M²V.
///
/// This expression is inferred: it is the simplest dimensionally consistent
/// form that reproduces the reported ~1.1e-22 J from M = 5.2e4 A/m and a
/// 4 nm monomer. No pairwise separation enters it.
Joules dipole_interaction_energy(DipoleDensity m, MonomerGeometry const& geometry);

} // namespace motility
