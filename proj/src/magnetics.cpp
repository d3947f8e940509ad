#include "motility/magnetics.hpp"

#include "motility/errors.hpp"

#include <cmath>
#include <numbers>

namespace motility {

DipoleDensity DipoleDensity::from(double a_per_m)
{
    if (!(a_per_m >= 0.0) || !std::isfinite(a_per_m)) {
        throw Error("dipole density must be finite and non-negative");
    }
    return DipoleDensity{AmperePerMeter{a_per_m}};
}

MonomerGeometry::MonomerGeometry(Meters diameter)
    : _diameter{diameter}
{
    double const d = diameter.value();
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw Error("monomer diameter must be positive");
    }
    _volume = std::numbers::pi / 6.0 * d * d * d;
}

Pascals energy_density(DipoleDensity m, Tesla b)
{
    double const field = b.value();
    return Pascals{-m.value() * field + field * field / (2.0 * constants::mu0)};
}

Pascals tensile_stress(DipoleDensity m, Tesla b)
{
    double const field = b.value();
    return Pascals{m.value() * field - field * field / (2.0 * constants::mu0)};
}

Tesla optimal_flux(DipoleDensity m)
{
    return Tesla{constants::mu0 * m.value()};
}

DipoleDensity dipole_density_from_peak(Tesla b_star)
{
    return DipoleDensity{AmperePerMeter{b_star.value() / constants::mu0}};
}

MonomerMoment monomer_moment(DipoleDensity m, MonomerGeometry const& geometry)
{
    double const moment = m.value() * geometry.volume();
    return {AmpereSquareMeters{moment}, moment / constants::bohr_magneton};
}

Joules dipole_interaction_energy(DipoleDensity m, MonomerGeometry const& geometry)
{
    return Joules{constants::mu0 * m.value() * m.value() * geometry.volume()};
}

} // namespace motility
