#include "motility/errors.hpp"
#include "motility/magnetics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace motility;

namespace {

constexpr double mu0 = 4.0e-7 * std::numbers::pi;
constexpr double m_ref = 5.2e4;

DipoleDensity density(double m) { return DipoleDensity{AmperePerMeter{m}}; }

} // namespace

TEST(EnergyDensity, Examples)
{
    EXPECT_EQ(energy_density(density(m_ref), Tesla{0}).value(), 0.0);
    EXPECT_NEAR(energy_density(density(m_ref), Tesla{2 * mu0 * m_ref}).value(), 0.0, 1e-9);

    double const expected = -mu0 * m_ref * m_ref / 2; // by hand: −1.699e3 J/m³
    double const e = energy_density(density(m_ref), Tesla{mu0 * m_ref}).value();
    EXPECT_NEAR(e, expected, 1e-9 * std::abs(expected));
    EXPECT_NEAR(e, -1.699e3, 0.001e3);
}

TEST(EnergyDensity, NegativeOnlyBetweenRoots)
{
    double const m = 1.0e4;
    double const root = 2 * mu0 * m;
    for (int i = 1; i < 1000; ++i) {
        EXPECT_LT(energy_density(density(m), Tesla{root * i / 1000.0}).value(), 0.0);
    }
    EXPECT_GT(energy_density(density(m), Tesla{root * 1.01}).value(), 0.0);
}

TEST(TensileStress, Examples)
{
    EXPECT_EQ(tensile_stress(density(m_ref), Tesla{0}).value(), 0.0);
    double const peak = tensile_stress(density(m_ref), Tesla{mu0 * m_ref}).value();
    EXPECT_NEAR(peak, mu0 * m_ref * m_ref / 2, 1e-9 * peak);
    EXPECT_NEAR(peak, 1.699e3, 0.001e3);
    EXPECT_NEAR(tensile_stress(density(m_ref), Tesla{2 * mu0 * m_ref}).value(), 0.0, 1e-9);
    // 130.6 mT rounds the root; the slope there is -M, so 0.1 mT of rounding is ~5 Pa
    EXPECT_NEAR(tensile_stress(density(m_ref), to_tesla(MilliTesla{130.6})).value(), 0.0, m_ref * 1e-4);
    EXPECT_LT(tensile_stress(density(m_ref), Tesla{3 * mu0 * m_ref}).value(), 0.0);
}

TEST(TensileStress, IsNegatedEnergyDensityOnGrid)
{
    for (double m : {0.0, 1.0, 1.0e3, 5.2e4, 1.0e6}) {
        for (double b = 0; b <= 2.0; b += 0.01) {
            EXPECT_EQ(energy_density(density(m), Tesla{b}).value() +
                          tensile_stress(density(m), Tesla{b}).value(),
                      0.0);
        }
    }
}

TEST(EnergyDensity, DerivativeMatchesFiniteDifference)
{
    for (double m : {1.0e3, 5.2e4, 1.0e6}) {
        for (double b : {0.01, 0.0653, 0.5, 1.7}) {
            double const h = 1e-6 * b;
            double const fd = (energy_density(density(m), Tesla{b + h}).value() -
                               energy_density(density(m), Tesla{b - h}).value()) /
                              (2 * h);
            double const exact = -m + b / mu0;
            EXPECT_NEAR(fd, exact, 1e-6 * std::max(std::abs(exact), m)) << m << " " << b;
        }
    }
}

TEST(OptimalFlux, Examples)
{
    EXPECT_EQ(optimal_flux(density(0)).value(), 0.0);
    EXPECT_NEAR(to_millitesla(optimal_flux(density(m_ref))).value(), 65.3, 0.05);
    EXPECT_NEAR(optimal_flux(density(1.0 / mu0)).value(), 1.0, 1e-15);
}

TEST(OptimalFlux, NumericalArgmaxWithinOneGridStep)
{
    std::mt19937_64 rng{3};
    std::uniform_real_distribution<double> log_m(3.0, 6.0);
    for (int trial = 0; trial < 100; ++trial) {
        double const m = std::pow(10.0, log_m(rng));
        double const b_max = 2.5 * mu0 * m;
        double const step = b_max / 9999;
        double best_b = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 10000; ++i) {
            double const b = i * step;
            double const s = tensile_stress(density(m), Tesla{b}).value();
            if (s > best) {
                best = s;
                best_b = b;
            }
        }
        EXPECT_LE(std::abs(best_b - optimal_flux(density(m)).value()), step);
        EXPECT_GE(tensile_stress(density(m), optimal_flux(density(m))).value(), best);
    }
}

TEST(DipoleDensityFromPeak, Examples)
{
    EXPECT_EQ(dipole_density_from_peak(Tesla{0}).value(), 0.0);
    EXPECT_NEAR(dipole_density_from_peak(to_tesla(MilliTesla{65})).value(), 5.17e4, 0.005e4);
}

TEST(DipoleDensityFromPeak, InvertsOptimalFluxToOneUlp)
{
    std::mt19937_64 rng{11};
    std::uniform_real_distribution<double> dist(0.0, 1.0e7);
    for (int i = 0; i < 100000; ++i) {
        double const m = dist(rng);
        EXPECT_LE(oracle::ulp_distance(dipole_density_from_peak(optimal_flux(density(m))).value(), m),
                  1u);
    }
}

TEST(MonomerGeometry, SphereVolume)
{
    MonomerGeometry const g = MonomerGeometry::actin();
    EXPECT_EQ(g.diameter().value(), 4.0e-9);
    EXPECT_NEAR(g.volume(), std::numbers::pi / 6 * 64e-27, 1e-40);
    EXPECT_THROW(MonomerGeometry{Meters{0}}, Error);
    EXPECT_THROW(DipoleDensity::from(-1.0), Error);
}

TEST(MonomerMoment, Examples)
{
    auto const geometry = MonomerGeometry::actin();
    EXPECT_EQ(monomer_moment(density(0), geometry).moment.value(), 0.0);

    auto const m = monomer_moment(density(m_ref), geometry);
    EXPECT_NEAR(m.moment.value(), 1.74e-21, 0.005e-21);
    // 1.7426e-21 / 9.274e-24 by hand
    EXPECT_NEAR(m.bohr_magnetons, 187.9, 0.1);
    EXPECT_GE(m.bohr_magnetons, 180.0);
    EXPECT_LE(m.bohr_magnetons, 195.0);
}

TEST(DipoleInteractionEnergy, Examples)
{
    auto const geometry = MonomerGeometry::actin();
    EXPECT_EQ(dipole_interaction_energy(density(0), geometry).value(), 0.0);
    EXPECT_NEAR(dipole_interaction_energy(density(m_ref), geometry).value(), 1.14e-22, 0.005e-22);

    double const one = dipole_interaction_energy(density(3.0e4), geometry).value();
    double const two = dipole_interaction_energy(density(6.0e4), geometry).value();
    EXPECT_NEAR(two / one, 4.0, 1e-12);
}
