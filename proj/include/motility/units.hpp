#pragma once

// Unit-tagged scalars, physical constants and the video frame clock.
//
// Computation is carried out in SI. The few non-SI units that appear in
// files and on the command line (mT, nm) have their own tags so that a
// millitesla value can never be added to a tesla value by accident; the
// conversions below are the only way across.

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>

namespace motility {

template <class Tag>
class Quantity
{
public:
    constexpr Quantity() = default;
    constexpr explicit Quantity(double value) : _value{value} {}

    constexpr double value() const { return _value; }

    constexpr Quantity operator-() const { return Quantity{-_value}; }
    constexpr Quantity& operator+=(Quantity other) { _value += other._value; return *this; }
    constexpr Quantity& operator-=(Quantity other) { _value -= other._value; return *this; }

    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity{a._value + b._value}; }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity{a._value - b._value}; }
    friend constexpr Quantity operator*(Quantity a, double k) { return Quantity{a._value * k}; }
    friend constexpr Quantity operator*(double k, Quantity a) { return Quantity{a._value * k}; }
    friend constexpr Quantity operator/(Quantity a, double k) { return Quantity{a._value / k}; }
    friend constexpr double operator/(Quantity a, Quantity b) { return a._value / b._value; }

    friend constexpr auto operator<=>(Quantity, Quantity) = default;

private:
    double _value = 0;
};

namespace unit_tags {
struct seconds;
struct tesla;
struct millitesla;
struct ampere_per_meter;
struct meter;
struct nanometer;
struct pascal;        // J/m³ and N/m² share a dimension
struct joule;
struct ampere_meter2; // magnetic moment
} // namespace unit_tags

using Seconds = Quantity<unit_tags::seconds>;
using Tesla = Quantity<unit_tags::tesla>;
using MilliTesla = Quantity<unit_tags::millitesla>;
using AmperePerMeter = Quantity<unit_tags::ampere_per_meter>;
using Meters = Quantity<unit_tags::meter>;
using Nanometers = Quantity<unit_tags::nanometer>;
using Pascals = Quantity<unit_tags::pascal>;
using Joules = Quantity<unit_tags::joule>;
using AmpereSquareMeters = Quantity<unit_tags::ampere_meter2>;

namespace constants {
/// Vacuum permeability, T·m/A.
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;
/// Bohr magneton, A·m².
inline constexpr double bohr_magneton = 9.2740100783e-24;
/// Boltzmann constant, J/K.
inline constexpr double boltzmann = 1.380649e-23;
/// Assay temperature, 25 °C.
inline constexpr double assay_temperature_k = 298.15;
} // namespace constants

struct PhysicalConstants
{
    double mu0 = constants::mu0;
    double bohr_magneton = constants::bohr_magneton;
    Joules kbt{constants::boltzmann * constants::assay_temperature_k};
};

constexpr Tesla to_tesla(MilliTesla b) { return Tesla{b.value() * 1.0e-3}; }
constexpr MilliTesla to_millitesla(Tesla b) { return MilliTesla{b.value() * 1.0e3}; }
constexpr Meters to_meters(Nanometers x) { return Meters{x.value() * 1.0e-9}; }
constexpr Nanometers to_nanometers(Meters x) { return Nanometers{x.value() * 1.0e9}; }

/// Plain-number form of to_tesla for values read from files.
constexpr double mT_to_T(double millitesla) { return millitesla * 1.0e-3; }
constexpr double T_to_mT(double tesla) { return tesla * 1.0e3; }

/// Video frame clock. The default period is one NTSC-rate frame, 1/30 s.
struct FrameClock
{
    double frames_per_second = 30.0;

    constexpr Seconds frame_period() const { return Seconds{1.0 / frames_per_second}; }
};

/// Elapsed time of n frames. Divides rather than multiplies by the period
/// so that whole-second frame counts come out exact.
constexpr Seconds frames_to_seconds(std::int64_t n, FrameClock const& clock = {})
{
    return Seconds{static_cast<double>(n) / clock.frames_per_second};
}

} // namespace motility
