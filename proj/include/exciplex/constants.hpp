#pragma once

#include <numbers>

namespace exciplex::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 (exact SI values where defined)
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double hbar = planck / two_pi;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg

// unit helpers, SI internally
inline constexpr double angstrom = 1e-10;
inline constexpr double angstrom2 = 1e-20;
inline constexpr double micrometre = 1e-6;
inline constexpr double millimetre = 1e-3;
inline constexpr double bar = 1e5;
inline constexpr double millibar = 1e2;
inline constexpr double per_cm3 = 1e6;  // cm^-3 -> m^-3
inline constexpr double picosecond = 1e-12;
inline constexpr double femtosecond = 1e-15;

/// Angular frequency from a frequency given in Hz.
constexpr double angular(double hertz) { return two_pi * hertz; }

}  // namespace exciplex::constants
