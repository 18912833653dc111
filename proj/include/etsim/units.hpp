#pragma once

// Internal unit system: energies in eV, lengths in Angstrom, times in fs,
// temperatures in K.  Rates are kept in fs^-1 inside the propagators and
// converted to s^-1 only at reporting boundaries, so Hamiltonian entries and
// relaxation rates stay O(1) in the dynamics.

namespace etsim::units {

inline constexpr double hbar_ev_fs = 0.6582119569;      // eV fs
inline constexpr double kb_ev_per_k = 8.617333262e-5;   // eV / K
inline constexpr double coulomb_ev_angstrom = 14.3996;  // e^2/(4 pi eps0), eV A
inline constexpr double ev_per_wavenumber = 1.23984193e-4;  // eV per cm^-1
inline constexpr double fs_per_s = 1e15;

// w in cm^-1, result in eV.
constexpr double wavenumber_to_energy(double w) { return w * ev_per_wavenumber; }
constexpr double energy_to_wavenumber(double e) { return e / ev_per_wavenumber; }

// r in fs^-1, result in s^-1.
constexpr double rate_internal_to_si(double r) { return r * fs_per_s; }
constexpr double rate_si_to_internal(double r) { return r / fs_per_s; }

// Angular frequency (fs^-1) of a quantum of energy e (eV).
constexpr double energy_to_angular_frequency(double e) { return e / hbar_ev_fs; }

}  // namespace etsim::units
