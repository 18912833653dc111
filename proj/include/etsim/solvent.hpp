#pragma once

#include <functional>
#include <string>
#include <vector>

namespace etsim {

// Marcus channels of the triad: charge shift from the donor (1) onto the
// bridge (2) or the acceptor (3).
enum class Channel { bridge_donor, acceptor_donor };

struct TriadGeometry {
  double r1 = 5.5;    // donor radius, A
  double r2 = 5.5;    // bridge radius, A
  double r3 = 3.2;    // acceptor radius, A
  double r12 = 12.5;  // donor-bridge distance, A
  double r13 = 14.4;  // donor-acceptor distance, A
  double v12 = 0.065;   // electronic coupling donor-bridge, eV
  double v23 = 0.0022;  // electronic coupling bridge-acceptor, eV
  double v13 = 0.0;     // structurally zero: donor and acceptor do not overlap
  double lambda_internal = 0.3;      // internal reorganization energy, eV
  double hbar_omega_vib = 0.185976;  // vibrational quantum (1500 cm^-1), eV

  void validate() const;  // throws std::invalid_argument
};

// One row of the solvent dataset.  Rates in s^-1, energies in eV.
struct SolventRecord {
  std::string name;
  double eps_s = 0;
  double eps_inf = 0;
  double dg21 = 0;
  double dg31 = 0;
  double lam21_s = 0;
  double lam31_s = 0;
  double gamma_tb = 0;
  double k_el_ref = 0;
  double k_vib_ref = 0;

  void validate() const;
};

// Solvent-independent offsets c_mn and the geometry Coulomb coefficients that
// multiply 1/eps_s in the free-energy expression.
struct ChannelConstants {
  double c21 = 0;
  double c31 = 0;
  double coulomb_coeff21 = 0;
  double coulomb_coeff31 = 0;
};

// e^2/(4 pi eps0) [1/(2 r_m) + 1/(2 r_n) - 1/r_mn] for the channel, eV.
double coulomb_coeff(const TriadGeometry& geom, Channel ch);

// lambda^s_mn = coeff * (1/eps_inf - 1/eps_s), eV.  Throws std::domain_error
// if eps_inf > eps_s or eps_inf < 1.
double solvent_reorganization(const TriadGeometry& geom, double eps_s,
                              double eps_inf, Channel ch);

// Folds the unknown redox/excitation energies into one offset per channel,
// fixed so the reference row is reproduced exactly.
ChannelConstants calibrate_channel_constants(const SolventRecord& reference,
                                             const TriadGeometry& geom);

// dG_mn(eps_s) = c_mn + coeff_mn / eps_s, eV.
double free_energy_difference(const ChannelConstants& consts, double eps_s,
                              Channel ch);

// Tight-binding damping scaled with the dielectric constant like the
// reorganization energy: Gamma(target) = Gamma(ref) * lam21_s / lam21_s(ref).
double scaled_gamma(const SolventRecord& reference, double target_lam21_s);

// lambda = hbar Int_0^inf J(w)/w dw by adaptive quadrature.  J takes an
// angular frequency in fs^-1 and returns a spectral density in fs^-1; the
// result is in eV.  Throws std::runtime_error if the tail does not converge.
double lambda_from_spectral_density(const std::function<double(double)>& j);

// The built-in nine-solvent dataset (authoritative; recomputed energetics are
// cross-checks, never replacements).
const std::vector<SolventRecord>& table1();

// Index into table1() by name (case-sensitive); throws if absent.
const SolventRecord& table1_row(const std::string& name);

inline constexpr const char* solvent_csv_header =
    "name,eps_s,eps_inf,dG21_eV,dG31_eV,lam21s_eV,lam31s_eV,gamma_per_s,"
    "k_el_per_s,k_vib_per_s";

std::vector<SolventRecord> load_solvents_csv(const std::string& path);
void save_solvents_csv(const std::string& path,
                       const std::vector<SolventRecord>& rows);

}  // namespace etsim
