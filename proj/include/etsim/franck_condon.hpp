#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace etsim {

// Overlap amplitudes <M|D|N> between vibrational eigenstates of two
// equal-frequency harmonic surfaces displaced by d (oscillator natural
// units).  Sign convention: F(0,0) = exp(-d^2/4) > 0, displacement toward
// positive coordinate.
struct FcTable {
  double displacement = 0;
  int n_max = 0;
  Eigen::MatrixXd f;  // (n_max+1) x (n_max+1)
  std::vector<std::string> warnings;

  double operator()(int m, int n) const { return f(m, n); }

  // max |row_m . row_m' - delta| over m, m' <= m_max (unitarity of the
  // displacement operator, degraded only by truncation).
  double orthonormality_defect(int m_max) const;
};

// d = sqrt(2 |lambda| / hbar_omega); lambda and hbar_omega in eV.
double displacement_from_lambda(double lam, double hbar_omega);

// Largest row index for which the truncated table still resolves
// orthonormality to ~1e-8 (empirical margin; may be negative when n_max is
// too small for any row).
int orthonormality_safe_m_max(double d, int n_max);

double fc_amplitude(int m, int n, double d);

FcTable build_fc_table(double d, int n_max);

}  // namespace etsim
