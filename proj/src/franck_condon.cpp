#include "etsim/franck_condon.hpp"

#include <cmath>
#include <stdexcept>

namespace etsim {

double displacement_from_lambda(double lam, double hbar_omega) {
  if (hbar_omega <= 0)
    throw std::domain_error("displacement_from_lambda: hbar_omega <= 0");
  return std::sqrt(2.0 * std::abs(lam) / hbar_omega);
}

int orthonormality_safe_m_max(double d, int n_max) {
  // Row M of <M|D|N> has significant amplitude out to N ~ M + d^2 + O(d sqrt(M));
  // the margin below keeps the truncated tail under ~1e-8 for d <= 4.
  return n_max - static_cast<int>(std::ceil(d * d + 22.0));
}

double FcTable::orthonormality_defect(int m_max) const {
  if (m_max < 0 || m_max > n_max)
    throw std::invalid_argument("orthonormality_defect: bad m_max");
  const auto block = f.topRows(m_max + 1);
  Eigen::MatrixXd g = block * block.transpose();
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

FcTable build_fc_table(double d, int n_max) {
  if (n_max < 0) throw std::invalid_argument("build_fc_table: n_max < 0");
  FcTable t;
  t.displacement = d;
  t.n_max = n_max;
  const int dim = n_max + 1;
  t.f.setZero(dim, dim);
  // Two-term recursions in M and N seeded by F(0,0) = exp(-alpha^2/2),
  // alpha = d/sqrt(2).  Underflow flushes to zero harmlessly.
  const double a = d / std::sqrt(2.0);
  t.f(0, 0) = std::exp(-0.5 * a * a);
  for (int m = 0; m + 1 < dim; ++m)
    t.f(m + 1, 0) = a * t.f(m, 0) / std::sqrt(m + 1.0);
  for (int n = 0; n + 1 < dim; ++n) {
    for (int m = 0; m < dim; ++m) {
      double v = -a * t.f(m, n);
      if (m > 0) v += std::sqrt(static_cast<double>(m)) * t.f(m - 1, n);
      t.f(m, n + 1) = v / std::sqrt(n + 1.0);
    }
  }
  if (orthonormality_safe_m_max(d, n_max) < 0)
    t.warnings.push_back(
        "n_max too small to resolve orthonormality to 1e-8 for any row");
  return t;
}

double fc_amplitude(int m, int n, double d) {
  if (m < 0 || n < 0) throw std::invalid_argument("fc_amplitude: negative index");
  return build_fc_table(d, std::max(m, n)).f(m, n);
}

}  // namespace etsim
