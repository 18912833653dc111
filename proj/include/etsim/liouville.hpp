#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace etsim {

enum class BasisKind { vibronic, tight_binding };

struct BasisInfo {
  BasisKind kind = BasisKind::tight_binding;
  int n_surfaces = 3;
  int n_vib = 1;  // vibrational levels per surface; 1 for tight-binding
  int dim() const { return n_surfaces * n_vib; }
  int index(int surface, int level) const { return surface * n_vib + level; }
};

struct DensityMatrix {
  BasisInfo basis;
  Eigen::MatrixXcd rho;

  double hermiticity_defect() const;
  double trace_error() const;     // |tr(rho) - 1|
  double min_eigenvalue() const;  // smallest eigenvalue of the Hermitian part
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-9,
                double pos_tol = 1e-9) const;  // throws on violation
};

struct JumpChannel {
  Eigen::MatrixXcd op;  // jump operator A over the Hilbert basis
  double rate = 0;      // fs^-1
};

// Dense Liouvillian acting on column-major vec(rho):
//   L(rho) = -(i/hbar)[H, rho] + sum_c rate_c (A rho A+ - 1/2 {A+A, rho}).
class Generator {
 public:
  Generator(BasisInfo basis, Eigen::MatrixXcd hamiltonian,
            std::vector<JumpChannel> channels);

  const BasisInfo& basis() const { return basis_; }
  int dim() const { return basis_.dim(); }
  const Eigen::MatrixXcd& matrix() const { return l_; }
  const Eigen::MatrixXcd& hamiltonian() const { return h_; }
  const std::vector<JumpChannel>& channels() const { return channels_; }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

 private:
  BasisInfo basis_;
  Eigen::MatrixXcd h_;
  std::vector<JumpChannel> channels_;
  Eigen::MatrixXcd l_;  // dim^2 x dim^2
};

// Vibrationally cold donor: unit population on (m=1, M=0), no coherences.
DensityMatrix initial_state(const BasisInfo& basis);

// Thermal donor ladder, still confined to the donor surface (sensitivity
// studies; the cold start is the default physical choice).
DensityMatrix initial_state_thermal_donor(const BasisInfo& basis,
                                          double hbar_omega_vib,
                                          double temperature);

enum class Backend { step_exponential, rk4, spectral };

struct Trajectory {
  BasisInfo basis;
  std::vector<double> times;                // fs
  std::vector<Eigen::MatrixXcd> states;
  double population(int sample, int surface) const;
  double purity(int sample) const;  // Re tr(rho^2)
};

Trajectory propagate(const Generator& gen, const DensityMatrix& rho0,
                     double t_end, double dt, Backend backend);

void export_trajectory_csv(const std::string& path, const Trajectory& traj);

double acceptor_population(const DensityMatrix& rho);

struct RateResult {
  double k_et = 0;         // s^-1
  double p3_infinity = 0;  // dimensionless
  std::vector<std::pair<double, double>> p3_trace;  // (t fs, P3)
  std::string method;      // vibronic | tb-analytic | tb-numeric
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;
};

std::string to_json_string(const RateResult& r);

// Eigendecomposition of the Liouvillian (general complex, zgeev).
struct SpectralDecomposition {
  Eigen::VectorXcd eigenvalues;   // fs^-1
  Eigen::MatrixXcd eigenvectors;  // columns
};

SpectralDecomposition decompose(const Generator& gen);  // throws on failure

// Production rate path: P3(inf) from the null mode of L, the accumulation
// integral exactly from eigenvalue resolvents.  The ET rate follows the
// convergent reading  k = P3(inf) / Int_0^inf [P3(inf) - P3(t)] dt,  which
// coincides with the textbook definition whenever P3(inf) = 1 (see README).
RateResult extract_rate_spectral(const Generator& gen,
                                 const DensityMatrix& rho0,
                                 int trace_samples = 200);

// Time-stepping rate path: trapezoid integration of the sampled P3 plus an
// exponential tail, with a plateau detector gating convergence.
RateResult extract_rate_time_domain(const Trajectory& traj);

// Convenience wrapper: spectral by default; time-domain backends propagate
// first (adaptive horizon from a short pilot run when t_end <= 0).
RateResult extract_rate(const Generator& gen, const DensityMatrix& rho0,
                        Backend backend = Backend::spectral, double dt = 0,
                        double t_end = 0);

}  // namespace etsim
