#include "etsim/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <nlohmann/json.hpp>

#include "etsim/units.hpp"

namespace etsim {

using cplx = std::complex<double>;

double DensityMatrix::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_error() const {
  return std::abs(rho.trace() - cplx(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol,
                             double pos_tol) const {
  if (rho.rows() != basis.dim() || rho.cols() != basis.dim())
    throw std::invalid_argument("DensityMatrix: dimension mismatch");
  if (hermiticity_defect() > herm_tol)
    throw std::domain_error("DensityMatrix: hermiticity defect " +
                            std::to_string(hermiticity_defect()));
  if (trace_error() > trace_tol)
    throw std::domain_error("DensityMatrix: trace error " +
                            std::to_string(trace_error()));
  if (min_eigenvalue() < -pos_tol)
    throw std::domain_error("DensityMatrix: negative eigenvalue " +
                            std::to_string(min_eigenvalue()));
}

Generator::Generator(BasisInfo basis, Eigen::MatrixXcd hamiltonian,
                     std::vector<JumpChannel> channels)
    : basis_(basis), h_(std::move(hamiltonian)), channels_(std::move(channels)) {
  const int n = basis_.dim();
  if (h_.rows() != n || h_.cols() != n)
    throw std::invalid_argument("Generator: Hamiltonian dimension mismatch");
  for (const auto& c : channels_) {
    if (c.op.rows() != n || c.op.cols() != n)
      throw std::invalid_argument("Generator: jump operator dimension mismatch");
    if (c.rate < 0)
      throw std::invalid_argument("Generator: negative jump rate");
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const cplx mi_over_hbar(0.0, -1.0 / units::hbar_ev_fs);
  l_ = mi_over_hbar * (Eigen::kroneckerProduct(id, h_).eval() -
                       Eigen::kroneckerProduct(h_.transpose(), id).eval());
  for (const auto& c : channels_) {
    if (c.rate == 0) continue;
    const Eigen::MatrixXcd ada = c.op.adjoint() * c.op;
    l_ += c.rate *
          (Eigen::kroneckerProduct(c.op.conjugate(), c.op).eval() -
           0.5 * Eigen::kroneckerProduct(id, ada).eval() -
           0.5 * Eigen::kroneckerProduct(ada.transpose(), id).eval());
  }
}

Eigen::MatrixXcd Generator::apply(const Eigen::MatrixXcd& rho) const {
  const int n = basis_.dim();
  Eigen::VectorXcd v = rho.reshaped();
  Eigen::VectorXcd lv = l_ * v;
  return lv.reshaped(n, n);
}

DensityMatrix initial_state(const BasisInfo& basis) {
  DensityMatrix dm;
  dm.basis = basis;
  dm.rho = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  dm.rho(0, 0) = 1.0;  // (m=1, M=0)
  return dm;
}

DensityMatrix initial_state_thermal_donor(const BasisInfo& basis,
                                          double hbar_omega_vib,
                                          double temperature) {
  if (temperature <= 0)
    throw std::domain_error("initial_state_thermal_donor: T <= 0");
  DensityMatrix dm;
  dm.basis = basis;
  dm.rho = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  const double x = hbar_omega_vib / (units::kb_ev_per_k * temperature);
  double z = 0;
  for (int m = 0; m < basis.n_vib; ++m) z += std::exp(-x * m);
  for (int m = 0; m < basis.n_vib; ++m)
    dm.rho(basis.index(0, m), basis.index(0, m)) = std::exp(-x * m) / z;
  return dm;
}

double Trajectory::population(int sample, int surface) const {
  const auto& rho = states.at(sample);
  double p = 0;
  for (int m = 0; m < basis.n_vib; ++m)
    p += rho(basis.index(surface, m), basis.index(surface, m)).real();
  return p;
}

double Trajectory::purity(int sample) const {
  const auto& rho = states.at(sample);
  return (rho * rho).trace().real();
}

namespace {

Trajectory propagate_step_exponential(const Generator& gen,
                                      const DensityMatrix& rho0, double t_end,
                                      double dt) {
  Trajectory traj;
  traj.basis = gen.basis();
  const int n = gen.dim();
  const Eigen::MatrixXcd prop = (gen.matrix() * dt).exp();
  const int nsteps = static_cast<int>(std::llround(t_end / dt));
  Eigen::VectorXcd v = rho0.rho.reshaped();
  traj.times.push_back(0.0);
  traj.states.push_back(rho0.rho);
  for (int i = 1; i <= nsteps; ++i) {
    v = (prop * v).eval();
    traj.times.push_back(i * dt);
    traj.states.push_back(v.reshaped(n, n));
  }
  return traj;
}

Trajectory propagate_rk4(const Generator& gen, const DensityMatrix& rho0,
                         double t_end, double dt) {
  Trajectory traj;
  traj.basis = gen.basis();
  const int n = gen.dim();
  const auto& l = gen.matrix();
  const int nsteps = static_cast<int>(std::llround(t_end / dt));
  Eigen::VectorXcd v = rho0.rho.reshaped();
  traj.times.push_back(0.0);
  traj.states.push_back(rho0.rho);
  Eigen::VectorXcd k1, k2, k3, k4;
  for (int i = 1; i <= nsteps; ++i) {
    k1 = l * v;
    k2 = l * (v + 0.5 * dt * k1);
    k3 = l * (v + 0.5 * dt * k2);
    k4 = l * (v + dt * k3);
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back(i * dt);
    traj.states.push_back(v.reshaped(n, n));
  }
  return traj;
}

Trajectory propagate_spectral(const Generator& gen, const DensityMatrix& rho0,
                              double t_end, double dt) {
  Trajectory traj;
  traj.basis = gen.basis();
  const int n = gen.dim();
  SpectralDecomposition sd;
  try {
    sd = decompose(gen);
  } catch (const std::exception& e) {
    Trajectory fb = propagate_step_exponential(gen, rho0, t_end, dt);
    return fb;
  }
  const Eigen::VectorXcd a =
      sd.eigenvectors.partialPivLu().solve(rho0.rho.reshaped().eval());
  const int nsteps = static_cast<int>(std::llround(t_end / dt));
  for (int i = 0; i <= nsteps; ++i) {
    const double t = i * dt;
    Eigen::VectorXcd phases =
        (sd.eigenvalues.array() * t).exp().matrix().cwiseProduct(a);
    Eigen::VectorXcd v = sd.eigenvectors * phases;
    traj.times.push_back(t);
    traj.states.push_back(v.reshaped(n, n));
  }
  return traj;
}

}  // namespace

Trajectory propagate(const Generator& gen, const DensityMatrix& rho0,
                     double t_end, double dt, Backend backend) {
  if (dt <= 0) throw std::invalid_argument("propagate: dt must be positive");
  if (t_end < 0) throw std::invalid_argument("propagate: negative t_end");
  if (rho0.rho.rows() != gen.dim())
    throw std::invalid_argument("propagate: state/generator dimension mismatch");
  switch (backend) {
    case Backend::step_exponential:
      return propagate_step_exponential(gen, rho0, t_end, dt);
    case Backend::rk4:
      return propagate_rk4(gen, rho0, t_end, dt);
    case Backend::spectral:
      return propagate_spectral(gen, rho0, t_end, dt);
  }
  throw std::logic_error("propagate: unknown backend");
}

void export_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t_fs,P1,P2,P3,purity\n";
  char buf[160];
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g,%.6g\n", traj.times[i],
                  traj.population(static_cast<int>(i), 0),
                  traj.population(static_cast<int>(i), 1),
                  traj.population(static_cast<int>(i), 2),
                  traj.purity(static_cast<int>(i)));
    out << buf;
  }
}

double acceptor_population(const DensityMatrix& rho) {
  double p = 0;
  for (int m = 0; m < rho.basis.n_vib; ++m) {
    const int mu = rho.basis.index(2, m);
    p += rho.rho(mu, mu).real();
  }
  return p;
}

SpectralDecomposition decompose(const Generator& gen) {
  const auto n2 = static_cast<lapack_int>(gen.matrix().rows());
  Eigen::MatrixXcd a = gen.matrix();  // zgeev destroys its input
  SpectralDecomposition sd;
  sd.eigenvalues.resize(n2);
  sd.eigenvectors.resize(n2, n2);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n2, a.data(), n2, sd.eigenvalues.data(),
      nullptr, n2, sd.eigenvectors.data(), n2);
  if (info != 0)
    throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
  return sd;
}

namespace {

// Vec indices of the acceptor diagonal in column-major layout.
std::vector<int> acceptor_vec_indices(const BasisInfo& basis) {
  std::vector<int> idx;
  for (int m = 0; m < basis.n_vib; ++m) {
    const int mu = basis.index(2, m);
    idx.push_back(mu + basis.dim() * mu);
  }
  return idx;
}

}  // namespace

RateResult extract_rate_spectral(const Generator& gen,
                                 const DensityMatrix& rho0,
                                 int trace_samples) {
  RateResult res;
  const SpectralDecomposition sd = decompose(gen);
  const int n2 = static_cast<int>(sd.eigenvalues.size());
  const Eigen::VectorXcd a =
      sd.eigenvectors.partialPivLu().solve(rho0.rho.reshaped().eval());
  const auto widx = acceptor_vec_indices(gen.basis());
  Eigen::VectorXcd wv(n2);  // w . V_k for each mode
  for (int k = 0; k < n2; ++k) {
    cplx s = 0;
    for (int i : widx) s += sd.eigenvectors(i, k);
    wv(k) = s;
  }
  int i0 = 0;
  sd.eigenvalues.cwiseAbs().minCoeff(&i0);
  const double scale = sd.eigenvalues.cwiseAbs().maxCoeff();
  const double null_tol = 1e-10 * scale;
  res.diagnostics["null_eigenvalue_abs"] = std::abs(sd.eigenvalues(i0));
  res.diagnostics["spectral_scale"] = scale;
  if (std::abs(sd.eigenvalues(i0)) > null_tol)
    res.notes.push_back("stationary eigenvalue above tolerance");

  const cplx c0 = a(i0) * wv(i0);
  res.p3_infinity = c0.real();
  double integral = 0;        // fs
  double slowest = scale;     // slowest significant decay, fs^-1
  for (int k = 0; k < n2; ++k) {
    if (k == i0) continue;
    const cplx ck = a(k) * wv(k);
    const double re = sd.eigenvalues(k).real();
    if (std::abs(ck) > 1e-12 && re > -null_tol) {
      throw std::runtime_error(
          "extract_rate_spectral: non-decaying mode with weight " +
          std::to_string(std::abs(ck)) + " at Re(lambda)=" +
          std::to_string(re) + " fs^-1; P3 does not converge");
    }
    integral += (ck / sd.eigenvalues(k)).real();
    if (std::abs(ck) > 1e-12) slowest = std::min(slowest, std::abs(re));
  }
  res.diagnostics["integral_fs"] = integral;
  res.diagnostics["slowest_decay_per_fs"] = slowest;

  double k_fs = 0;
  if (res.p3_infinity < 1e-12) {
    res.notes.push_back("stationary acceptor population ~ 0; rate set to 0");
    res.p3_infinity = std::max(res.p3_infinity, 0.0);
  } else {
    if (integral <= 0)
      throw std::runtime_error("extract_rate_spectral: non-positive integral");
    k_fs = res.p3_infinity / integral;
  }
  res.k_et = units::rate_internal_to_si(k_fs);

  if (trace_samples > 1) {
    const double t_end = (k_fs > 0) ? 8.0 / k_fs : 8.0 / slowest;
    res.p3_trace.reserve(trace_samples);
    for (int s = 0; s < trace_samples; ++s) {
      const double t = t_end * s / (trace_samples - 1);
      cplx p3 = c0;
      for (int k = 0; k < n2; ++k) {
        if (k == i0) continue;
        p3 += a(k) * wv(k) * std::exp(sd.eigenvalues(k) * t);
      }
      res.p3_trace.emplace_back(t, p3.real());
    }
  }
  return res;
}

RateResult extract_rate_time_domain(const Trajectory& traj) {
  RateResult res;
  const std::size_t n = traj.times.size();
  if (n < 8)
    throw std::invalid_argument("extract_rate_time_domain: trajectory too short");
  std::vector<double> p3(n);
  for (std::size_t i = 0; i < n; ++i)
    p3[i] = traj.population(static_cast<int>(i), 2);
  const double t_end = traj.times.back();
  const auto at_fraction = [&](double f) {
    return p3[static_cast<std::size_t>(f * (n - 1))];
  };
  const double residual = std::abs(at_fraction(1.0) - at_fraction(0.5));
  res.diagnostics["plateau_residual"] = residual;
  if (residual >= 1e-4)
    throw std::runtime_error(
        "extract_rate_time_domain: P3 not converged, |P3(T)-P3(T/2)| = " +
        std::to_string(residual));

  // Exponential tail: assume P3 ~ pinf - C exp(-kappa t) over the last half.
  const double d1 = at_fraction(0.75) - at_fraction(0.5);
  const double d2 = at_fraction(1.0) - at_fraction(0.75);
  double pinf = p3.back();
  double tail = 0;
  if (d1 != 0.0) {
    const double q = d2 / d1;
    if (q > 1e-12 && q < 1.0 - 1e-12) {
      pinf = p3.back() + d2 * q / (1.0 - q);
      const double kappa = -std::log(q) / (0.25 * t_end);
      tail = (pinf - p3.back()) / kappa;
      res.diagnostics["tail_rate_per_fs"] = kappa;
    } else {
      res.notes.push_back("tail not exponential; plateau value used as-is");
    }
  }
  res.p3_infinity = pinf;
  double integral = tail;
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = traj.times[i] - traj.times[i - 1];
    integral += 0.5 * dt * ((pinf - p3[i]) + (pinf - p3[i - 1]));
  }
  res.diagnostics["integral_fs"] = integral;
  if (pinf < 1e-12) {
    res.notes.push_back("stationary acceptor population ~ 0; rate set to 0");
    res.k_et = 0;
  } else {
    if (integral <= 0)
      throw std::runtime_error("extract_rate_time_domain: non-positive integral");
    res.k_et = units::rate_internal_to_si(pinf / integral);
  }
  const std::size_t stride = std::max<std::size_t>(1, n / 200);
  for (std::size_t i = 0; i < n; i += stride)
    res.p3_trace.emplace_back(traj.times[i], p3[i]);
  return res;
}

RateResult extract_rate(const Generator& gen, const DensityMatrix& rho0,
                        Backend backend, double dt, double t_end) {
  if (backend == Backend::spectral) return extract_rate_spectral(gen, rho0);
  if (dt <= 0) dt = (backend == Backend::rk4) ? 0.1 : 1.0;
  if (t_end > 0) {
    Trajectory traj = propagate(gen, rho0, t_end, dt, backend);
    return extract_rate_time_domain(traj);
  }
  // Adaptive horizon: escalate until the plateau detector passes.
  std::string last_error = "horizon escalation exhausted";
  for (double horizon = 1e3; horizon <= 1e9; horizon *= 8.0) {
    const double step = std::max(dt, horizon / 65536.0);
    Trajectory traj = propagate(gen, rho0, horizon, step, backend);
    try {
      RateResult res = extract_rate_time_domain(traj);
      res.diagnostics["horizon_fs"] = horizon;
      return res;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw std::runtime_error(std::string("extract_rate: ") + last_error);
}

std::string to_json_string(const RateResult& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["k_et_per_s"] = r.k_et;
  j["p3_infinity"] = r.p3_infinity;
  j["diagnostics"] = r.diagnostics;
  j["notes"] = r.notes;
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& [t, p] : r.p3_trace) trace.push_back({t, p});
  j["p3_trace"] = trace;
  return j.dump(2);
}

}  // namespace etsim
