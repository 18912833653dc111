#include "etsim/solvent.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "etsim/units.hpp"

namespace etsim {

void TriadGeometry::validate() const {
  std::string err;
  if (r1 <= 0 || r2 <= 0 || r3 <= 0) err += "radii must be positive; ";
  if (r12 <= 0 || r13 <= 0) err += "distances must be positive; ";
  if (r12 >= r13) err += "bridge must sit between donor and acceptor (r12 < r13); ";
  if (v13 != 0.0) err += "v13 must be zero (no donor-acceptor overlap); ";
  if (lambda_internal < 0) err += "lambda_internal must be >= 0; ";
  if (hbar_omega_vib <= 0) err += "hbar_omega_vib must be positive; ";
  if (!err.empty()) throw std::invalid_argument("TriadGeometry: " + err);
}

void SolventRecord::validate() const {
  if (!(eps_s >= eps_inf && eps_inf >= 1.0))
    throw std::invalid_argument("SolventRecord " + name +
                                ": need eps_s >= eps_inf >= 1");
  if (lam21_s < 0 || lam31_s < 0)
    throw std::invalid_argument("SolventRecord " + name +
                                ": negative reorganization energy");
}

double coulomb_coeff(const TriadGeometry& geom, Channel ch) {
  const double rm = (ch == Channel::bridge_donor) ? geom.r2 : geom.r3;
  const double rmn = (ch == Channel::bridge_donor) ? geom.r12 : geom.r13;
  return units::coulomb_ev_angstrom *
         (1.0 / (2.0 * rm) + 1.0 / (2.0 * geom.r1) - 1.0 / rmn);
}

double solvent_reorganization(const TriadGeometry& geom, double eps_s,
                              double eps_inf, Channel ch) {
  if (eps_inf < 1.0 || eps_s < eps_inf)
    throw std::domain_error("solvent_reorganization: need eps_s >= eps_inf >= 1");
  return coulomb_coeff(geom, ch) * (1.0 / eps_inf - 1.0 / eps_s);
}

ChannelConstants calibrate_channel_constants(const SolventRecord& reference,
                                             const TriadGeometry& geom) {
  if (!std::isfinite(reference.dg21) || !std::isfinite(reference.dg31))
    throw std::invalid_argument("calibrate_channel_constants: non-finite dG");
  ChannelConstants c;
  c.coulomb_coeff21 = coulomb_coeff(geom, Channel::bridge_donor);
  c.coulomb_coeff31 = coulomb_coeff(geom, Channel::acceptor_donor);
  c.c21 = reference.dg21 - c.coulomb_coeff21 / reference.eps_s;
  c.c31 = reference.dg31 - c.coulomb_coeff31 / reference.eps_s;
  return c;
}

double free_energy_difference(const ChannelConstants& consts, double eps_s,
                              Channel ch) {
  if (eps_s < 1.0)
    throw std::domain_error("free_energy_difference: eps_s < 1");
  return (ch == Channel::bridge_donor)
             ? consts.c21 + consts.coulomb_coeff21 / eps_s
             : consts.c31 + consts.coulomb_coeff31 / eps_s;
}

double scaled_gamma(const SolventRecord& reference, double target_lam21_s) {
  if (reference.lam21_s <= 0)
    throw std::domain_error("scaled_gamma: reference lam21_s must be positive");
  return reference.gamma_tb * target_lam21_s / reference.lam21_s;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double lambda_from_spectral_density(const std::function<double(double)>& j) {
  const auto f = [&j](double w) {
    if (w < 1e-12) w = 1e-12;  // J(w)/w assumed finite at 0
    return j(w) / w;
  };
  const double tol = 1e-12;
  double upper = 1.0;
  double total = integrate(f, 0.0, upper, tol);
  for (int i = 0; i < 60; ++i) {
    const double extra = integrate(f, upper, 2.0 * upper, tol);
    total += extra;
    upper *= 2.0;
    if (std::abs(extra) <= 1e-10 * std::max(1e-30, std::abs(total)) &&
        std::abs(extra) <= 1e-14)
      return units::hbar_ev_fs * total;
  }
  throw std::runtime_error(
      "lambda_from_spectral_density: integral did not converge");
}

const std::vector<SolventRecord>& table1() {
  static const std::vector<SolventRecord> rows = {
      {"cyclohexane", 2.02, 2.00, 0.976, 0.393, 0.007, 0.012, 0.042e11, 0.181e8, 0.7e8},
      {"toluene", 2.38, 2.24, 0.867, 0.202, 0.039, 0.069, 0.227e11, 1.04e8, 0.8e8},
      {"anisole", 4.33, 2.29, 0.590, -0.281, 0.300, 0.524, 1.751e11, 4.24e8, 2.30e8},
      {"dibromoethane", 4.78, 2.37, 0.558, -0.336, 0.312, 0.544, 1.817e11, 4.63e8, 2.45e8},
      {"chlorobenzene", 5.29, 1.93, 0.529, -0.388, 0.481, 0.839, 2.804e11, 3.21e8, 3.63e8},
      {"MTHF", 6.24, 2.00, 0.486, -0.462, 0.497, 0.868, 2.900e11, 3.59e8, 3.58e8},
      {"methylacetate", 6.68, 1.85, 0.471, -0.489, 0.571, 0.996, 3.328e11, 2.96e8, 4.15e8},
      {"trichloroethane", 7.25, 2.06, 0.454, -0.512, 0.508, 0.887, 2.960e11, 3.98e8, 3.50e8},
      {"dichloromethane", 9.08, 2.03, 0.413, -0.590, 0.559, 0.977, 3.264e11, 4.00e8, 3.80e8},
  };
  return rows;
}

const SolventRecord& table1_row(const std::string& name) {
  for (const auto& r : table1())
    if (r.name == name) return r;
  throw std::invalid_argument("unknown solvent: " + name);
}

std::vector<SolventRecord> load_solvents_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != solvent_csv_header)
    throw std::runtime_error(path + ": unexpected header '" + line + "'");
  std::vector<SolventRecord> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 10 fields");
    SolventRecord r;
    r.name = fields[0];
    try {
      r.eps_s = std::stod(fields[1]);
      r.eps_inf = std::stod(fields[2]);
      r.dg21 = std::stod(fields[3]);
      r.dg31 = std::stod(fields[4]);
      r.lam21_s = std::stod(fields[5]);
      r.lam31_s = std::stod(fields[6]);
      r.gamma_tb = std::stod(fields[7]);
      r.k_el_ref = std::stod(fields[8]);
      r.k_vib_ref = std::stod(fields[9]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad numeric field");
    }
    r.validate();
    rows.push_back(std::move(r));
  }
  return rows;
}

void save_solvents_csv(const std::string& path,
                       const std::vector<SolventRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << solvent_csv_header << "\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  r.name.c_str(), r.eps_s, r.eps_inf, r.dg21, r.dg31, r.lam21_s,
                  r.lam31_s, r.gamma_tb, r.k_el_ref, r.k_vib_ref);
    out << buf;
  }
}

}  // namespace etsim
