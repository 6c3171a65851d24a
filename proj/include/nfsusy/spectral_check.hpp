#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nfsusy/model_catalog.hpp"
#include "nfsusy/normalizability.hpp"

namespace nfsusy {

// -1/(2m) d^2 + m'/(2m^2) d + U, i.e. -1/2 d (1/m) d + U.
struct PdmHamiltonian {
  MassProfile mass;
  std::function<real(real)> U;
  Interval domain;
  std::string coordinate = "q";  // "q", or "u" for the unit-mass form on the u-image
};

// H for one side of a PDM model in q.
PdmHamiltonian pdm_hamiltonian(const PdmModelInstance& model, Side side);
// The same operator after the PCT to the unit-mass form in x = +-u(q), restricted to the image of u.
PdmHamiltonian u_form_hamiltonian(const PdmModelInstance& model, Side side);
// Chooses the u-form when u is closed-form, the q-form otherwise. Even models whose potential is
// regular at x = 0 are solved on the full line.
PdmHamiltonian spectral_hamiltonian(const PdmModelInstance& model, Side side);

struct GridSpec {
  std::optional<double> lo, hi;  // box; filled automatically for infinite ends when absent
  int intervals = 2000;          // h = (hi - lo) / intervals on the coarsest level
  int count = 20;                // eigenvalues reported
  double decay = 30.0;           // WKB exponent required beyond the last turning point
  std::optional<double> energy_ceiling;
  int levels = 3;                // grids intervals, 2x, 4x (2 levels skip the order estimate)
};

struct SpectrumResult {
  std::string scheme = "second-order central, conservative";
  std::string coordinate;
  double lo = 0, hi = 0;
  int intervals = 0;  // finest level
  std::vector<double> eigenvalues;  // finest grid, ascending
  std::vector<double> richardson;   // from the two finest grids
  std::vector<double> certified_error;
  std::vector<double> order;  // measured convergence exponent per eigenvalue (NaN when unavailable)
  double symmetry_error = 0.0;
};

// Lowest eigenvalues of the tridiagonal discretization with Dirichlet ends.
// symmetry_error receives max |H(i+1,i) - H(i,i+1)| with both entries built independently.
std::vector<double> fd_eigenvalues(const PdmHamiltonian& h, double lo, double hi, int intervals, int count,
                                   double* symmetry_error = nullptr);
SpectrumResult fd_spectrum(const PdmHamiltonian& h, const GridSpec& grid = {});
// Box selection for infinite ends of h.domain.
std::pair<double, double> auto_box(const PdmHamiltonian& h, double energy, double decay);

struct OffsetFit {
  double offset = 0.0;    // FD eigenvalue - restricted eigenvalue
  double max_mismatch = 0.0;
  std::vector<int> matched_index;  // FD index matched by each restricted eigenvalue
  std::vector<double> mismatch;
};
OffsetFit fit_offset(const std::vector<double>& restricted, const std::vector<double>& fd);

struct MembershipReport {
  std::string model, mass;
  Side side = Side::Minus;
  int N = 0;
  bool sector_normalizable = false;
  int dimension = 0;  // eigenvalues tested (kernel or normalizable prefix)
  std::string subspace;  // "kernel", "prefix(k)" or "none"
  std::vector<double> restricted_eigenvalues;
  double restricted_max_imag = 0.0;
  SpectrumResult spectrum;
  OffsetFit fit;
  double tol = 0.0;
  bool all_present = false;
  bool hard_failure = false;  // normalizable sector with a missing eigenvalue
  std::string note;
};

// Real parts of the eigenvalues of an exact restricted matrix, ascending; max_imag gets the largest |Im|.
std::vector<double> restricted_eigenvalues(const RationalMatrix& m, double* max_imag = nullptr);

MembershipReport verify_eigen_membership(const PdmModelInstance& model, Side side, double tol,
                                         const GridSpec& grid = {});

// ---------------------------------------------------------------------------
// Physical intertwining

struct IntertwineLevel {
  int intervals = 0;
  double h = 0.0;
  double residual = 0.0;  // ||(P H- - H+ P) f|| / ||f||
};

struct IntertwineResult {
  std::string test_function;
  std::vector<IntertwineLevel> levels;
  std::vector<double> reduction;  // residual ratios between successive levels
  bool converged = false;         // every reduction >= 3.5 and finest residual < 1e-5
};

struct TestFunction {
  std::string name;
  std::function<real(real)> f;
};

// P_N = m^{1/4} e^{-W0} z_x^N P^ e^{W0} m^{-1/4}, P^ the gauged charge written in d/dz, z_x = dz/dx.
IntertwineResult intertwine_residual_physical(const PdmModelInstance& model, double lo, double hi,
                                              const TestFunction& f, const std::vector<int>& intervals);
// Norm of P_N f / ||f|| on a grid; used for the kernel property.
double charge_norm_ratio(const PdmModelInstance& model, double lo, double hi, const TestFunction& f, int intervals);

}  // namespace nfsusy
